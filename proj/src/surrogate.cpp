#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

#include "avatar/errors.hpp"
#include "avatar/surrogate.hpp"

namespace avatar {

Pipeline::Pipeline(std::vector<PipelineStep> steps) : Pipeline(std::move(steps), Unchecked{}) {
    int previous_rank = -1;
    for (std::size_t i = 0; i + 1 < steps_.size(); ++i) {
        auto component = find_component(steps_[i].component_id);
        int rank = template_rank(component->kind());
        if (rank <= previous_rank) {
            throw InvariantError("components out of template order or duplicated kind: " +
                                 component->id());
        }
        previous_rank = rank;
    }
}

Pipeline::Pipeline(std::vector<PipelineStep> steps, Unchecked) : steps_(std::move(steps)) {
    if (steps_.empty()) throw InvariantError("pipeline must not be empty");
    for (std::size_t i = 0; i < steps_.size(); ++i) {
        auto component = find_component(steps_[i].component_id);
        bool last = i + 1 == steps_.size();
        if (component->is_predictor() != last) {
            throw InvariantError(last ? "pipeline must end with a predictor"
                                      : "predictor before the end of the pipeline: " +
                                            component->id());
        }
    }
}

Pipeline Pipeline::unchecked(std::vector<PipelineStep> steps) {
    return Pipeline(std::move(steps), Unchecked{});
}

std::string Pipeline::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < steps_.size(); ++i) {
        if (i) os << " -> ";
        os << steps_[i].component_id;
    }
    return os.str();
}

std::string Pipeline::to_json() const {
    nlohmann::ordered_json out;
    out["schema_version"] = 1;
    out["components"] = nlohmann::ordered_json::array();
    for (const PipelineStep& step : steps_) {
        nlohmann::ordered_json entry;
        entry["component_id"] = step.component_id;
        nlohmann::ordered_json params = nlohmann::ordered_json::object();
        for (const auto& [key, value] : step.hyperparams) params[key] = value;
        entry["hyperparams"] = params;
        out["components"].push_back(entry);
    }
    return out.dump(2) + "\n";
}

Pipeline Pipeline::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("pipeline is not valid JSON: " + std::string(e.what()));
    }
    const nlohmann::json* list = nullptr;
    if (j.is_array()) {
        list = &j;
    } else if (j.contains("components")) {
        list = &j["components"];
    } else {
        throw SchemaError("pipeline JSON needs a components array");
    }
    std::vector<PipelineStep> steps;
    for (const auto& entry : *list) {
        PipelineStep step;
        step.component_id = entry.at("component_id").get<std::string>();
        if (entry.contains("hyperparams")) {
            for (const auto& [key, value] : entry["hyperparams"].items()) {
                step.hyperparams[key] =
                    value.is_string() ? value.get<std::string>() : value.dump();
            }
        }
        steps.push_back(std::move(step));
    }
    return Pipeline::unchecked(std::move(steps));
}

SurrogatePipeline map_to_surrogate(const Pipeline& p, const CharacteristicToken& start_token,
                                   const KnowledgeBase& kb) {
    SurrogatePipeline surrogate;
    surrogate.places.push_back("start");
    for (std::size_t i = 1; i < p.size(); ++i) {
        surrogate.places.push_back("inter_" + std::to_string(i));
    }
    surrogate.places.push_back("end");
    for (const PipelineStep& step : p.steps()) {
        const ComponentKnowledge& record = kb.at(step.component_id);
        surrogate.transitions.push_back({record.component_id, record.capabilities, record.effects});
    }
    surrogate.start_token = start_token;
    return surrogate;
}

SurrogatePipeline map_to_surrogate(const Pipeline& p, const Dataset& d, const KnowledgeBase& kb) {
    return map_to_surrogate(p, extract_token(d), kb);
}

FiringResult fire_transition(const CharacteristicToken& in_token,
                             const CapabilityVector& capabilities, const EffectVector& effects) {
    std::vector<Characteristic> failing;
    for (Characteristic c : all_characteristics()) {
        if (in_token.get(c) && !capabilities.get(c)) failing.push_back(c);
    }
    if (!failing.empty()) return FiringInvalid{std::move(failing)};
    CharacteristicToken out;
    for (Characteristic c : all_characteristics()) {
        int v = static_cast<int>(in_token.get(c)) + static_cast<int>(effects.get(c));
        out.set(c, static_cast<uint8_t>(std::clamp(v, 0, 1)));
    }
    return out;
}

FiringResult fire_transition(const CharacteristicToken& in_token,
                             const ComponentKnowledge& knowledge) {
    return fire_transition(in_token, knowledge.capabilities, knowledge.effects);
}

ValidityVerdict evaluate_validity(const Pipeline& p, const CharacteristicToken& start_token,
                                  const KnowledgeBase& kb) {
    SurrogatePipeline surrogate = map_to_surrogate(p, start_token, kb);
    ValidityVerdict verdict;
    verdict.fired_tokens.push_back(surrogate.start_token);
    CharacteristicToken token = surrogate.start_token;
    for (const SurrogateTransition& transition : surrogate.transitions) {
        FiringResult result = fire_transition(token, transition.capabilities, transition.effects);
        if (std::holds_alternative<FiringInvalid>(result)) {
            verdict.valid = false;
            verdict.failing_component = transition.component_id;
            verdict.failing_characteristics = std::get<FiringInvalid>(result).failing;
            return verdict;
        }
        token = std::get<CharacteristicToken>(result);
        verdict.fired_tokens.push_back(token);
    }
    verdict.valid = true;
    return verdict;
}

ValidityVerdict evaluate_validity(const Pipeline& p, const Dataset& d, const KnowledgeBase& kb) {
    return evaluate_validity(p, extract_token(d), kb);
}

std::string ValidityVerdict::to_json() const {
    nlohmann::ordered_json out;
    out["schema_version"] = 1;
    out["valid"] = valid;
    if (failing_component.has_value()) {
        out["failing_component"] = *failing_component;
        nlohmann::ordered_json failing = nlohmann::ordered_json::array();
        for (Characteristic c : failing_characteristics) {
            failing.push_back(std::string(characteristic_name(c)));
        }
        out["failing_characteristics"] = failing;
    }
    out["tokens"] = nlohmann::ordered_json::array();
    for (const CharacteristicToken& t : fired_tokens) {
        nlohmann::ordered_json token = nlohmann::ordered_json::object();
        for (Characteristic c : all_characteristics()) {
            token[std::string(characteristic_name(c))] = static_cast<int>(t.get(c));
        }
        out["tokens"].push_back(token);
    }
    return out.dump(2) + "\n";
}

}  // namespace avatar
