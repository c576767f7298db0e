#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "avatar/errors.hpp"
#include "avatar/knowledge_base.hpp"

namespace avatar {

void EffectVector::set(Characteristic c, int8_t v) {
    if (v < -1 || v > 1) {
        throw InvariantError("effect value " + std::to_string(v) + " outside {-1,0,1}");
    }
    values_[static_cast<int>(c)] = v;
}

void KnowledgeBase::insert(ComponentKnowledge record) {
    auto [it, inserted] = records_.emplace(record.component_id, std::move(record));
    if (!inserted) throw InvariantError("duplicate component id: " + it->first);
}

void KnowledgeBase::replace(ComponentKnowledge record) {
    records_[record.component_id] = std::move(record);
}

bool KnowledgeBase::contains(const std::string& component_id) const {
    return records_.count(component_id) > 0;
}

const ComponentKnowledge& KnowledgeBase::at(const std::string& component_id) const {
    auto it = records_.find(component_id);
    if (it == records_.end()) throw UnknownComponentError(component_id);
    return it->second;
}

LearnResult learn_knowledge_base(const std::vector<std::shared_ptr<const Component>>& pool,
                                 const std::vector<SyntheticCase>& suite,
                                 const ExecutionLimits& limits, int jobs) {
    if (pool.empty() || suite.empty()) {
        throw InvariantError("knowledge-base learning needs a non-empty pool and suite");
    }

    // Stage 2: execute every (component, case) pair. Parallel across pairs;
    // results land in a pre-sized grid so aggregation order never varies.
    struct CellResult {
        bool ok = false;
        CharacteristicToken in_token;
        CharacteristicToken out_token;
        bool has_out_token = false;
    };
    std::vector<std::vector<CellResult>> grid(pool.size(), std::vector<CellResult>(suite.size()));
    std::vector<CharacteristicToken> case_tokens(suite.size());
    for (std::size_t s = 0; s < suite.size(); ++s) {
        case_tokens[s] = extract_token(suite[s].dataset);
    }

    std::atomic<std::size_t> next{0};
    std::size_t total = pool.size() * suite.size();
    auto worker = [&]() {
        for (std::size_t idx = next.fetch_add(1); idx < total; idx = next.fetch_add(1)) {
            std::size_t p = idx / suite.size();
            std::size_t s = idx % suite.size();
            const Component& component = *pool[p];
            ExecutionOutcome outcome =
                component.execute(suite[s].dataset, component.settings()[0], limits);
            CellResult& cell = grid[p][s];
            cell.ok = outcome_ok(outcome);
            cell.in_token = case_tokens[s];
            if (cell.ok && std::holds_alternative<Dataset>(outcome)) {
                cell.out_token = extract_token(std::get<Dataset>(outcome));
                cell.has_out_token = true;
            }
        }
    };
    int n_threads = std::max(1, jobs);
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();
    }

    // Stages 1, 3, 4 per component, in roster order.
    LearnResult result;
    for (std::size_t p = 0; p < pool.size(); ++p) {
        const Component& component = *pool[p];
        ComponentKnowledge record;
        record.component_id = component.id();
        record.component_name = component.display_name();

        bool any_success = false;
        for (std::size_t s = 0; s < suite.size(); ++s) {
            const CellResult& cell = grid[p][s];
            if (!cell.ok) continue;
            any_success = true;
            for (Characteristic c : all_characteristics()) {
                if (cell.in_token.get(c)) record.capabilities.set(c, 1);
            }
            if (component.is_predictor() || !cell.has_out_token) continue;
            for (Characteristic c : all_characteristics()) {
                int delta = static_cast<int>(cell.out_token.get(c)) -
                            static_cast<int>(cell.in_token.get(c));
                int8_t current = record.effects.get(c);
                if (current == 0) {
                    if (delta != 0) record.effects.set(c, static_cast<int8_t>(delta));
                } else if (delta != 0 && delta != current) {
                    std::ostringstream detail;
                    detail << characteristic_name(c) << ": recorded " << int(current)
                           << ", observed " << delta << " on case " << suite[s].name;
                    result.warnings.push_back(
                        {component.id(), "effect_conflict", detail.str()});
                }
            }
        }
        if (component.is_predictor()) {
            record.effects.set(Characteristic::PredictiveModel, 1);
        }
        if (!any_success) {
            result.warnings.push_back({component.id(), "failed_all_cases",
                                       "kept with all-zero capabilities"});
        }
        result.kb.insert(std::move(record));
    }

    std::ostringstream hash;
    hash << std::hex << suite_hash(suite);
    result.kb.provenance = {limits.seed, hash.str()};
    return result;
}

namespace {

nlohmann::ordered_json vector_as_json_list(const ComponentKnowledge& record, bool effects) {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (Characteristic c : all_characteristics()) {
        nlohmann::ordered_json entry;
        entry["mLComponentCapability"] = std::string(characteristic_name(c));
        entry["value"] = effects ? static_cast<int>(record.effects.get(c))
                                 : static_cast<int>(record.capabilities.get(c));
        list.push_back(entry);
    }
    return list;
}

void read_vector_list(const nlohmann::json& list, ComponentKnowledge& record, bool effects) {
    for (const auto& entry : list) {
        if (!entry.contains("mLComponentCapability")) {
            throw SchemaError("list entry missing field mLComponentCapability");
        }
        Characteristic c =
            characteristic_from_name(entry.at("mLComponentCapability").get<std::string>());
        if (!entry.contains("value") || !entry.at("value").is_number_integer()) {
            throw SchemaError("missing or non-integer field value for " +
                              std::string(characteristic_name(c)));
        }
        int v = entry.at("value").get<int>();
        if (effects) {
            if (v < -1 || v > 1) {
                throw SchemaError("field value out of range for effect " +
                                  std::string(characteristic_name(c)) + ": " + std::to_string(v));
            }
            record.effects.set(c, static_cast<int8_t>(v));
        } else {
            if (v < 0 || v > 1) {
                throw SchemaError("field value out of range for capability " +
                                  std::string(characteristic_name(c)) + ": " + std::to_string(v));
            }
            record.capabilities.set(c, static_cast<uint8_t>(v));
        }
    }
}

ComponentKnowledge record_from_json(const nlohmann::json& j) {
    ComponentKnowledge record;
    if (!j.contains("componentId")) throw SchemaError("record missing field componentId");
    record.component_id = j.at("componentId").get<std::string>();
    record.component_name = j.value("componentName", record.component_id);
    // Absent entries default to 0 so truncated records stay loadable.
    if (j.contains("listOfCapabilities")) read_vector_list(j["listOfCapabilities"], record, false);
    if (j.contains("listOfEffects")) read_vector_list(j["listOfEffects"], record, true);
    return record;
}

}  // namespace

std::string kb_to_json(const KnowledgeBase& kb) {
    nlohmann::ordered_json out;
    out["schema_version"] = 1;
    out["provenance"] = {{"learner_seed", kb.provenance.learner_seed},
                         {"suite_manifest_hash", kb.provenance.suite_manifest_hash}};
    out["components"] = nlohmann::ordered_json::array();
    for (const auto& [id, record] : kb.records()) {
        nlohmann::ordered_json entry;
        entry["componentId"] = record.component_id;
        entry["componentName"] = record.component_name;
        entry["listOfCapabilities"] = vector_as_json_list(record, false);
        entry["listOfEffects"] = vector_as_json_list(record, true);
        out["components"].push_back(entry);
    }
    return out.dump(2) + "\n";
}

KnowledgeBase kb_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("knowledge base is not valid JSON: " + std::string(e.what()));
    }
    KnowledgeBase kb;
    const nlohmann::json* records = nullptr;
    if (j.is_array()) {
        records = &j;  // bare list of records
    } else if (j.contains("components")) {
        records = &j["components"];
        if (j.contains("provenance")) {
            kb.provenance.learner_seed = j["provenance"].value("learner_seed", 0ull);
            kb.provenance.suite_manifest_hash =
                j["provenance"].value("suite_manifest_hash", std::string{});
        }
    } else {
        throw SchemaError("knowledge base JSON needs a components array");
    }
    for (const auto& entry : *records) kb.insert(record_from_json(entry));
    return kb;
}

void save_kb(const KnowledgeBase& kb, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file: " + path);
    out << kb_to_json(kb);
}

KnowledgeBase load_kb(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return kb_from_json(buf.str());
}

MergeResult merge_kb(const KnowledgeBase& base, const KnowledgeBase& extension) {
    MergeResult result;
    result.kb = base;
    for (const auto& [id, record] : extension.records()) {
        if (result.kb.contains(id)) result.replaced_ids.push_back(id);
        result.kb.replace(record);
    }
    return result;
}

}  // namespace avatar
