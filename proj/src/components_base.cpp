#include <sstream>

#include "avatar/components.hpp"
#include "avatar/errors.hpp"

namespace avatar {

std::string_view component_kind_name(ComponentKind k) {
    switch (k) {
        case ComponentKind::MissingValueHandler: return "missing_value_handler";
        case ComponentKind::OutlierRemover: return "outlier_remover";
        case ComponentKind::Transformer: return "transformer";
        case ComponentKind::DimensionalityReducer: return "dimensionality_reducer";
        case ComponentKind::Sampler: return "sampler";
        case ComponentKind::Predictor: return "predictor";
        case ComponentKind::MetaPredictor: return "meta_predictor";
    }
    return "predictor";
}

ComponentKind component_kind_from_name(std::string_view name) {
    for (ComponentKind k :
         {ComponentKind::MissingValueHandler, ComponentKind::OutlierRemover,
          ComponentKind::Transformer, ComponentKind::DimensionalityReducer, ComponentKind::Sampler,
          ComponentKind::Predictor, ComponentKind::MetaPredictor}) {
        if (component_kind_name(k) == name) return k;
    }
    throw SchemaError("unknown component kind: " + std::string(name));
}

bool is_predictor_kind(ComponentKind k) {
    return k == ComponentKind::Predictor || k == ComponentKind::MetaPredictor;
}

int template_rank(ComponentKind k) {
    switch (k) {
        case ComponentKind::MissingValueHandler: return 0;
        case ComponentKind::OutlierRemover: return 1;
        case ComponentKind::Transformer: return 2;
        case ComponentKind::DimensionalityReducer: return 3;
        case ComponentKind::Sampler: return 4;
        case ComponentKind::Predictor: return 5;
        case ComponentKind::MetaPredictor: return 5;
    }
    return 5;
}

bool outcome_ok(const ExecutionOutcome& o) { return !std::holds_alternative<Failure>(o); }

const Failure& outcome_failure(const ExecutionOutcome& o) { return std::get<Failure>(o); }

Component::Component(std::string id, std::string display_name, ComponentKind kind,
                     std::vector<HyperparamSetting> settings,
                     std::vector<Characteristic> rejected)
    : id_(std::move(id)),
      display_name_(std::move(display_name)),
      kind_(kind),
      settings_(std::move(settings)) {
    if (settings_.empty()) settings_.push_back({});
    for (Characteristic c : all_characteristics()) declared_caps_.set(c, 1);
    declared_caps_.set(Characteristic::PredictiveModel, 0);
    for (Characteristic c : rejected) declared_caps_.set(c, 0);
}

ExecutionOutcome Component::execute(const Dataset& d, const HyperparamSetting& params,
                                    const ExecutionLimits& limits) const {
    return execute(d, params, limits, Deadline(limits.timeout));
}

ExecutionOutcome Component::execute(const Dataset& d, const HyperparamSetting& params,
                                    const ExecutionLimits& limits,
                                    const Deadline& deadline) const {
    CharacteristicToken token = extract_token(d);
    std::vector<Characteristic> violated;
    for (Characteristic c : all_characteristics()) {
        if (token.get(c) && !declared_caps_.get(c)) violated.push_back(c);
    }
    if (!violated.empty()) {
        std::ostringstream msg;
        msg << id_ << " cannot handle:";
        for (Characteristic c : violated) msg << ' ' << characteristic_name(c);
        return Failure{FailureReason::Incompatibility, msg.str(), violated};
    }
    if (deadline.expired()) {
        return Failure{FailureReason::Timeout, id_ + " hit the deadline", {}};
    }
    try {
        return run(d, params, limits, deadline);
    } catch (const std::exception& e) {
        return Failure{FailureReason::Internal, id_ + ": " + e.what(), {}};
    }
}

}  // namespace avatar
