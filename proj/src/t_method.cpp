#include "avatar/t_method.hpp"

namespace avatar {

TMethodResult execute_pipeline(const Pipeline& p, const Dataset& d, const ExecutionLimits& limits) {
    auto start = std::chrono::steady_clock::now();
    Deadline deadline(limits.timeout);
    TMethodResult result;

    Dataset current = d;
    for (const PipelineStep& step : p.steps()) {
        auto component = find_component(step.component_id);
        if (deadline.expired()) {
            result.failing_component = component->id();
            result.reason = FailureReason::Timeout;
            result.elapsed = std::chrono::steady_clock::now() - start;
            return result;
        }
        ExecutionOutcome outcome = component->execute(current, step.hyperparams, limits, deadline);
        if (!outcome_ok(outcome)) {
            result.failing_component = component->id();
            result.reason = outcome_failure(outcome).reason;
            result.elapsed = std::chrono::steady_clock::now() - start;
            return result;
        }
        if (std::holds_alternative<Dataset>(outcome)) {
            current = std::move(std::get<Dataset>(outcome));
        } else {
            result.model = std::get<std::shared_ptr<PredictiveModel>>(outcome);
        }
    }
    result.valid = true;
    result.transformed = std::move(current);
    result.elapsed = std::chrono::steady_clock::now() - start;
    return result;
}

}  // namespace avatar
