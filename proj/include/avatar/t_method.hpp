#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>

#include "avatar/surrogate.hpp"

namespace avatar {

// Execution-based validity ground truth: a pipeline is valid iff threading
// the dataset through every preprocessor and training the terminal predictor
// yields a model within the limits.
struct TMethodResult {
    bool valid = false;
    std::shared_ptr<PredictiveModel> model;          // set when valid
    std::optional<std::string> failing_component;    // set when invalid
    FailureReason reason = FailureReason::Internal;  // set when invalid
    std::chrono::duration<double> elapsed{0.0};
    // The preprocessed dataset the terminal predictor was trained on; kept so
    // callers can score the model on matching rows.
    std::optional<Dataset> transformed;
};

TMethodResult execute_pipeline(const Pipeline& p, const Dataset& d, const ExecutionLimits& limits);

}  // namespace avatar
