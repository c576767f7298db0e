#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "avatar/knowledge_base.hpp"
#include "avatar/surrogate.hpp"

namespace avatar {

// Fixed-width categorical encoding of a pipeline: one slot per preprocessor
// template position (0 = absent, else 1 + component choice within the kind),
// one slot for the predictor choice, then one hyperparameter-setting slot per
// pool component (canonical 0 when the component is not selected).
using ConfigEncoding = std::vector<int32_t>;

class ConfigSpace {
public:
    explicit ConfigSpace(const std::vector<std::shared_ptr<const Component>>& pool);

    std::size_t width() const { return slot_cardinality_.size(); }
    const std::vector<int32_t>& slot_cardinality() const { return slot_cardinality_; }

    ConfigEncoding random_config(std::mt19937_64& rng) const;
    Pipeline decode(const ConfigEncoding& config) const;
    ConfigEncoding encode(const Pipeline& pipeline) const;

private:
    std::vector<std::vector<std::shared_ptr<const Component>>> kind_options_;  // 5 positions
    std::vector<std::shared_ptr<const Component>> predictors_;
    std::vector<std::shared_ptr<const Component>> components_;  // pool order
    std::vector<int32_t> slot_cardinality_;
};

enum class TrialVerdict { SurrogateRejected, ExecutedInvalid, ExecutedValid };

std::string_view trial_verdict_name(TrialVerdict v);

struct TrialRecord {
    ConfigEncoding config;
    TrialVerdict verdict = TrialVerdict::ExecutedInvalid;
    std::optional<double> error_rate;              // present iff executed-valid
    std::chrono::duration<double> wall_time{0.0};
    std::chrono::duration<double> timestamp{0.0};  // since run start
    int init_index = 0;
};

struct RunResult {
    std::string dataset;
    std::vector<TrialRecord> trials;
    std::optional<std::pair<ConfigEncoding, double>> best;
    std::chrono::duration<double> budget{0.0};
    int init_count = 1;
    bool use_avatar = false;
    uint64_t seed = 0;
    std::vector<std::pair<std::size_t, std::size_t>> init_spans;  // [lo, hi) into trials

    std::string to_json(const ConfigSpace& space) const;
};

struct OptimizeOptions {
    std::chrono::duration<double> budget{60.0};
    int init_count = 1;
    bool use_avatar = true;
    uint64_t seed = 0;
    std::chrono::duration<double> per_trial_timeout{5.0};
    std::size_t max_trials = 0;  // 0 = bounded by budget only
};

// Sequential model-based composition: each init span starts from one uniform
// configuration, later proposals pick the best of 100 random candidates under
// a random-forest error model fitted to executed trials. With use_avatar the
// surrogate rejects invalid candidates at near-zero cost before execution.
RunResult optimize(const Dataset& d, const std::vector<std::shared_ptr<const Component>>& pool,
                   const KnowledgeBase& kb, const OptimizeOptions& options);

struct ScoreResult {
    bool ok = false;
    double error_rate = 1.0;
    std::string failing_component;
    FailureReason reason = FailureReason::Internal;
};

// Runs the preprocessor prefix on the full dataset, trains the terminal
// predictor on a deterministic stratified 70% split of the transformed rows
// and reports misclassification rate (symbolic class) or range-normalized MAE
// clamped to [0,1] (numeric class) on the held-out 30%.
ScoreResult score_pipeline(const Pipeline& p, const Dataset& d, uint64_t split_seed,
                           const ExecutionLimits& limits);

// Digest of a serialized run: verdict counts, wasted time, best, and the
// internal consistency checks the report command gates its exit code on.
struct RunSummary {
    std::string dataset;
    double budget_seconds = 0.0;
    int init_count = 1;
    bool use_avatar = false;
    uint64_t seed = 0;
    std::size_t n_trials = 0;
    std::size_t surrogate_rejected = 0, executed_invalid = 0, executed_valid = 0;
    std::optional<double> best_error;
    double time_invalid = 0.0, time_valid = 0.0;
    double wasted_pct = 0.0;
    bool consistent = false;
    std::vector<std::string> trial_rows;  // pre-rendered CSV rows

    std::string to_json() const;
    std::string to_csv() const;
};

RunSummary summarize_run(const std::string& run_json);

}  // namespace avatar
