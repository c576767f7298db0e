#pragma once

#include <optional>
#include <string>
#include <vector>

#include "avatar/optimizer.hpp"
#include "avatar/pipeline_gen.hpp"
#include "avatar/t_method.hpp"

namespace avatar {

// --- AVATAR vs T-method verdict agreement --------------------------------------

struct Disagreement {
    std::size_t pipeline_index = 0;
    std::string pipeline;
    bool avatar_valid = false;
    bool t_valid = false;
    bool timeout_attributed = false;  // T-method failure was a timeout
};

struct AgreementDatasetReport {
    std::string dataset;
    std::size_t n_pipelines = 0;
    std::size_t avatar_invalid = 0, avatar_valid = 0;
    std::size_t t_invalid = 0, t_valid = 0;
    std::size_t n_disagreements = 0;
    double agreement_pct = 0.0;
    std::vector<Disagreement> disagreements;
    // timing section (excluded from reproducibility comparisons)
    double t_time_invalid = 0.0, t_time_valid = 0.0;
    double avatar_time_total = 0.0;
    double token_extract_time = 0.0;  // one-off per dataset, reported separately
    double mean_t_time = 0.0, mean_avatar_time = 0.0;
};

struct AgreementReport {
    std::size_t n_pipelines = 0;
    std::size_t max_len = 0;
    uint64_t seed = 0;
    std::vector<AgreementDatasetReport> datasets;

    bool consistent() const;
    std::string to_json() const;
    std::string to_csv() const;
    // The verdict-only content; byte-identical across reruns.
    std::string results_fingerprint() const;
};

// Evaluates one shared corpus of random pipelines against every dataset with
// both methods. Surrogate timing fires transitions against the dataset's
// pre-extracted token, mirroring how the optimizer consumes it; extraction
// cost is reported separately.
AgreementReport bench_agreement(const std::vector<std::shared_ptr<const Component>>& pool,
                                const KnowledgeBase& kb, const std::vector<Dataset>& datasets,
                                std::size_t n_pipelines, std::size_t max_len,
                                const ExecutionLimits& limits, uint64_t seed, int jobs = 1);

// --- wasted time under plain (no-AVATAR) optimization ---------------------------

struct WastedRun {
    std::string dataset;
    uint64_t seed = 0;
    std::size_t n_invalid = 0, n_valid = 0;
    double time_invalid = 0.0, time_valid = 0.0;
    double wasted_pct = 0.0;  // time_invalid / (time_invalid + time_valid)
};

struct WastedAggregate {
    std::string dataset;
    double mean_pct = 0.0, std_pct = 0.0, max_pct = 0.0;
};

struct WastedTimeReport {
    double budget_seconds = 0.0;
    std::vector<WastedRun> runs;
    std::vector<WastedAggregate> aggregates;

    bool consistent() const;
    std::string to_json() const;
    std::string to_csv() const;
};

WastedTimeReport bench_wasted_time(const std::vector<std::shared_ptr<const Component>>& pool,
                                   const KnowledgeBase& kb, const std::vector<Dataset>& datasets,
                                   std::chrono::duration<double> budget,
                                   const std::vector<uint64_t>& seeds, int jobs = 1);

// --- optimizer effect (with vs without AVATAR, single or multi init) ------------

struct TracePoint {
    double timestamp = 0.0;
    double best_error = 1.0;
};

struct EffectRun {
    std::string dataset;
    uint64_t seed = 0;
    bool use_avatar = false;
    int init_count = 1;
    std::size_t executed = 0, surrogate_rejected = 0, executed_invalid = 0;
    std::size_t executed_valid = 0;  // the "successfully evaluated" count
    std::optional<double> best_error;
    std::vector<TracePoint> trace;
    std::vector<std::optional<double>> per_init_best;
    std::vector<std::vector<TracePoint>> per_init_traces;
};

struct EffectArmStats {
    double mean_error = 0.0, std_error = 0.0, min_error = 0.0;
    double mean_evaluated = 0.0, std_evaluated = 0.0, max_evaluated = 0.0;
    std::size_t runs_with_best = 0;
};

struct EffectDatasetStats {
    std::string dataset;
    EffectArmStats with_avatar;
    EffectArmStats without_avatar;
};

struct EffectReport {
    double budget_seconds = 0.0;
    int init_count = 1;
    std::vector<EffectRun> runs;
    std::vector<EffectDatasetStats> stats;

    bool consistent() const;
    std::string to_json() const;
    std::string to_csv() const;
};

// Paired runs per (dataset, seed): identical seeds with and without the
// AVATAR pre-filter. Cells run in parallel across up to `jobs` threads.
EffectReport bench_avatar_effect(const std::vector<std::shared_ptr<const Component>>& pool,
                                 const KnowledgeBase& kb, const std::vector<Dataset>& datasets,
                                 std::chrono::duration<double> budget,
                                 const std::vector<uint64_t>& seeds, int init_count, int jobs = 1);

// Best-error-so-far curve of a run, one point per improvement.
std::vector<TracePoint> convergence_trace(const RunResult& run);

}  // namespace avatar
