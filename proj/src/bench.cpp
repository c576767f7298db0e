#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "avatar/bench.hpp"
#include "avatar/errors.hpp"

namespace avatar {

namespace {

uint64_t mix_seed(uint64_t seed, uint64_t salt) {
    uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    };
    std::vector<std::thread> threads;
    int n = std::min<std::size_t>(jobs, count);
    for (int t = 0; t < n; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
}

struct Stats {
    double mean = 0.0, stddev = 0.0, min = 0.0, max = 0.0;
};

Stats summarize(const std::vector<double>& values) {
    Stats s;
    if (values.empty()) return s;
    s.min = s.max = values[0];
    for (double v : values) {
        s.mean += v;
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
    }
    s.mean /= static_cast<double>(values.size());
    for (double v : values) s.stddev += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(s.stddev / static_cast<double>(values.size()));
    return s;
}

}  // namespace

// --- agreement ------------------------------------------------------------------

AgreementReport bench_agreement(const std::vector<std::shared_ptr<const Component>>& pool,
                                const KnowledgeBase& kb, const std::vector<Dataset>& datasets,
                                std::size_t n_pipelines, std::size_t max_len,
                                const ExecutionLimits& limits, uint64_t seed, int jobs) {
    if (n_pipelines < 1) throw InvariantError("bench_agreement needs n_pipelines >= 1");

    std::vector<Pipeline> corpus;
    corpus.reserve(n_pipelines);
    for (std::size_t i = 0; i < n_pipelines; ++i) {
        corpus.push_back(random_pipeline(pool, max_len, mix_seed(seed, i)));
    }

    AgreementReport report;
    report.n_pipelines = n_pipelines;
    report.max_len = max_len;
    report.seed = seed;

    for (const Dataset& dataset : datasets) {
        AgreementDatasetReport dr;
        dr.dataset = dataset.name();
        dr.n_pipelines = n_pipelines;

        auto extract_start = std::chrono::steady_clock::now();
        CharacteristicToken token = extract_token(dataset);
        dr.token_extract_time =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - extract_start)
                .count();

        struct Cell {
            bool avatar_valid = false;
            bool t_valid = false;
            bool t_timeout = false;
            double avatar_time = 0.0;
            double t_time = 0.0;
        };
        std::vector<Cell> cells(n_pipelines);
        parallel_for(n_pipelines, jobs, [&](std::size_t i) {
            Cell& cell = cells[i];
            auto a0 = std::chrono::steady_clock::now();
            ValidityVerdict verdict = evaluate_validity(corpus[i], token, kb);
            cell.avatar_time =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - a0).count();
            cell.avatar_valid = verdict.valid;

            TMethodResult t = execute_pipeline(corpus[i], dataset, limits);
            cell.t_time = t.elapsed.count();
            cell.t_valid = t.valid;
            cell.t_timeout = !t.valid && t.reason == FailureReason::Timeout;
        });

        for (std::size_t i = 0; i < n_pipelines; ++i) {
            const Cell& cell = cells[i];
            (cell.avatar_valid ? dr.avatar_valid : dr.avatar_invalid) += 1;
            (cell.t_valid ? dr.t_valid : dr.t_invalid) += 1;
            (cell.t_valid ? dr.t_time_valid : dr.t_time_invalid) += cell.t_time;
            dr.avatar_time_total += cell.avatar_time;
            if (cell.avatar_valid != cell.t_valid) {
                ++dr.n_disagreements;
                dr.disagreements.push_back({i, corpus[i].to_string(), cell.avatar_valid,
                                            cell.t_valid, cell.t_timeout});
            }
        }
        dr.agreement_pct = 100.0 *
                           static_cast<double>(n_pipelines - dr.n_disagreements) /
                           static_cast<double>(n_pipelines);
        dr.mean_t_time = (dr.t_time_valid + dr.t_time_invalid) / static_cast<double>(n_pipelines);
        dr.mean_avatar_time = dr.avatar_time_total / static_cast<double>(n_pipelines);
        report.datasets.push_back(std::move(dr));
    }
    return report;
}

bool AgreementReport::consistent() const {
    for (const AgreementDatasetReport& dr : datasets) {
        if (dr.avatar_valid + dr.avatar_invalid != dr.n_pipelines) return false;
        if (dr.t_valid + dr.t_invalid != dr.n_pipelines) return false;
        if (dr.disagreements.size() != dr.n_disagreements) return false;
        double expect = 100.0 *
                        static_cast<double>(dr.n_pipelines - dr.n_disagreements) /
                        static_cast<double>(dr.n_pipelines);
        if (std::fabs(expect - dr.agreement_pct) > 1e-9) return false;
    }
    return true;
}

namespace {

nlohmann::ordered_json agreement_results_json(const AgreementReport& r) {
    nlohmann::ordered_json out;
    out["schema_version"] = 1;
    out["n_pipelines"] = r.n_pipelines;
    out["max_len"] = r.max_len;
    out["seed"] = r.seed;
    out["datasets"] = nlohmann::ordered_json::array();
    for (const AgreementDatasetReport& dr : r.datasets) {
        nlohmann::ordered_json entry;
        entry["dataset"] = dr.dataset;
        entry["avatar_invalid"] = dr.avatar_invalid;
        entry["avatar_valid"] = dr.avatar_valid;
        entry["t_invalid"] = dr.t_invalid;
        entry["t_valid"] = dr.t_valid;
        entry["disagreements"] = dr.n_disagreements;
        entry["agreement_pct"] = dr.agreement_pct;
        entry["disagreement_details"] = nlohmann::ordered_json::array();
        for (const Disagreement& dis : dr.disagreements) {
            entry["disagreement_details"].push_back({{"pipeline_index", dis.pipeline_index},
                                                     {"pipeline", dis.pipeline},
                                                     {"avatar_valid", dis.avatar_valid},
                                                     {"t_valid", dis.t_valid},
                                                     {"timeout_attributed", dis.timeout_attributed}});
        }
        out["datasets"].push_back(entry);
    }
    return out;
}

}  // namespace

std::string AgreementReport::results_fingerprint() const {
    return agreement_results_json(*this).dump();
}

std::string AgreementReport::to_json() const {
    nlohmann::ordered_json out = agreement_results_json(*this);
    nlohmann::ordered_json timing = nlohmann::ordered_json::array();
    for (const AgreementDatasetReport& dr : datasets) {
        timing.push_back({{"dataset", dr.dataset},
                          {"t_time_invalid", dr.t_time_invalid},
                          {"t_time_valid", dr.t_time_valid},
                          {"avatar_time_total", dr.avatar_time_total},
                          {"token_extract_time", dr.token_extract_time},
                          {"mean_t_time", dr.mean_t_time},
                          {"mean_avatar_time", dr.mean_avatar_time}});
    }
    out["timing"] = timing;
    return out.dump(2) + "\n";
}

std::string AgreementReport::to_csv() const {
    std::ostringstream os;
    os << "dataset,n_pipelines,avatar_invalid,avatar_valid,t_invalid,t_valid,disagreements,"
          "agreement_pct,t_time_invalid,t_time_valid,avatar_time_total,mean_t_time,"
          "mean_avatar_time\n";
    for (const AgreementDatasetReport& dr : datasets) {
        os << dr.dataset << ',' << dr.n_pipelines << ',' << dr.avatar_invalid << ','
           << dr.avatar_valid << ',' << dr.t_invalid << ',' << dr.t_valid << ','
           << dr.n_disagreements << ',' << dr.agreement_pct << ',' << dr.t_time_invalid << ','
           << dr.t_time_valid << ',' << dr.avatar_time_total << ',' << dr.mean_t_time << ','
           << dr.mean_avatar_time << '\n';
    }
    return os.str();
}

// --- wasted time ------------------------------------------------------------------

WastedTimeReport bench_wasted_time(const std::vector<std::shared_ptr<const Component>>& pool,
                                   const KnowledgeBase& kb, const std::vector<Dataset>& datasets,
                                   std::chrono::duration<double> budget,
                                   const std::vector<uint64_t>& seeds, int jobs) {
    if (seeds.empty()) throw InvariantError("bench_wasted_time needs at least one seed");
    WastedTimeReport report;
    report.budget_seconds = budget.count();
    report.runs.resize(datasets.size() * seeds.size());

    parallel_for(report.runs.size(), jobs, [&](std::size_t cell) {
        const Dataset& dataset = datasets[cell / seeds.size()];
        uint64_t seed = seeds[cell % seeds.size()];
        OptimizeOptions options;
        options.budget = budget;
        options.use_avatar = false;
        options.seed = seed;
        RunResult run = optimize(dataset, pool, kb, options);

        WastedRun& wr = report.runs[cell];
        wr.dataset = dataset.name();
        wr.seed = seed;
        for (const TrialRecord& trial : run.trials) {
            if (trial.verdict == TrialVerdict::ExecutedInvalid) {
                ++wr.n_invalid;
                wr.time_invalid += trial.wall_time.count();
            } else if (trial.verdict == TrialVerdict::ExecutedValid) {
                ++wr.n_valid;
                wr.time_valid += trial.wall_time.count();
            }
        }
        double denom = wr.time_invalid + wr.time_valid;
        wr.wasted_pct = denom > 0.0 ? 100.0 * wr.time_invalid / denom : 0.0;
    });

    for (const Dataset& dataset : datasets) {
        std::vector<double> pcts;
        for (const WastedRun& wr : report.runs) {
            if (wr.dataset == dataset.name()) pcts.push_back(wr.wasted_pct);
        }
        Stats s = summarize(pcts);
        report.aggregates.push_back({dataset.name(), s.mean, s.stddev, s.max});
    }
    return report;
}

bool WastedTimeReport::consistent() const {
    for (const WastedRun& wr : runs) {
        double denom = wr.time_invalid + wr.time_valid;
        double expect = denom > 0.0 ? 100.0 * wr.time_invalid / denom : 0.0;
        if (std::fabs(expect - wr.wasted_pct) > 1e-9) return false;
    }
    return true;
}

std::string WastedTimeReport::to_json() const {
    nlohmann::ordered_json out;
    out["schema_version"] = 1;
    out["budget_seconds"] = budget_seconds;
    out["runs"] = nlohmann::ordered_json::array();
    for (const WastedRun& wr : runs) {
        out["runs"].push_back({{"dataset", wr.dataset},
                               {"seed", wr.seed},
                               {"n_invalid", wr.n_invalid},
                               {"n_valid", wr.n_valid},
                               {"time_invalid", wr.time_invalid},
                               {"time_valid", wr.time_valid},
                               {"wasted_pct", wr.wasted_pct}});
    }
    out["aggregates"] = nlohmann::ordered_json::array();
    for (const WastedAggregate& agg : aggregates) {
        out["aggregates"].push_back({{"dataset", agg.dataset},
                                     {"mean_pct", agg.mean_pct},
                                     {"std_pct", agg.std_pct},
                                     {"max_pct", agg.max_pct}});
    }
    return out.dump(2) + "\n";
}

std::string WastedTimeReport::to_csv() const {
    std::ostringstream os;
    os << "dataset,seed,n_invalid,n_valid,time_invalid,time_valid,wasted_pct\n";
    for (const WastedRun& wr : runs) {
        os << wr.dataset << ',' << wr.seed << ',' << wr.n_invalid << ',' << wr.n_valid << ','
           << wr.time_invalid << ',' << wr.time_valid << ',' << wr.wasted_pct << '\n';
    }
    return os.str();
}

// --- optimizer effect ------------------------------------------------------------

std::vector<TracePoint> convergence_trace(const RunResult& run) {
    std::vector<TracePoint> trace;
    double best = 2.0;
    for (const TrialRecord& trial : run.trials) {
        if (trial.verdict != TrialVerdict::ExecutedValid || !trial.error_rate) continue;
        if (*trial.error_rate < best) {
            best = *trial.error_rate;
            trace.push_back({trial.timestamp.count(), best});
        }
    }
    return trace;
}

EffectReport bench_avatar_effect(const std::vector<std::shared_ptr<const Component>>& pool,
                                 const KnowledgeBase& kb, const std::vector<Dataset>& datasets,
                                 std::chrono::duration<double> budget,
                                 const std::vector<uint64_t>& seeds, int init_count, int jobs) {
    if (seeds.empty()) throw InvariantError("bench_avatar_effect needs at least one seed");
    EffectReport report;
    report.budget_seconds = budget.count();
    report.init_count = init_count;
    std::size_t cells = datasets.size() * seeds.size() * 2;
    report.runs.resize(cells);

    parallel_for(cells, jobs, [&](std::size_t cell) {
        std::size_t pair = cell / 2;
        bool use_avatar = cell % 2 == 0;
        const Dataset& dataset = datasets[pair / seeds.size()];
        uint64_t seed = seeds[pair % seeds.size()];

        OptimizeOptions options;
        options.budget = budget;
        options.use_avatar = use_avatar;
        options.seed = seed;
        options.init_count = init_count;
        RunResult run = optimize(dataset, pool, kb, options);

        EffectRun& er = report.runs[cell];
        er.dataset = dataset.name();
        er.seed = seed;
        er.use_avatar = use_avatar;
        er.init_count = init_count;
        for (const TrialRecord& trial : run.trials) {
            switch (trial.verdict) {
                case TrialVerdict::SurrogateRejected: ++er.surrogate_rejected; break;
                case TrialVerdict::ExecutedInvalid:
                    ++er.executed_invalid;
                    ++er.executed;
                    break;
                case TrialVerdict::ExecutedValid:
                    ++er.executed_valid;
                    ++er.executed;
                    break;
            }
        }
        if (run.best) er.best_error = run.best->second;
        er.trace = convergence_trace(run);
        for (const auto& [lo, hi] : run.init_spans) {
            std::optional<double> span_best;
            std::vector<TracePoint> span_trace;
            for (std::size_t i = lo; i < hi; ++i) {
                const TrialRecord& trial = run.trials[i];
                if (trial.verdict != TrialVerdict::ExecutedValid || !trial.error_rate) continue;
                if (!span_best || *trial.error_rate < *span_best) {
                    span_best = *trial.error_rate;
                    span_trace.push_back({trial.timestamp.count(), *span_best});
                }
            }
            er.per_init_best.push_back(span_best);
            er.per_init_traces.push_back(std::move(span_trace));
        }
    });

    for (const Dataset& dataset : datasets) {
        EffectDatasetStats stats;
        stats.dataset = dataset.name();
        for (bool use_avatar : {true, false}) {
            std::vector<double> errors, evaluated;
            std::size_t with_best = 0;
            for (const EffectRun& er : report.runs) {
                if (er.dataset != dataset.name() || er.use_avatar != use_avatar) continue;
                evaluated.push_back(static_cast<double>(er.executed_valid));
                if (er.best_error) {
                    errors.push_back(*er.best_error);
                    ++with_best;
                }
            }
            Stats err = summarize(errors);
            Stats eval = summarize(evaluated);
            EffectArmStats arm{err.mean, err.stddev, err.min,
                               eval.mean, eval.stddev, eval.max, with_best};
            (use_avatar ? stats.with_avatar : stats.without_avatar) = arm;
        }
        report.stats.push_back(std::move(stats));
    }
    return report;
}

bool EffectReport::consistent() const {
    for (const EffectRun& er : runs) {
        double last = 2.0;
        for (const TracePoint& p : er.trace) {
            if (p.best_error > last) return false;
            last = p.best_error;
        }
        if (er.best_error) {
            std::optional<double> envelope;
            for (const auto& span_best : er.per_init_best) {
                if (span_best && (!envelope || *span_best < *envelope)) envelope = *span_best;
            }
            if (!envelope || std::fabs(*envelope - *er.best_error) > 1e-12) return false;
        }
    }
    return true;
}

namespace {

nlohmann::ordered_json trace_json(const std::vector<TracePoint>& trace) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const TracePoint& p : trace) {
        out.push_back({{"t", p.timestamp}, {"best_error", p.best_error}});
    }
    return out;
}

}  // namespace

std::string EffectReport::to_json() const {
    nlohmann::ordered_json out;
    out["schema_version"] = 1;
    out["budget_seconds"] = budget_seconds;
    out["init_count"] = init_count;
    out["runs"] = nlohmann::ordered_json::array();
    for (const EffectRun& er : runs) {
        nlohmann::ordered_json entry;
        entry["dataset"] = er.dataset;
        entry["seed"] = er.seed;
        entry["use_avatar"] = er.use_avatar;
        entry["executed"] = er.executed;
        entry["executed_valid"] = er.executed_valid;
        entry["executed_invalid"] = er.executed_invalid;
        entry["surrogate_rejected"] = er.surrogate_rejected;
        if (er.best_error) {
            entry["best_error"] = *er.best_error;
        } else {
            entry["best_error"] = nullptr;
        }
        entry["trace"] = trace_json(er.trace);
        entry["per_init_best"] = nlohmann::ordered_json::array();
        for (const auto& b : er.per_init_best) {
            if (b) {
                entry["per_init_best"].push_back(*b);
            } else {
                entry["per_init_best"].push_back(nullptr);
            }
        }
        entry["per_init_traces"] = nlohmann::ordered_json::array();
        for (const auto& t : er.per_init_traces) entry["per_init_traces"].push_back(trace_json(t));
        out["runs"].push_back(entry);
    }
    out["stats"] = nlohmann::ordered_json::array();
    for (const EffectDatasetStats& s : stats) {
        auto arm = [](const EffectArmStats& a) {
            return nlohmann::ordered_json{{"mean_error", a.mean_error},
                                          {"std_error", a.std_error},
                                          {"min_error", a.min_error},
                                          {"mean_evaluated", a.mean_evaluated},
                                          {"std_evaluated", a.std_evaluated},
                                          {"max_evaluated", a.max_evaluated},
                                          {"runs_with_best", a.runs_with_best}};
        };
        out["stats"].push_back({{"dataset", s.dataset},
                                {"with_avatar", arm(s.with_avatar)},
                                {"without_avatar", arm(s.without_avatar)}});
    }
    return out.dump(2) + "\n";
}

std::string EffectReport::to_csv() const {
    std::ostringstream os;
    os << "dataset,seed,use_avatar,executed,executed_valid,executed_invalid,surrogate_rejected,best_error\n";
    for (const EffectRun& er : runs) {
        os << er.dataset << ',' << er.seed << ',' << (er.use_avatar ? 1 : 0) << ',' << er.executed << ',' << er.executed_valid
           << ',' << er.executed_invalid << ',' << er.surrogate_rejected << ',';
        if (er.best_error) os << *er.best_error;
        os << '\n';
    }
    return os.str();
}

}  // namespace avatar
