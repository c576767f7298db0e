#include <algorithm>
#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "avatar/errors.hpp"
#include "avatar/optimizer.hpp"
#include "avatar/t_method.hpp"

namespace avatar {

namespace {

uint64_t mix_seed(uint64_t seed, uint64_t salt) {
    uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace

std::string_view trial_verdict_name(TrialVerdict v) {
    switch (v) {
        case TrialVerdict::SurrogateRejected: return "surrogate-rejected";
        case TrialVerdict::ExecutedInvalid: return "executed-invalid";
        case TrialVerdict::ExecutedValid: return "executed-valid";
    }
    return "executed-invalid";
}

ConfigSpace::ConfigSpace(const std::vector<std::shared_ptr<const Component>>& pool) {
    kind_options_.resize(5);
    for (const auto& component : pool) {
        components_.push_back(component);
        if (component->is_predictor()) {
            predictors_.push_back(component);
        } else {
            kind_options_[template_rank(component->kind())].push_back(component);
        }
    }
    if (predictors_.empty()) throw InvariantError("config space needs at least one predictor");
    for (const auto& options : kind_options_) {
        slot_cardinality_.push_back(static_cast<int32_t>(options.size() + 1));
    }
    slot_cardinality_.push_back(static_cast<int32_t>(predictors_.size()));
    for (const auto& component : components_) {
        slot_cardinality_.push_back(static_cast<int32_t>(component->settings().size()));
    }
}

ConfigEncoding ConfigSpace::random_config(std::mt19937_64& rng) const {
    ConfigEncoding config(width(), 0);
    for (std::size_t pos = 0; pos < 5; ++pos) {
        std::uniform_int_distribution<int32_t> pick(0, slot_cardinality_[pos] - 1);
        config[pos] = pick(rng);
    }
    std::uniform_int_distribution<int32_t> pick_predictor(0, slot_cardinality_[5] - 1);
    config[5] = pick_predictor(rng);

    auto choose_setting = [&](const std::shared_ptr<const Component>& component) {
        std::size_t index = 6;
        for (std::size_t i = 0; i < components_.size(); ++i, ++index) {
            if (components_[i] == component) {
                std::uniform_int_distribution<int32_t> pick(0, slot_cardinality_[index] - 1);
                config[index] = pick(rng);
                return;
            }
        }
    };
    for (std::size_t pos = 0; pos < 5; ++pos) {
        if (config[pos] > 0) choose_setting(kind_options_[pos][config[pos] - 1]);
    }
    choose_setting(predictors_[config[5]]);
    return config;
}

Pipeline ConfigSpace::decode(const ConfigEncoding& config) const {
    if (config.size() != width()) throw InvariantError("config has wrong width");
    std::vector<PipelineStep> steps;
    auto setting_of = [&](const std::shared_ptr<const Component>& component) {
        for (std::size_t i = 0; i < components_.size(); ++i) {
            if (components_[i] == component) {
                int32_t s = config[6 + i];
                if (s < 0 || s >= static_cast<int32_t>(component->settings().size())) {
                    throw InvariantError("setting index out of range for " + component->id());
                }
                return component->settings()[s];
            }
        }
        throw UnknownComponentError(component->id());
    };
    for (std::size_t pos = 0; pos < 5; ++pos) {
        if (config[pos] == 0) continue;
        const auto& component = kind_options_[pos].at(config[pos] - 1);
        steps.push_back({component->id(), setting_of(component)});
    }
    const auto& predictor = predictors_.at(config[5]);
    steps.push_back({predictor->id(), setting_of(predictor)});
    return Pipeline(std::move(steps));
}

ConfigEncoding ConfigSpace::encode(const Pipeline& pipeline) const {
    ConfigEncoding config(width(), 0);
    for (const PipelineStep& step : pipeline.steps()) {
        auto component = find_component(step.component_id);
        int32_t setting_index = -1;
        std::size_t component_index = components_.size();
        for (std::size_t i = 0; i < components_.size(); ++i) {
            if (components_[i]->id() == step.component_id) {
                component_index = i;
                for (std::size_t s = 0; s < components_[i]->settings().size(); ++s) {
                    if (components_[i]->settings()[s] == step.hyperparams) {
                        setting_index = static_cast<int32_t>(s);
                        break;
                    }
                }
            }
        }
        if (component_index == components_.size() || setting_index < 0) {
            throw InvariantError("pipeline step not representable: " + step.component_id);
        }
        config[6 + component_index] = setting_index;
        if (component->is_predictor()) {
            for (std::size_t i = 0; i < predictors_.size(); ++i) {
                if (predictors_[i]->id() == step.component_id) {
                    config[5] = static_cast<int32_t>(i);
                }
            }
        } else {
            std::size_t pos = template_rank(component->kind());
            for (std::size_t i = 0; i < kind_options_[pos].size(); ++i) {
                if (kind_options_[pos][i]->id() == step.component_id) {
                    config[pos] = static_cast<int32_t>(i + 1);
                }
            }
        }
    }
    return config;
}

// --- train/test split and scoring -------------------------------------------

namespace {

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

Split stratified_split(const Dataset& d, uint64_t split_seed) {
    Split split;
    bool numeric = d.class_attribute().kind == AttributeKind::Numeric;
    std::vector<std::size_t> labeled;
    for (std::size_t r = 0; r < d.n_rows(); ++r) {
        if (d.rows()[r][d.class_index()].has_value()) {
            labeled.push_back(r);
        } else {
            split.train.push_back(r);  // unlabeled rows only ever train
        }
    }
    if (numeric) {
        std::stable_sort(labeled.begin(), labeled.end(), [&](std::size_t a, std::size_t b) {
            return std::get<double>(*d.rows()[a][d.class_index()]) <
                   std::get<double>(*d.rows()[b][d.class_index()]);
        });
        for (std::size_t i = 0; i < labeled.size(); ++i) {
            ((i % 10) < 7 ? split.train : split.test).push_back(labeled[i]);
        }
    } else {
        std::map<Value, std::vector<std::size_t>> groups;
        for (std::size_t r : labeled) groups[*d.rows()[r][d.class_index()]].push_back(r);
        std::size_t group_index = 0;
        for (auto& [value, members] : groups) {
            std::mt19937_64 rng(mix_seed(split_seed, group_index++));
            std::shuffle(members.begin(), members.end(), rng);
            std::size_t n_train = (members.size() * 7 + 9) / 10;  // ceil(0.7n)
            n_train = std::min(n_train, members.size());
            for (std::size_t i = 0; i < members.size(); ++i) {
                (i < n_train ? split.train : split.test).push_back(members[i]);
            }
        }
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

Dataset subset_rows(const Dataset& d, const std::vector<std::size_t>& keep) {
    std::vector<Row> rows;
    rows.reserve(keep.size());
    for (std::size_t r : keep) rows.push_back(d.rows()[r]);
    return Dataset(d.name(), d.attributes(), std::move(rows), d.class_index());
}

}  // namespace

ScoreResult score_pipeline(const Pipeline& p, const Dataset& d, uint64_t split_seed,
                           const ExecutionLimits& limits) {
    ScoreResult result;
    Deadline deadline(limits.timeout);

    Dataset current = d;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        const PipelineStep& step = p.steps()[i];
        auto component = find_component(step.component_id);
        ExecutionOutcome outcome = component->execute(current, step.hyperparams, limits, deadline);
        if (!outcome_ok(outcome)) {
            result.failing_component = component->id();
            result.reason = outcome_failure(outcome).reason;
            return result;
        }
        current = std::move(std::get<Dataset>(outcome));
    }

    Split split = stratified_split(current, split_seed);
    const PipelineStep& last = p.steps().back();
    auto predictor = find_component(last.component_id);
    Dataset train = subset_rows(current, split.train);
    ExecutionOutcome outcome = predictor->execute(train, last.hyperparams, limits, deadline);
    if (!outcome_ok(outcome)) {
        result.failing_component = predictor->id();
        result.reason = outcome_failure(outcome).reason;
        return result;
    }
    auto model = std::get<std::shared_ptr<PredictiveModel>>(outcome);

    result.ok = true;
    if (current.class_attribute().kind == AttributeKind::Numeric) {
        double lo = 0.0, hi = 0.0;
        bool first = true;
        for (const Row& row : current.rows()) {
            if (!row[current.class_index()].has_value()) continue;
            double v = std::get<double>(*row[current.class_index()]);
            lo = first ? v : std::min(lo, v);
            hi = first ? v : std::max(hi, v);
            first = false;
        }
        double range = hi - lo;
        double mae = 0.0;
        std::size_t n = 0;
        for (std::size_t r : split.test) {
            Cell predicted = model->predict(current.rows()[r]);
            if (!predicted.has_value()) continue;
            mae += std::fabs(std::get<double>(*predicted) -
                             std::get<double>(*current.rows()[r][current.class_index()]));
            ++n;
        }
        if (n == 0 || range <= 0.0) {
            result.error_rate = 0.0;
        } else {
            result.error_rate = std::clamp(mae / static_cast<double>(n) / range, 0.0, 1.0);
        }
    } else {
        std::size_t wrong = 0, n = 0;
        for (std::size_t r : split.test) {
            Cell predicted = model->predict(current.rows()[r]);
            const Cell& actual = current.rows()[r][current.class_index()];
            ++n;
            if (!predicted.has_value() || !(*predicted == *actual)) ++wrong;
        }
        result.error_rate = n == 0 ? 0.0 : static_cast<double>(wrong) / static_cast<double>(n);
    }
    return result;
}

// --- random-forest error model over config slots ------------------------------

namespace {

struct RfNode {
    bool leaf = true;
    double mean = 1.0;
    std::size_t slot = 0;
    int32_t value = 0;  // left iff config[slot] == value
    int left = -1, right = -1;
};

struct RfTree {
    std::vector<RfNode> nodes;

    double predict(const ConfigEncoding& config) const {
        int at = 0;
        while (!nodes[at].leaf) {
            at = config[nodes[at].slot] == nodes[at].value ? nodes[at].left : nodes[at].right;
        }
        return nodes[at].mean;
    }
};

struct RfSample {
    const ConfigEncoding* config;
    double error;
};

class RandomForest {
public:
    void fit(const std::vector<RfSample>& data, std::size_t width, std::mt19937_64& rng) {
        trees_.clear();
        if (data.empty()) return;
        constexpr int kTrees = 16;
        for (int t = 0; t < kTrees; ++t) {
            std::vector<RfSample> sample;
            sample.reserve(data.size());
            std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
            for (std::size_t i = 0; i < data.size(); ++i) sample.push_back(data[pick(rng)]);
            RfTree tree;
            build(tree, sample, width, rng, 0);
            trees_.push_back(std::move(tree));
        }
    }

    bool ready() const { return !trees_.empty(); }

    double predict(const ConfigEncoding& config) const {
        double s = 0.0;
        for (const RfTree& tree : trees_) s += tree.predict(config);
        return trees_.empty() ? 1.0 : s / static_cast<double>(trees_.size());
    }

private:
    int build(RfTree& tree, const std::vector<RfSample>& rows, std::size_t width,
              std::mt19937_64& rng, int depth) {
        int index = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({});
        double mean = 0.0;
        for (const RfSample& row : rows) mean += row.error;
        mean /= static_cast<double>(rows.size());
        tree.nodes[index].mean = mean;
        if (depth >= 5 || rows.size() < 4) return index;

        double node_sse = 0.0;
        for (const RfSample& row : rows) node_sse += (row.error - mean) * (row.error - mean);
        if (node_sse < 1e-12) return index;

        // Feature bagging: try sqrt(width) random (slot, value) probes.
        std::size_t tries = static_cast<std::size_t>(std::sqrt(static_cast<double>(width))) + 1;
        double best_sse = node_sse - 1e-12;
        std::size_t best_slot = 0;
        int32_t best_value = 0;
        bool found = false;
        std::uniform_int_distribution<std::size_t> pick_slot(0, width - 1);
        std::uniform_int_distribution<std::size_t> pick_row(0, rows.size() - 1);
        for (std::size_t attempt = 0; attempt < tries * 3; ++attempt) {
            std::size_t slot = pick_slot(rng);
            int32_t value = (*rows[pick_row(rng)].config)[slot];
            double sum_l = 0.0, sum_r = 0.0;
            std::size_t n_l = 0, n_r = 0;
            for (const RfSample& row : rows) {
                if ((*row.config)[slot] == value) {
                    sum_l += row.error;
                    ++n_l;
                } else {
                    sum_r += row.error;
                    ++n_r;
                }
            }
            if (n_l == 0 || n_r == 0) continue;
            double mean_l = sum_l / n_l, mean_r = sum_r / n_r;
            double sse = 0.0;
            for (const RfSample& row : rows) {
                double m = (*row.config)[slot] == value ? mean_l : mean_r;
                sse += (row.error - m) * (row.error - m);
            }
            if (sse < best_sse) {
                best_sse = sse;
                best_slot = slot;
                best_value = value;
                found = true;
            }
        }
        if (!found) return index;

        std::vector<RfSample> left, right;
        for (const RfSample& row : rows) {
            ((*row.config)[best_slot] == best_value ? left : right).push_back(row);
        }
        tree.nodes[index].leaf = false;
        tree.nodes[index].slot = best_slot;
        tree.nodes[index].value = best_value;
        tree.nodes[index].left = build(tree, left, width, rng, depth + 1);
        tree.nodes[index].right = build(tree, right, width, rng, depth + 1);
        return index;
    }

    std::vector<RfTree> trees_;
};

}  // namespace

// --- the run loop -------------------------------------------------------------

RunResult optimize(const Dataset& d, const std::vector<std::shared_ptr<const Component>>& pool,
                   const KnowledgeBase& kb, const OptimizeOptions& options) {
    if (options.budget.count() <= 0.0) throw InvariantError("budget must be positive");
    if (options.init_count != 1 && options.init_count != 5) {
        throw InvariantError("init_count must be 1 or 5");
    }

    ConfigSpace space(pool);
    CharacteristicToken token = extract_token(d);
    uint64_t split_seed = mix_seed(options.seed, 0xC0FFEEull);
    ExecutionLimits trial_limits{options.per_trial_timeout, options.seed};

    RunResult run;
    run.dataset = d.name();
    run.budget = options.budget;
    run.init_count = options.init_count;
    run.use_avatar = options.use_avatar;
    run.seed = options.seed;

    auto run_start = std::chrono::steady_clock::now();
    auto elapsed = [&run_start]() {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - run_start);
    };

    for (int init = 0; init < options.init_count; ++init) {
        std::chrono::duration<double> span_end =
            options.budget * (static_cast<double>(init + 1) / options.init_count);
        std::mt19937_64 rng(mix_seed(options.seed, static_cast<uint64_t>(init)));
        std::size_t span_begin = run.trials.size();

        // Error model over this span's executed trials (invalid = 1.0).
        std::vector<std::pair<ConfigEncoding, double>> observations;
        RandomForest forest;
        std::size_t fitted_at = 0;
        bool need_uniform = true;  // one uniform configuration opens each span

        while (elapsed() < span_end) {
            if (options.max_trials > 0 && run.trials.size() >= options.max_trials) break;

            ConfigEncoding config;
            if (need_uniform || observations.size() < 2) {
                config = space.random_config(rng);
            } else {
                if (!forest.ready() || fitted_at != observations.size()) {
                    std::vector<RfSample> samples;
                    std::size_t from = observations.size() > 256 ? observations.size() - 256 : 0;
                    for (std::size_t i = from; i < observations.size(); ++i) {
                        samples.push_back({&observations[i].first, observations[i].second});
                    }
                    forest.fit(samples, space.width(), rng);
                    fitted_at = observations.size();
                }
                constexpr int kCandidates = 100;
                ConfigEncoding best_candidate;
                double best_predicted = 1e300;
                for (int c = 0; c < kCandidates; ++c) {
                    ConfigEncoding candidate = space.random_config(rng);
                    double predicted = forest.predict(candidate);
                    if (predicted < best_predicted ||
                        (predicted == best_predicted && candidate < best_candidate)) {
                        best_predicted = predicted;
                        best_candidate = std::move(candidate);
                    }
                }
                config = std::move(best_candidate);
            }

            auto trial_start = std::chrono::steady_clock::now();
            auto trial_wall = [&trial_start]() {
                return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                     trial_start);
            };

            Pipeline pipeline = space.decode(config);
            if (options.use_avatar) {
                ValidityVerdict verdict = evaluate_validity(pipeline, token, kb);
                if (!verdict.valid) {
                    run.trials.push_back({std::move(config), TrialVerdict::SurrogateRejected,
                                          std::nullopt, trial_wall(), elapsed(), init});
                    continue;  // near-zero cost, propose again
                }
            }

            ScoreResult score = score_pipeline(pipeline, d, split_seed, trial_limits);
            TrialRecord trial;
            trial.verdict = score.ok ? TrialVerdict::ExecutedValid : TrialVerdict::ExecutedInvalid;
            if (score.ok) trial.error_rate = score.error_rate;
            trial.wall_time = trial_wall();
            trial.timestamp = elapsed();
            trial.init_index = init;
            observations.emplace_back(config, score.ok ? score.error_rate : 1.0);
            if (score.ok && (!run.best || score.error_rate < run.best->second)) {
                run.best = {config, score.error_rate};
            }
            trial.config = std::move(config);
            run.trials.push_back(std::move(trial));
            need_uniform = false;
        }
        run.init_spans.emplace_back(span_begin, run.trials.size());
    }
    return run;
}

RunSummary summarize_run(const std::string& run_json) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(run_json);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("run result is not valid JSON: " + std::string(e.what()));
    }
    RunSummary s;
    s.dataset = j.value("dataset", std::string{});
    s.budget_seconds = j.value("budget_seconds", 0.0);
    s.init_count = j.value("init_count", 1);
    s.use_avatar = j.value("use_avatar", false);
    s.seed = j.value("seed", 0ull);

    double best_seen = 2.0;
    double last_timestamp = -1.0;
    bool monotone_time = true;
    s.trial_rows.clear();
    for (const auto& trial : j.at("trials")) {
        ++s.n_trials;
        std::string verdict = trial.at("verdict").get<std::string>();
        double wall = trial.value("wall_time", 0.0);
        double timestamp = trial.value("timestamp", 0.0);
        if (timestamp < last_timestamp) monotone_time = false;
        last_timestamp = timestamp;
        if (verdict == "surrogate-rejected") {
            ++s.surrogate_rejected;
        } else if (verdict == "executed-invalid") {
            ++s.executed_invalid;
            s.time_invalid += wall;
        } else if (verdict == "executed-valid") {
            ++s.executed_valid;
            s.time_valid += wall;
            if (trial.contains("error_rate")) {
                best_seen = std::min(best_seen, trial["error_rate"].get<double>());
            }
        }
        std::ostringstream row;
        row << verdict << ',' << (trial.contains("error_rate") ? trial["error_rate"].dump() : "")
            << ',' << wall << ',' << timestamp << ',' << trial.value("init_index", 0);
        s.trial_rows.push_back(row.str());
    }
    if (s.executed_valid > 0) s.best_error = best_seen;
    double denom = s.time_invalid + s.time_valid;
    s.wasted_pct = denom > 0.0 ? 100.0 * s.time_invalid / denom : 0.0;

    bool best_matches = true;
    if (j.contains("best") && !j["best"].is_null()) {
        double reported = j["best"].value("error_rate", -1.0);
        best_matches = s.best_error && std::fabs(*s.best_error - reported) < 1e-12;
    } else {
        best_matches = !s.best_error.has_value();
    }
    s.consistent = best_matches && monotone_time &&
                   s.n_trials == s.surrogate_rejected + s.executed_invalid + s.executed_valid;
    return s;
}

std::string RunSummary::to_json() const {
    nlohmann::ordered_json out;
    out["schema_version"] = 1;
    out["dataset"] = dataset;
    out["budget_seconds"] = budget_seconds;
    out["init_count"] = init_count;
    out["use_avatar"] = use_avatar;
    out["seed"] = seed;
    out["n_trials"] = n_trials;
    out["surrogate_rejected"] = surrogate_rejected;
    out["executed_invalid"] = executed_invalid;
    out["executed_valid"] = executed_valid;
    if (best_error) {
        out["best_error"] = *best_error;
    } else {
        out["best_error"] = nullptr;
    }
    out["time_invalid"] = time_invalid;
    out["time_valid"] = time_valid;
    out["wasted_pct"] = wasted_pct;
    out["consistent"] = consistent;
    return out.dump(2) + "\n";
}

std::string RunSummary::to_csv() const {
    std::ostringstream os;
    os << "verdict,error_rate,wall_time,timestamp,init_index\n";
    for (const std::string& row : trial_rows) os << row << '\n';
    return os.str();
}

std::string RunResult::to_json(const ConfigSpace& space) const {
    nlohmann::ordered_json out;
    out["schema_version"] = 1;
    out["dataset"] = dataset;
    out["budget_seconds"] = budget.count();
    out["init_count"] = init_count;
    out["use_avatar"] = use_avatar;
    out["seed"] = seed;
    if (best) {
        out["best"] = {{"config", best->first},
                       {"error_rate", best->second},
                       {"pipeline", space.decode(best->first).to_string()}};
    } else {
        out["best"] = nullptr;
    }
    out["init_spans"] = nlohmann::ordered_json::array();
    for (const auto& [lo, hi] : init_spans) {
        out["init_spans"].push_back(nlohmann::ordered_json::array({lo, hi}));
    }
    out["trials"] = nlohmann::ordered_json::array();
    for (const TrialRecord& trial : trials) {
        nlohmann::ordered_json entry;
        entry["config"] = trial.config;
        entry["verdict"] = std::string(trial_verdict_name(trial.verdict));
        if (trial.error_rate) entry["error_rate"] = *trial.error_rate;
        entry["wall_time"] = trial.wall_time.count();
        entry["timestamp"] = trial.timestamp.count();
        entry["init_index"] = trial.init_index;
        out["trials"].push_back(entry);
    }
    return out.dump(2) + "\n";
}

}  // namespace avatar
