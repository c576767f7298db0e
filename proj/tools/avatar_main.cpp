#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "avatar/bench.hpp"
#include "avatar/bundled.hpp"
#include "avatar/errors.hpp"

namespace {

using avatar::Dataset;
using avatar::KnowledgeBase;

enum class LogMode { Text, Json };
LogMode g_log_mode = LogMode::Text;

void log_event(const std::string& event, const nlohmann::ordered_json& fields) {
    if (g_log_mode == LogMode::Json) {
        nlohmann::ordered_json line = {{"event", event}};
        for (const auto& [key, value] : fields.items()) line[key] = value;
        std::cerr << line.dump() << "\n";
    } else {
        std::cerr << event;
        for (const auto& [key, value] : fields.items()) {
            std::cerr << ' ' << key << '='
                      << (value.is_string() ? value.get<std::string>() : value.dump());
        }
        std::cerr << "\n";
    }
}

// Accepts plain seconds ("30") and s/ms/m suffixes ("45s", "500ms", "2m").
std::chrono::duration<double> parse_duration(const std::string& text) {
    std::string t = text;
    double scale = 1.0;
    if (t.size() > 2 && t.substr(t.size() - 2) == "ms") {
        scale = 1e-3;
        t = t.substr(0, t.size() - 2);
    } else if (!t.empty() && t.back() == 's') {
        t = t.substr(0, t.size() - 1);
    } else if (!t.empty() && t.back() == 'm') {
        scale = 60.0;
        t = t.substr(0, t.size() - 1);
    }
    try {
        return std::chrono::duration<double>(std::stod(t) * scale);
    } catch (const std::exception&) {
        throw avatar::Error("cannot parse duration: " + text);
    }
}

Dataset load_any_dataset(const std::string& path) {
    if (path.rfind("bundled:", 0) == 0) return avatar::bundled_dataset(path.substr(8));
    if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") {
        return avatar::load_dataset(path, avatar::DatasetFormat::CsvWithSchema);
    }
    return avatar::load_dataset(path, avatar::DatasetFormat::ArffSubset);
}

std::vector<Dataset> select_datasets(const std::vector<std::string>& names) {
    if (names.empty()) return avatar::bundled_datasets();
    std::vector<Dataset> out;
    for (const std::string& name : names) out.push_back(load_any_dataset(name));
    return out;
}

std::vector<std::shared_ptr<const avatar::Component>> load_pool(const std::string& path) {
    if (path.empty()) return avatar::pool_roster();
    std::ifstream in(path);
    if (!in) throw avatar::ParseError("cannot open pool file: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    std::vector<std::shared_ptr<const avatar::Component>> pool;
    for (const auto& entry : j.at("components")) {
        pool.push_back(avatar::find_component(entry.at("id").get<std::string>()));
    }
    return pool;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw avatar::Error("cannot write file: " + path);
    out << content;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw avatar::ParseError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Config files may be TOML (the stock reader) or a flat JSON object with one
// optional level of subcommand nesting.
class JsonOrTomlConfig : public CLI::ConfigBase {
  public:
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        auto start = input.tellg();
        char first = 0;
        input >> std::ws;
        input.get(first);
        input.clear();
        input.seekg(start);
        if (first != '{') return CLI::ConfigBase::from_config(input);

        nlohmann::json j = nlohmann::json::parse(input);
        std::vector<CLI::ConfigItem> items;
        std::function<void(const nlohmann::json&, std::vector<std::string>)> walk =
            [&](const nlohmann::json& node, std::vector<std::string> parents) {
                for (const auto& [key, value] : node.items()) {
                    if (value.is_object()) {
                        auto deeper = parents;
                        deeper.push_back(key);
                        walk(value, deeper);
                        continue;
                    }
                    CLI::ConfigItem item;
                    item.parents = parents;
                    item.name = key;
                    if (value.is_array()) {
                        for (const auto& v : value) {
                            item.inputs.push_back(v.is_string() ? v.get<std::string>() : v.dump());
                        }
                    } else {
                        item.inputs.push_back(value.is_string() ? value.get<std::string>()
                                                                : value.dump());
                    }
                    items.push_back(std::move(item));
                }
            };
        walk(j, {});
        return items;
    }
};

void echo_effective_config(const CLI::App& app, const CLI::App* sub) {
    nlohmann::ordered_json options = nlohmann::ordered_json::object();
    auto collect = [&options](const CLI::App* a) {
        for (const CLI::Option* opt : a->get_options()) {
            std::string name = opt->get_name();
            if (name == "--help" || name.empty()) continue;
            if (opt->count() > 0) {
                options[name] = CLI::detail::join(opt->results());
            } else if (!opt->get_default_str().empty()) {
                options[name] = opt->get_default_str();
            }
        }
    };
    collect(&app);
    if (sub) collect(sub);
    log_event("effective_config",
              {{"subcommand", sub ? sub->get_name() : ""}, {"options", options}});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Petri-net surrogate validity models for ML pipelines"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    app.config_formatter(std::make_shared<JsonOrTomlConfig>());
    app.set_config("--config", "", "TOML or JSON config file");

    uint64_t seed = 0;
    std::string log_mode = "text";
    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    app.add_option("--seed", seed, "global random seed")->capture_default_str();
    app.add_option("--log", log_mode, "log format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    app.add_option("--jobs", jobs, "worker thread bound")->capture_default_str();

    auto* gen = app.add_subcommand("gen-synthetic", "write the synthetic dataset suite");
    std::string gen_out;
    std::size_t gen_rows = 16;
    gen->add_option("--out", gen_out, "output directory")->required();
    gen->add_option("--rows", gen_rows, "rows per case")->capture_default_str();

    auto* learn = app.add_subcommand("learn-kb", "learn the knowledge base from the suite");
    std::string learn_pool, learn_suite, learn_out, learn_pool_out, learn_warnings;
    std::string learn_timeout = "10s";
    learn->add_option("--pool", learn_pool, "pool.json restricting the component roster");
    learn->add_option("--suite", learn_suite, "synthetic suite directory")->required();
    learn->add_option("--out", learn_out, "knowledge base output path")->required();
    learn->add_option("--pool-out", learn_pool_out, "write the effective roster as pool.json");
    learn->add_option("--warnings", learn_warnings, "learner warnings as JSON lines");
    learn->add_option("--timeout", learn_timeout, "per-execution timeout")->capture_default_str();

    auto* eval = app.add_subcommand("eval", "evaluate a pipeline's validity on a dataset");
    std::string eval_pipeline, eval_data, eval_kb;
    eval->add_option("--pipeline", eval_pipeline, "pipeline JSON path")->required();
    eval->add_option("--data", eval_data, "dataset (.arff, .csv, or bundled:<name>)")->required();
    eval->add_option("--kb", eval_kb, "knowledge base path")->required();

    auto* random_bench = app.add_subcommand("random-bench", "draw a random pipeline corpus");
    std::size_t rb_n = 1000, rb_max_len = 6;
    std::string rb_out, rb_data, rb_kb;
    random_bench->add_option("--n", rb_n, "number of pipelines")->capture_default_str();
    random_bench->add_option("--max-len", rb_max_len, "maximum components")->capture_default_str();
    random_bench->add_option("--out", rb_out, "corpus output path")->required();
    random_bench->add_option("--data", rb_data, "optional dataset for verdict columns");
    random_bench->add_option("--kb", rb_kb, "knowledge base (with --data)");

    auto* bagree = app.add_subcommand("bench-agreement", "AVATAR vs execution verdicts");
    std::size_t ba_n = 1000, ba_max_len = 6;
    std::string ba_out, ba_timeout = "30s", ba_kb;
    std::vector<std::string> ba_datasets;
    bagree->add_option("--n", ba_n, "pipelines per dataset")->capture_default_str();
    bagree->add_option("--max-len", ba_max_len, "maximum components")->capture_default_str();
    bagree->add_option("--out", ba_out, "output directory")->required();
    bagree->add_option("--timeout", ba_timeout, "per-pipeline timeout")->capture_default_str();
    bagree->add_option("--kb", ba_kb, "knowledge base path (default: learn in memory)");
    bagree->add_option("--datasets", ba_datasets, "dataset files (default: bundled corpus)");

    auto* bwasted = app.add_subcommand("bench-wasted", "wasted time of plain optimization");
    std::string bw_budget = "30s", bw_out, bw_kb;
    std::vector<uint64_t> bw_seeds{1, 2, 3};
    std::vector<std::string> bw_datasets;
    bwasted->add_option("--budget", bw_budget, "per-run budget")->capture_default_str();
    bwasted->add_option("--seeds", bw_seeds, "seed list")->capture_default_str();
    bwasted->add_option("--out", bw_out, "output directory")->required();
    bwasted->add_option("--kb", bw_kb, "knowledge base path (default: learn in memory)");
    bwasted->add_option("--datasets", bw_datasets, "dataset files (default: bundled corpus)");

    auto* beffect = app.add_subcommand("bench-effect", "optimizer with vs without the AVATAR");
    std::string be_budget = "60s", be_out, be_kb;
    std::vector<uint64_t> be_seeds{1, 2, 3, 4, 5};
    int be_init = 1;
    std::vector<std::string> be_datasets;
    beffect->add_option("--budget", be_budget, "per-run budget")->capture_default_str();
    beffect->add_option("--seeds", be_seeds, "seed list")->capture_default_str();
    beffect->add_option("--init", be_init, "initial configurations (1 or 5)")
        ->check(CLI::IsMember({1, 5}))
        ->capture_default_str();
    beffect->add_option("--out", be_out, "output directory")->required();
    beffect->add_option("--kb", be_kb, "knowledge base path (default: learn in memory)");
    beffect->add_option("--datasets", be_datasets, "dataset files (default: bundled corpus)");

    auto* opt = app.add_subcommand("optimize", "compose and optimize pipelines on a dataset");
    std::string opt_data, opt_kb, opt_budget = "60s", opt_avatar = "on", opt_out;
    std::string opt_trial_timeout = "5s";
    int opt_init = 1;
    opt->add_option("--data", opt_data, "dataset (.arff, .csv, or bundled:<name>)")->required();
    opt->add_option("--kb", opt_kb, "knowledge base path")->required();
    opt->add_option("--budget", opt_budget, "optimization budget")->capture_default_str();
    opt->add_option("--init", opt_init, "initial configurations (1 or 5)")
        ->check(CLI::IsMember({1, 5}))
        ->capture_default_str();
    opt->add_option("--avatar", opt_avatar, "use the surrogate pre-filter")
        ->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
    opt->add_option("--trial-timeout", opt_trial_timeout, "per-trial timeout")
        ->capture_default_str();
    opt->add_option("--out", opt_out, "run result output path")->required();

    auto* report = app.add_subcommand("report", "summarize a run result");
    std::string rep_in, rep_format = "json", rep_out;
    report->add_option("--in", rep_in, "run.json path")->required();
    report->add_option("--format", rep_format, "output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    report->add_option("--out", rep_out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    g_log_mode = log_mode == "json" ? LogMode::Json : LogMode::Text;
    CLI::App* active = app.get_subcommands().front();
    echo_effective_config(app, active);

    try {
        if (gen->parsed()) {
            auto suite = avatar::generate_suite(gen_rows, seed);
            avatar::write_suite(suite, gen_out, gen_rows, seed);
            log_event("suite_written", {{"dir", gen_out}, {"cases", suite.size()}});
            return 0;
        }

        if (learn->parsed()) {
            auto pool = load_pool(learn_pool);
            auto suite = avatar::load_suite(learn_suite);
            avatar::ExecutionLimits limits{parse_duration(learn_timeout), seed};
            avatar::LearnResult result = avatar::learn_knowledge_base(pool, suite, limits, jobs);
            avatar::save_kb(result.kb, learn_out);
            if (!learn_pool_out.empty()) write_text(learn_pool_out, avatar::pool_to_json());
            std::ostringstream warning_lines;
            for (const avatar::LearnerWarning& w : result.warnings) {
                nlohmann::ordered_json line = {
                    {"component", w.component_id}, {"kind", w.kind}, {"detail", w.detail}};
                warning_lines << line.dump() << "\n";
                log_event("learner_warning", line);
            }
            if (!learn_warnings.empty()) write_text(learn_warnings, warning_lines.str());
            log_event("kb_written", {{"path", learn_out},
                                     {"components", result.kb.size()},
                                     {"warnings", result.warnings.size()}});
            return 0;
        }

        if (eval->parsed()) {
            avatar::Pipeline pipeline = avatar::Pipeline::from_json(read_text(eval_pipeline));
            Dataset dataset = load_any_dataset(eval_data);
            KnowledgeBase kb = avatar::load_kb(eval_kb);
            avatar::ValidityVerdict verdict = avatar::evaluate_validity(pipeline, dataset, kb);
            std::cout << verdict.to_json();
            return 0;
        }

        if (random_bench->parsed()) {
            nlohmann::ordered_json out;
            out["schema_version"] = 1;
            out["n"] = rb_n;
            out["max_len"] = rb_max_len;
            out["seed"] = seed;
            std::map<std::size_t, std::size_t> lengths;
            std::optional<Dataset> dataset;
            std::optional<KnowledgeBase> kb;
            std::optional<avatar::CharacteristicToken> token;
            if (!rb_data.empty()) {
                if (rb_kb.empty()) throw avatar::Error("random-bench with --data also needs --kb");
                dataset = load_any_dataset(rb_data);
                kb = avatar::load_kb(rb_kb);
                token = avatar::extract_token(*dataset);
            }
            out["pipelines"] = nlohmann::ordered_json::array();
            for (std::size_t i = 0; i < rb_n; ++i) {
                avatar::Pipeline p = avatar::random_pipeline(
                    avatar::pool_roster(), rb_max_len, seed + 0x9e3779b97f4a7c15ull * (i + 1));
                ++lengths[p.size()];
                nlohmann::ordered_json entry =
                    nlohmann::ordered_json::parse(p.to_json());
                entry.erase("schema_version");
                if (token) {
                    entry["avatar_valid"] = avatar::evaluate_validity(p, *token, *kb).valid;
                }
                out["pipelines"].push_back(entry);
            }
            nlohmann::ordered_json hist = nlohmann::ordered_json::object();
            for (const auto& [len, count] : lengths) hist[std::to_string(len)] = count;
            out["length_histogram"] = hist;
            write_text(rb_out, out.dump(2) + "\n");
            log_event("corpus_written", {{"path", rb_out}, {"n", rb_n}});
            return 0;
        }

        // The bench commands learn a knowledge base in memory when --kb is
        // absent, so they stay runnable from a clean checkout.
        auto ensure_kb = [&](const std::string& path) {
            if (!path.empty()) return avatar::load_kb(path);
            auto suite = avatar::generate_suite(16, seed);
            avatar::ExecutionLimits limits{std::chrono::duration<double>(10.0), seed};
            return avatar::learn_knowledge_base(avatar::pool_roster(), suite, limits, jobs).kb;
        };

        if (bagree->parsed()) {
            std::filesystem::create_directories(ba_out + "/datasets");
            KnowledgeBase kb = ensure_kb(ba_kb);
            std::vector<Dataset> datasets = select_datasets(ba_datasets);
            for (const Dataset& d : datasets) {
                avatar::save_arff(d, ba_out + "/datasets/" + d.name() + ".arff");
            }
            avatar::ExecutionLimits limits{parse_duration(ba_timeout), seed};
            avatar::AgreementReport result = avatar::bench_agreement(
                avatar::pool_roster(), kb, datasets, ba_n, ba_max_len, limits, seed, jobs);
            write_text(ba_out + "/report.json", result.to_json());
            write_text(ba_out + "/report.csv", result.to_csv());
            for (const avatar::AgreementDatasetReport& dr : result.datasets) {
                log_event("agreement", {{"dataset", dr.dataset},
                                        {"agreement_pct", dr.agreement_pct},
                                        {"disagreements", dr.n_disagreements}});
            }
            return result.consistent() ? 0 : 1;
        }

        if (bwasted->parsed()) {
            std::filesystem::create_directories(bw_out);
            KnowledgeBase kb = ensure_kb(bw_kb);
            std::vector<Dataset> datasets = select_datasets(bw_datasets);
            avatar::WastedTimeReport result = avatar::bench_wasted_time(
                avatar::pool_roster(), kb, datasets, parse_duration(bw_budget), bw_seeds, jobs);
            write_text(bw_out + "/report.json", result.to_json());
            write_text(bw_out + "/report.csv", result.to_csv());
            for (const avatar::WastedAggregate& agg : result.aggregates) {
                log_event("wasted_time", {{"dataset", agg.dataset},
                                          {"mean_pct", agg.mean_pct},
                                          {"max_pct", agg.max_pct}});
            }
            return result.consistent() ? 0 : 1;
        }

        if (beffect->parsed()) {
            std::filesystem::create_directories(be_out);
            KnowledgeBase kb = ensure_kb(be_kb);
            std::vector<Dataset> datasets = select_datasets(be_datasets);
            avatar::EffectReport result =
                avatar::bench_avatar_effect(avatar::pool_roster(), kb, datasets,
                                            parse_duration(be_budget), be_seeds, be_init, jobs);
            write_text(be_out + "/report.json", result.to_json());
            write_text(be_out + "/report.csv", result.to_csv());
            for (const avatar::EffectDatasetStats& s : result.stats) {
                log_event("effect", {{"dataset", s.dataset},
                                     {"mean_evaluated_with", s.with_avatar.mean_evaluated},
                                     {"mean_evaluated_without", s.without_avatar.mean_evaluated},
                                     {"mean_error_with", s.with_avatar.mean_error},
                                     {"mean_error_without", s.without_avatar.mean_error}});
            }
            return result.consistent() ? 0 : 1;
        }

        if (opt->parsed()) {
            Dataset dataset = load_any_dataset(opt_data);
            KnowledgeBase kb = avatar::load_kb(opt_kb);
            avatar::OptimizeOptions options;
            options.budget = parse_duration(opt_budget);
            options.init_count = opt_init;
            options.use_avatar = opt_avatar == "on";
            options.seed = seed;
            options.per_trial_timeout = parse_duration(opt_trial_timeout);
            avatar::RunResult run = avatar::optimize(dataset, avatar::pool_roster(), kb, options);
            avatar::ConfigSpace space(avatar::pool_roster());
            write_text(opt_out, run.to_json(space));
            log_event("run_written", {{"path", opt_out},
                                      {"trials", run.trials.size()},
                                      {"best_error", run.best ? nlohmann::json(run.best->second)
                                                              : nlohmann::json(nullptr)}});
            return 0;
        }

        if (report->parsed()) {
            avatar::RunSummary summary = avatar::summarize_run(read_text(rep_in));
            std::string rendered = rep_format == "csv" ? summary.to_csv() : summary.to_json();
            if (rep_out.empty()) {
                std::cout << rendered;
            } else {
                write_text(rep_out, rendered);
            }
            return summary.consistent ? 0 : 1;
        }
    } catch (const std::exception& e) {
        log_event("error", {{"what", e.what()}});
        return 1;
    }
    return 2;
}
