#include <algorithm>
#include <map>
#include <random>

#include "avatar/errors.hpp"
#include "avatar/pipeline_gen.hpp"

namespace avatar {

Pipeline random_pipeline(const std::vector<std::shared_ptr<const Component>>& pool,
                         std::size_t max_len, uint64_t seed) {
    if (max_len < 1) throw InvariantError("max_len must be at least 1");

    std::map<ComponentKind, std::vector<std::shared_ptr<const Component>>> by_kind;
    std::vector<std::shared_ptr<const Component>> predictors;
    for (const auto& component : pool) {
        if (component->is_predictor()) {
            predictors.push_back(component);
        } else {
            by_kind[component->kind()].push_back(component);
        }
    }
    if (predictors.empty()) throw InvariantError("pool has no predictor");

    std::vector<ComponentKind> kinds;
    for (const auto& [kind, components] : by_kind) kinds.push_back(kind);
    std::sort(kinds.begin(), kinds.end(),
              [](ComponentKind a, ComponentKind b) { return template_rank(a) < template_rank(b); });

    std::mt19937_64 rng(seed);
    std::size_t max_preprocessors = std::min(max_len - 1, kinds.size());
    std::uniform_int_distribution<std::size_t> size_dist(0, max_preprocessors);
    std::size_t n_preprocessors = size_dist(rng);

    std::vector<ComponentKind> chosen = kinds;
    std::shuffle(chosen.begin(), chosen.end(), rng);
    chosen.resize(n_preprocessors);
    std::sort(chosen.begin(), chosen.end(),
              [](ComponentKind a, ComponentKind b) { return template_rank(a) < template_rank(b); });

    std::vector<PipelineStep> steps;
    for (ComponentKind kind : chosen) {
        const auto& candidates = by_kind[kind];
        std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
        const auto& component = candidates[pick(rng)];
        std::uniform_int_distribution<std::size_t> setting(0, component->settings().size() - 1);
        steps.push_back({component->id(), component->settings()[setting(rng)]});
    }
    std::uniform_int_distribution<std::size_t> pick(0, predictors.size() - 1);
    const auto& predictor = predictors[pick(rng)];
    std::uniform_int_distribution<std::size_t> setting(0, predictor->settings().size() - 1);
    steps.push_back({predictor->id(), predictor->settings()[setting(rng)]});
    return Pipeline(std::move(steps));
}

}  // namespace avatar
