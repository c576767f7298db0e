#include <doctest.h>

#include <map>
#include <set>

#include "avatar/pipeline_gen.hpp"
#include "helpers.hpp"

using namespace avatar;

TEST_CASE("max_len of one forces a single-predictor pipeline") {
    for (uint64_t seed = 0; seed < 50; ++seed) {
        Pipeline p = random_pipeline(pool_roster(), 1, seed);
        CHECK(p.size() == 1);
        CHECK(find_component(p.steps().back().component_id)->is_predictor());
    }
}

TEST_CASE("ten thousand draws respect the template and cover all lengths") {
    const auto& pool = pool_roster();
    std::map<std::size_t, int> length_histogram;
    for (uint64_t seed = 0; seed < 10000; ++seed) {
        Pipeline p = random_pipeline(pool, 6, seed);
        ++length_histogram[p.size()];
        // Invariant oracle: ends in a predictor, preprocessor kinds strictly
        // ascend in template order, each kind at most once.
        CHECK(find_component(p.steps().back().component_id)->is_predictor());
        int previous_rank = -1;
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
            auto component = find_component(p.steps()[i].component_id);
            CHECK(!component->is_predictor());
            int rank = template_rank(component->kind());
            CHECK(rank > previous_rank);
            previous_rank = rank;
        }
        CHECK(p.size() >= 1);
        CHECK(p.size() <= 6);
    }
    for (std::size_t len = 1; len <= 6; ++len) {
        INFO("length ", len);
        CHECK(length_histogram[len] > 0);
    }
}

TEST_CASE("equal seeds give identical pipelines") {
    for (uint64_t seed : {0ull, 7ull, 123456789ull}) {
        CHECK(random_pipeline(pool_roster(), 6, seed) == random_pipeline(pool_roster(), 6, seed));
    }
    CHECK(random_pipeline(pool_roster(), 6, 1) != random_pipeline(pool_roster(), 6, 2));
}

TEST_CASE("hyperparameter settings come from each component's grid") {
    for (uint64_t seed = 0; seed < 300; ++seed) {
        Pipeline p = random_pipeline(pool_roster(), 6, seed);
        for (const PipelineStep& step : p.steps()) {
            auto component = find_component(step.component_id);
            bool in_grid = false;
            for (const HyperparamSetting& s : component->settings()) {
                if (s == step.hyperparams) in_grid = true;
            }
            CHECK(in_grid);
        }
    }
}
