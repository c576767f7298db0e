#include <doctest.h>

#include "avatar/bundled.hpp"
#include "avatar/t_method.hpp"
#include "helpers.hpp"

using namespace avatar;

namespace {

const KnowledgeBase& kb() {
    static const KnowledgeBase learned =
        learn_knowledge_base(pool_roster(), generate_suite(16, 42),
                             {std::chrono::duration<double>(10.0), 7}, 2)
            .kb;
    return learned;
}

// Every component chain of length <= 3 in template order, default settings.
// The grid-invariance audit in the component tests covers the other settings.
std::vector<Pipeline> all_chains_up_to_three() {
    std::vector<std::shared_ptr<const Component>> preprocessors, predictors;
    for (const auto& c : pool_roster()) {
        (c->is_predictor() ? predictors : preprocessors).push_back(c);
    }
    auto step = [](const std::shared_ptr<const Component>& c) {
        return PipelineStep{c->id(), c->settings()[0]};
    };
    std::vector<Pipeline> chains;
    for (const auto& predictor : predictors) {
        chains.push_back(Pipeline(std::vector<PipelineStep>{step(predictor)}));
        for (const auto& first : preprocessors) {
            chains.push_back(Pipeline({step(first), step(predictor)}));
            for (const auto& second : preprocessors) {
                if (template_rank(second->kind()) <= template_rank(first->kind())) continue;
                chains.push_back(Pipeline({step(first), step(second), step(predictor)}));
            }
        }
    }
    return chains;
}

}  // namespace

TEST_CASE("surrogate verdicts equal execution verdicts for every chain up to length three") {
    const auto chains = all_chains_up_to_three();
    CHECK(chains.size() == 385);  // 7 + 7*11 + 7*43
    ExecutionLimits generous{std::chrono::duration<double>(60.0), 7};
    for (const Dataset& d : bundled_datasets()) {
        CharacteristicToken token = extract_token(d);
        for (const Pipeline& p : chains) {
            bool avatar_valid = evaluate_validity(p, token, kb()).valid;
            TMethodResult t = execute_pipeline(p, d, generous);
            INFO("dataset ", d.name(), " pipeline ", p.to_string());
            if (!t.valid) REQUIRE(t.reason == FailureReason::Incompatibility);
            CHECK(avatar_valid == t.valid);
        }
    }
}
