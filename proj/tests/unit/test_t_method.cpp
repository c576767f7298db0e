#include <doctest.h>

#include "avatar/bundled.hpp"
#include "avatar/pipeline_gen.hpp"
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

ExecutionLimits generous() { return {std::chrono::duration<double>(30.0), 7}; }

}  // namespace

TEST_CASE("executing imputer -> whitening -> tree trains a model") {
    Pipeline p({{"replace_missing", {{"numeric_fill", "mean"}}},
                {"whiten", {{"epsilon", "1e-6"}}},
                {"decision_tree", {{"max_depth", "8"}}}});
    TMethodResult result = execute_pipeline(p, bundled_dataset("numeric_missing"), generous());
    CHECK(result.valid);
    CHECK(result.model != nullptr);
    CHECK(result.elapsed.count() > 0.0);
    REQUIRE(result.transformed.has_value());
    CHECK(extract_token(*result.transformed).get(Characteristic::MissingValues) == 0);
}

TEST_CASE("whitening placed first fails with an incompatibility") {
    Pipeline p = Pipeline::unchecked({{"whiten", {{"epsilon", "1e-6"}}},
                                      {"replace_missing", {{"numeric_fill", "mean"}}},
                                      {"decision_tree", {{"max_depth", "8"}}}});
    TMethodResult result = execute_pipeline(p, bundled_dataset("numeric_missing"), generous());
    CHECK(!result.valid);
    REQUIRE(result.failing_component.has_value());
    CHECK(*result.failing_component == "whiten");
    CHECK(result.reason == FailureReason::Incompatibility);
}

TEST_CASE("a microscopic deadline times any pipeline out") {
    Pipeline p({{"replace_missing", {{"numeric_fill", "mean"}}}, {"decision_tree", {}}});
    ExecutionLimits tiny{std::chrono::duration<double>(1e-9), 7};
    TMethodResult result = execute_pipeline(p, bundled_dataset("numeric_missing"), tiny);
    CHECK(!result.valid);
    CHECK(result.reason == FailureReason::Timeout);
}

TEST_CASE("surrogate and execution agree over a random corpus, no non-timeout disagreements") {
    // Partition of disagreements per the accounting invariant: with generous
    // limits the timeout bucket is empty, so agreement must be exact.
    const auto& pool = pool_roster();
    for (const char* name : {"numeric_missing", "nominal_mix", "mixed_missing_class",
                             "regress_numeric", "pathological_unary"}) {
        const Dataset& d = bundled_dataset(name);
        CharacteristicToken token = extract_token(d);
        for (uint64_t seed = 0; seed < 150; ++seed) {
            Pipeline p = random_pipeline(pool, 6, seed * 31 + 1);
            bool avatar_valid = evaluate_validity(p, token, kb()).valid;
            TMethodResult t = execute_pipeline(p, d, generous());
            INFO("dataset ", std::string(name), " seed ", seed, " pipeline ", p.to_string());
            CHECK(avatar_valid == t.valid);
        }
    }
}

TEST_CASE("surrogate evaluation is at least 100x faster than execution on the large dataset") {
    const Dataset& d = bundled_dataset("clean_numeric");
    REQUIRE(d.n_cells() >= 10000);
    CharacteristicToken token = extract_token(d);
    const auto& pool = pool_roster();

    double t_total = 0.0, avatar_total = 0.0;
    const int n = 60;
    for (uint64_t seed = 0; seed < n; ++seed) {
        Pipeline p = random_pipeline(pool, 6, seed * 17 + 3);
        auto a0 = std::chrono::steady_clock::now();
        evaluate_validity(p, token, kb());
        avatar_total += std::chrono::duration<double>(std::chrono::steady_clock::now() - a0).count();
        TMethodResult t = execute_pipeline(p, d, generous());
        t_total += t.elapsed.count();
    }
    CHECK(t_total / n >= 100.0 * (avatar_total / n));
}
