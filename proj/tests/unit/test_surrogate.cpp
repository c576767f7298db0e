#include <doctest.h>

#include <random>

#include "avatar/bundled.hpp"
#include "avatar/errors.hpp"
#include "avatar/pipeline_gen.hpp"
#include "avatar/surrogate.hpp"
#include "helpers.hpp"

using namespace avatar;
using test_helpers::token_of;

namespace {

const KnowledgeBase& kb() {
    static const KnowledgeBase learned =
        learn_knowledge_base(pool_roster(), generate_suite(16, 42),
                             {std::chrono::duration<double>(10.0), 7}, 2)
            .kb;
    return learned;
}

Pipeline fig_pipeline() {
    return Pipeline({{"replace_missing", {{"numeric_fill", "mean"}}},
                     {"whiten", {{"epsilon", "1e-6"}}},
                     {"decision_tree", {{"max_depth", "8"}}}});
}

Pipeline swapped_pipeline() {
    return Pipeline::unchecked({{"whiten", {{"epsilon", "1e-6"}}},
                                {"replace_missing", {{"numeric_fill", "mean"}}},
                                {"decision_tree", {{"max_depth", "8"}}}});
}

}  // namespace

TEST_CASE("a three-component pipeline maps to four places and three transitions") {
    SurrogatePipeline s = map_to_surrogate(fig_pipeline(), bundled_dataset("numeric_missing"), kb());
    CHECK(s.places.size() == 4);
    CHECK(s.transitions.size() == 3);
    CHECK(s.places.front() == "start");
    CHECK(s.places.back() == "end");
}

TEST_CASE("the start token is extracted from the input dataset") {
    SurrogatePipeline s = map_to_surrogate(fig_pipeline(), bundled_dataset("numeric_missing"), kb());
    CHECK(s.start_token ==
          token_of({Characteristic::NumericAttributes, Characteristic::MissingValues,
                    Characteristic::NominalClass, Characteristic::SymbolicClass}));
}

TEST_CASE("an id absent from the knowledge base is an unknown-component error") {
    KnowledgeBase partial;
    partial.insert(kb().at("replace_missing"));
    CHECK_THROWS_AS(map_to_surrogate(fig_pipeline(), bundled_dataset("numeric_missing"), partial),
                    UnknownComponentError);
}

TEST_CASE("firing semantics: remove, reject, clamp") {
    ComponentKnowledge knowledge{"imputer", "imputer", {}, {}};
    for (Characteristic c : all_characteristics()) knowledge.capabilities.set(c, 1);
    knowledge.effects.set(Characteristic::MissingValues, -1);

    SUBCASE("missing handled and removed: 1 + (-1) = 0") {
        CharacteristicToken in = token_of({Characteristic::MissingValues});
        FiringResult r = fire_transition(in, knowledge);
        REQUIRE(std::holds_alternative<CharacteristicToken>(r));
        CHECK(std::get<CharacteristicToken>(r).get(Characteristic::MissingValues) == 0);
    }
    SUBCASE("active characteristic without the capability invalidates the component") {
        ComponentKnowledge no_mcv = knowledge;
        no_mcv.capabilities.set(Characteristic::MissingClassValues, 0);
        CharacteristicToken in = token_of({Characteristic::MissingClassValues});
        FiringResult r = fire_transition(in, no_mcv);
        REQUIRE(std::holds_alternative<FiringInvalid>(r));
        CHECK(std::get<FiringInvalid>(r).failing ==
              std::vector<Characteristic>{Characteristic::MissingClassValues});
    }
    SUBCASE("effects clamp at the 0 floor: 0 + (-1) = 0") {
        CharacteristicToken in;
        FiringResult r = fire_transition(in, knowledge);
        REQUIRE(std::holds_alternative<CharacteristicToken>(r));
        CHECK(std::get<CharacteristicToken>(r).get(Characteristic::MissingValues) == 0);
    }
    SUBCASE("effects clamp at the 1 ceiling") {
        ComponentKnowledge adder{"adder", "adder", {}, {}};
        for (Characteristic c : all_characteristics()) adder.capabilities.set(c, 1);
        adder.effects.set(Characteristic::NominalAttributes, 1);
        CharacteristicToken in = token_of({Characteristic::NominalAttributes});
        FiringResult r = fire_transition(in, adder);
        REQUIRE(std::holds_alternative<CharacteristicToken>(r));
        CHECK(std::get<CharacteristicToken>(r).get(Characteristic::NominalAttributes) == 1);
    }
}

TEST_CASE("token closure: fired tokens stay within {0,1} over random inputs") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> bit(0, 1);
    std::uniform_int_distribution<int> effect(-1, 1);
    for (int i = 0; i < 10000; ++i) {
        CharacteristicToken in;
        ComponentKnowledge knowledge{"r", "r", {}, {}};
        for (Characteristic c : all_characteristics()) {
            in.set(c, static_cast<uint8_t>(bit(rng)));
            knowledge.capabilities.set(c, static_cast<uint8_t>(bit(rng)));
            knowledge.effects.set(c, static_cast<int8_t>(effect(rng)));
        }
        FiringResult r = fire_transition(in, knowledge);
        if (std::holds_alternative<CharacteristicToken>(r)) {
            const CharacteristicToken& out = std::get<CharacteristicToken>(r);
            for (Characteristic c : all_characteristics()) {
                REQUIRE((out.get(c) == 0 || out.get(c) == 1));
            }
        }
    }
}

TEST_CASE("the imputer-first chain is valid and ends with a predictive model") {
    ValidityVerdict verdict =
        evaluate_validity(fig_pipeline(), bundled_dataset("numeric_missing"), kb());
    CHECK(verdict.valid);
    CHECK(!verdict.failing_component.has_value());
    REQUIRE(verdict.fired_tokens.size() == 4);  // one token per place
    CHECK(verdict.fired_tokens.back().get(Characteristic::PredictiveModel) == 1);
    // the imputer clears the missing flag before the whitening transform
    CHECK(verdict.fired_tokens[1].get(Characteristic::MissingValues) == 0);
}

TEST_CASE("the whitening-first chain is invalid on missing values") {
    ValidityVerdict verdict =
        evaluate_validity(swapped_pipeline(), bundled_dataset("numeric_missing"), kb());
    CHECK(!verdict.valid);
    REQUIRE(verdict.failing_component.has_value());
    CHECK(*verdict.failing_component == "whiten");
    CHECK(verdict.failing_characteristics ==
          std::vector<Characteristic>{Characteristic::MissingValues});
}

TEST_CASE("a single compatible predictor is one valid firing") {
    Pipeline single(std::vector<PipelineStep>{{"zero_rule", {}}});
    ValidityVerdict verdict =
        evaluate_validity(single, bundled_dataset("pathological_unary"), kb());
    CHECK(verdict.valid);
    CHECK(verdict.fired_tokens.size() == 2);
    CHECK(verdict.fired_tokens.back().get(Characteristic::PredictiveModel) == 1);
}

TEST_CASE("invalid prefixes stay invalid under any extension") {
    std::mt19937_64 rng(23);
    const auto& pool = pool_roster();
    int checked = 0;
    for (uint64_t seed = 0; seed < 400 && checked < 40; ++seed) {
        Pipeline p = random_pipeline(pool, 6, seed);
        for (const Dataset& d : bundled_datasets()) {
            ValidityVerdict verdict = evaluate_validity(p, d, kb());
            if (verdict.valid) continue;
            // Find the failing position, keep the prefix, extend randomly. A
            // prefix ending at the terminal predictor has no legal extension.
            std::size_t failing = 0;
            for (std::size_t i = 0; i < p.size(); ++i) {
                if (p.steps()[i].component_id == *verdict.failing_component) failing = i;
            }
            if (failing + 1 == p.size()) continue;
            ++checked;
            std::vector<PipelineStep> prefix(p.steps().begin(),
                                             p.steps().begin() + failing + 1);
            std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
            std::vector<PipelineStep> extended = prefix;
            for (int extra = 0; extra < 2; ++extra) {
                const auto& c = pool[pick(rng)];
                if (c->is_predictor()) continue;
                extended.push_back({c->id(), c->settings()[0]});
            }
            extended.push_back({"zero_rule", {}});
            ValidityVerdict again = evaluate_validity(Pipeline::unchecked(extended), d, kb());
            CHECK(!again.valid);
        }
    }
    CHECK(checked >= 40);
}

TEST_CASE("template order is enforced for composed pipelines only") {
    CHECK_THROWS_AS(Pipeline({{"whiten", {}}, {"replace_missing", {}}, {"zero_rule", {}}}),
                    InvariantError);
    CHECK_NOTHROW(Pipeline::unchecked({{"whiten", {}}, {"replace_missing", {}}, {"zero_rule", {}}}));
    CHECK_THROWS_AS(Pipeline({{"zero_rule", {}}, {"decision_tree", {}}}), InvariantError);
    CHECK_THROWS_AS(Pipeline(std::vector<PipelineStep>{{"replace_missing", {}}}), InvariantError);
}

TEST_CASE("pipeline json round trip") {
    Pipeline p = fig_pipeline();
    Pipeline back = Pipeline::from_json(p.to_json());
    CHECK(back == p);
}

TEST_CASE("verdict json carries validity, blame and tokens") {
    ValidityVerdict verdict =
        evaluate_validity(swapped_pipeline(), bundled_dataset("numeric_missing"), kb());
    std::string json = verdict.to_json();
    CHECK(json.find("\"valid\": false") != std::string::npos);
    CHECK(json.find("\"failing_component\": \"whiten\"") != std::string::npos);
    CHECK(json.find("MISSING_VALUES") != std::string::npos);
}
