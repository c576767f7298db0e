#include <doctest.h>

#include <set>

#include "avatar/errors.hpp"
#include "avatar/knowledge_base.hpp"
#include "helpers.hpp"

using namespace avatar;

namespace {

const std::vector<SyntheticCase>& suite() {
    static const auto s = generate_suite(16, 42);
    return s;
}

ExecutionLimits limits() { return {std::chrono::duration<double>(10.0), 7}; }

const KnowledgeBase& learned() {
    static const KnowledgeBase kb = learn_knowledge_base(pool_roster(), suite(), limits(), 2).kb;
    return kb;
}

}  // namespace

TEST_CASE("the EM-imputer record matches the published capability values") {
    const ComponentKnowledge& record = learned().at("em_impute");
    CHECK(record.capabilities.get(Characteristic::NumericClass) == 1);
    CHECK(record.capabilities.get(Characteristic::MissingValues) == 1);
    CHECK(record.capabilities.get(Characteristic::NumericAttributes) == 1);
    CHECK(record.capabilities.get(Characteristic::NominalClass) == 0);
    CHECK(record.capabilities.get(Characteristic::NominalAttributes) == 0);
    // output 0 - input 1 = -1 on the missing-values case
    CHECK(record.effects.get(Characteristic::MissingValues) == -1);
}

TEST_CASE("predictors and meta-predictors gain the predictive-model effect") {
    for (const auto& component : pool_roster()) {
        const ComponentKnowledge& record = learned().at(component->id());
        if (component->is_predictor()) {
            CHECK(record.effects.get(Characteristic::PredictiveModel) == 1);
        } else {
            CHECK(record.effects.get(Characteristic::PredictiveModel) == 0);
        }
    }
}

TEST_CASE("learned capabilities equal each component's declared contract") {
    // Soundness oracle: replaying stage 2 is what execute() already does, and
    // the suite exercises every characteristic, so learned == declared.
    for (const auto& component : pool_roster()) {
        const ComponentKnowledge& record = learned().at(component->id());
        INFO("component ", component->id());
        CHECK(record.capabilities == component->declared_capabilities());
    }
}

TEST_CASE("frozen effect vectors for the full pool") {
    auto effect_map = [](const ComponentKnowledge& r) {
        std::map<Characteristic, int> out;
        for (Characteristic c : all_characteristics()) {
            if (r.effects.get(c) != 0) out[c] = r.effects.get(c);
        }
        return out;
    };
    using C = Characteristic;
    const std::map<std::string, std::map<C, int>> expected = {
        {"replace_missing",
         {{C::MissingValues, -1}, {C::EmptyNominalAttributes, -1}, {C::UnaryAttributes, 1}}},
        {"em_impute", {{C::MissingValues, -1}}},
        {"iqr_clip", {}},
        {"center", {}},
        {"standardize", {}},
        {"discretize", {{C::NumericAttributes, -1}, {C::NominalAttributes, 1}}},
        {"nominal_to_binary",
         {{C::BinaryAttributes, -1}, {C::NominalAttributes, -1}, {C::EmptyNominalAttributes, -1}}},
        {"whiten", {}},
        {"pca", {}},
        {"periodic_sample", {}},
        {"class_balance", {{C::MissingClassValues, -1}}},
        {"zero_rule", {{C::PredictiveModel, 1}}},
        {"decision_tree", {{C::PredictiveModel, 1}}},
        {"naive_bayes", {{C::PredictiveModel, 1}}},
        {"linear_regression", {{C::PredictiveModel, 1}}},
        {"knn", {{C::PredictiveModel, 1}}},
        {"logistic", {{C::PredictiveModel, 1}}},
        {"bagging", {{C::PredictiveModel, 1}}},
    };
    for (const auto& [id, effects] : expected) {
        INFO("component ", id);
        CHECK(effect_map(learned().at(id)) == effects);
    }
}

TEST_CASE("characteristics never exercised successfully stay zero") {
    std::vector<SyntheticCase> reduced;
    for (const SyntheticCase& c : suite()) {
        if (c.characteristic != Characteristic::DateAttributes &&
            c.characteristic != Characteristic::DateClass) {
            reduced.push_back(c);
        }
    }
    KnowledgeBase kb = learn_knowledge_base(pool_roster(), reduced, limits()).kb;
    for (const auto& [id, record] : kb.records()) {
        CHECK(record.capabilities.get(Characteristic::DateAttributes) == 0);
        CHECK(record.capabilities.get(Characteristic::DateClass) == 0);
    }
}

TEST_CASE("learning twice with the same seed is byte-identical") {
    LearnResult a = learn_knowledge_base(pool_roster(), suite(), limits(), 2);
    LearnResult b = learn_knowledge_base(pool_roster(), suite(), limits(), 1);
    CHECK(kb_to_json(a.kb) == kb_to_json(b.kb));
}

TEST_CASE("a component failing every case keeps all-zero capabilities and is reported") {
    // Shrink the suite to cases the EM imputer rejects.
    std::vector<SyntheticCase> nominal_only;
    for (const SyntheticCase& c : suite()) {
        if (c.class_variant == "nominal") nominal_only.push_back(c);
    }
    LearnResult result = learn_knowledge_base(pool_roster(), nominal_only, limits());
    const ComponentKnowledge& record = result.kb.at("em_impute");
    CHECK(record.capabilities == CapabilityVector{});
    bool warned = false;
    for (const LearnerWarning& w : result.warnings) {
        if (w.component_id == "em_impute" && w.kind == "failed_all_cases") warned = true;
    }
    CHECK(warned);
}

TEST_CASE("save and load round-trip to a structurally equal knowledge base") {
    auto path = test_helpers::temp_dir() / "kb_roundtrip.json";
    save_kb(learned(), path.string());
    KnowledgeBase back = load_kb(path.string());
    CHECK(back == learned());
}

TEST_CASE("a truncated record loads with absent entries defaulting to zero") {
    // The published knowledge-base shape, cut down to five entries per list.
    std::string fragment = R"([{
      "componentId": "em_impute",
      "componentName": "EMImputation",
      "listOfCapabilities": [
        {"mLComponentCapability": "NOMINAL_CLASS", "value": 0},
        {"mLComponentCapability": "NUMERIC_CLASS", "value": 1},
        {"mLComponentCapability": "MISSING_VALUES", "value": 1},
        {"mLComponentCapability": "NOMINAL_ATTRIBUTES", "value": 0},
        {"mLComponentCapability": "NUMERIC_ATTRIBUTES", "value": 1}
      ],
      "listOfEffects": [
        {"mLComponentCapability": "NOMINAL_CLASS", "value": 0},
        {"mLComponentCapability": "NUMERIC_CLASS", "value": 0},
        {"mLComponentCapability": "MISSING_VALUES", "value": -1},
        {"mLComponentCapability": "NOMINAL_ATTRIBUTES", "value": 0},
        {"mLComponentCapability": "NUMERIC_ATTRIBUTES", "value": 0}
      ]
    }])";
    KnowledgeBase kb = kb_from_json(fragment);
    const ComponentKnowledge& record = kb.at("em_impute");
    CHECK(record.component_name == "EMImputation");
    CHECK(record.capabilities.get(Characteristic::NumericClass) == 1);
    CHECK(record.capabilities.get(Characteristic::MissingValues) == 1);
    CHECK(record.capabilities.get(Characteristic::NominalClass) == 0);
    CHECK(record.effects.get(Characteristic::MissingValues) == -1);
    CHECK(record.capabilities.get(Characteristic::UnaryClass) == 0);    // absent -> 0
    CHECK(record.effects.get(Characteristic::PredictiveModel) == 0);    // absent -> 0
}

TEST_CASE("out-of-range values are schema errors naming the field") {
    std::string bad = R"([{
      "componentId": "x",
      "listOfCapabilities": [{"mLComponentCapability": "NUMERIC_CLASS", "value": 2}]
    }])";
    CHECK_THROWS_WITH_AS(kb_from_json(bad),
                         "field value out of range for capability NUMERIC_CLASS: 2", SchemaError);
}

TEST_CASE("merge semantics: union, extension wins, identity") {
    KnowledgeBase base;
    ComponentKnowledge a{"a", "A", {}, {}};
    a.capabilities.set(Characteristic::NumericClass, 1);
    base.insert(a);

    KnowledgeBase extension;
    ComponentKnowledge a2{"a", "A2", {}, {}};
    ComponentKnowledge b{"b", "B", {}, {}};
    extension.insert(a2);
    extension.insert(b);

    MergeResult disjoint = merge_kb(base, KnowledgeBase{});
    CHECK(disjoint.kb.size() == 1);
    CHECK(disjoint.replaced_ids.empty());

    MergeResult merged = merge_kb(base, extension);
    CHECK(merged.kb.size() == 2);
    CHECK(merged.replaced_ids == std::vector<std::string>{"a"});
    CHECK(merged.kb.at("a").component_name == "A2");

    MergeResult identity = merge_kb(KnowledgeBase{}, base);
    CHECK(identity.kb == base);
}

TEST_CASE("provenance records the learner seed and suite hash") {
    CHECK(learned().provenance.learner_seed == 7);
    CHECK(!learned().provenance.suite_manifest_hash.empty());
}
