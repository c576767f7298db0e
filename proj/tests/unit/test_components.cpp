#include <doctest.h>

#include <map>
#include <set>

#include "avatar/bundled.hpp"
#include "avatar/components.hpp"
#include "avatar/synthetic.hpp"
#include "helpers.hpp"

using namespace avatar;

namespace {

const std::vector<SyntheticCase>& suite() {
    static const auto s = generate_suite(16, 42);
    return s;
}

ExecutionLimits limits() { return {std::chrono::duration<double>(10.0), 7}; }

bool rejects(const Component& c, const CharacteristicToken& token) {
    for (Characteristic ch : all_characteristics()) {
        if (token.get(ch) && !c.declared_capabilities().get(ch)) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("roster shape: unique ids, kind minimums, bounded grids") {
    const auto& pool = pool_roster();
    std::set<std::string> ids;
    std::map<ComponentKind, int> kinds;
    for (const auto& c : pool) {
        CHECK(ids.insert(c->id()).second);
        ++kinds[c->kind()];
        CHECK(c->settings().size() >= 1);
        CHECK(c->settings().size() <= 4);
    }
    CHECK(kinds[ComponentKind::MissingValueHandler] >= 2);
    CHECK(kinds[ComponentKind::OutlierRemover] >= 1);
    CHECK(kinds[ComponentKind::Transformer] >= 4);
    CHECK(kinds[ComponentKind::DimensionalityReducer] >= 1);
    CHECK(kinds[ComponentKind::Sampler] >= 2);
    CHECK(kinds[ComponentKind::Predictor] >= 6);
    CHECK(kinds[ComponentKind::MetaPredictor] >= 1);
}

TEST_CASE("the pool spans numeric-only and nominal-only predictors") {
    // Oracle: actually run every predictor on the two class-kind cases.
    const Dataset* numeric_case = nullptr;
    const Dataset* nominal_case = nullptr;
    for (const SyntheticCase& c : suite()) {
        if (c.characteristic == Characteristic::NumericClass) numeric_case = &c.dataset;
        if (c.characteristic == Characteristic::NominalClass) nominal_case = &c.dataset;
    }
    REQUIRE(numeric_case);
    REQUIRE(nominal_case);
    bool some_reject_numeric = false, some_reject_nominal = false, some_accept_both = false;
    for (const auto& c : pool_roster()) {
        if (!c->is_predictor()) continue;
        bool ok_numeric = outcome_ok(c->execute(*numeric_case, c->settings()[0], limits()));
        bool ok_nominal = outcome_ok(c->execute(*nominal_case, c->settings()[0], limits()));
        some_reject_numeric |= !ok_numeric && ok_nominal;
        some_reject_nominal |= !ok_nominal && ok_numeric;
        some_accept_both |= ok_numeric && ok_nominal;
    }
    CHECK(some_reject_numeric);
    CHECK(some_reject_nominal);
    CHECK(some_accept_both);
}

TEST_CASE("every preprocessor transforms at least one synthetic case") {
    for (const auto& c : pool_roster()) {
        if (c->is_predictor()) continue;
        bool produced = false;
        for (const SyntheticCase& sc : suite()) {
            ExecutionOutcome out = c->execute(sc.dataset, c->settings()[0], limits());
            if (outcome_ok(out)) {
                CHECK(std::holds_alternative<Dataset>(out));
                produced = true;
            }
        }
        INFO("component ", c->id());
        CHECK(produced);
    }
}

TEST_CASE("imputation removes the missing-values flag") {
    for (const SyntheticCase& sc : suite()) {
        if (sc.characteristic != Characteristic::MissingValues) continue;
        auto replace = find_component("replace_missing");
        ExecutionOutcome out = replace->execute(sc.dataset, replace->settings()[0], limits());
        REQUIRE(outcome_ok(out));
        CHECK(extract_token(std::get<Dataset>(out)).get(Characteristic::MissingValues) == 0);
        if (sc.class_variant == "numeric") {
            auto em = find_component("em_impute");
            ExecutionOutcome em_out = em->execute(sc.dataset, em->settings()[0], limits());
            REQUIRE(outcome_ok(em_out));
            CHECK(extract_token(std::get<Dataset>(em_out)).get(Characteristic::MissingValues) == 0);
        }
    }
}

TEST_CASE("the whitening transform rejects missing values") {
    const Dataset& d = bundled_dataset("numeric_missing");
    auto whiten = find_component("whiten");
    ExecutionOutcome out = whiten->execute(d, whiten->settings()[0], limits());
    REQUIRE(!outcome_ok(out));
    const Failure& failure = outcome_failure(out);
    CHECK(failure.reason == FailureReason::Incompatibility);
    bool lists_missing = false;
    for (Characteristic c : failure.violated) {
        if (c == Characteristic::MissingValues) lists_missing = true;
    }
    CHECK(lists_missing);
}

TEST_CASE("zero-rule predicts the majority class") {
    std::vector<Attribute> attrs = {{"x", AttributeKind::Numeric, {}},
                                    {"cls", AttributeKind::Nominal, {"p", "q"}}};
    std::vector<Row> rows;
    for (int i = 0; i < 10; ++i) {
        rows.push_back({Value{i * 0.1}, Value{static_cast<int32_t>(i < 7 ? 0 : 1)}});
    }
    Dataset d("majority", attrs, rows, 1);
    // Oracle: count class frequencies directly -> p wins 7:3.
    auto zero_rule = find_component("zero_rule");
    ExecutionOutcome out = zero_rule->execute(d, {}, limits());
    REQUIRE(outcome_ok(out));
    auto model = std::get<std::shared_ptr<PredictiveModel>>(out);
    for (const Row& row : d.rows()) {
        Cell prediction = model->predict(row);
        REQUIRE(prediction.has_value());
        CHECK(std::get<int32_t>(*prediction) == 0);
    }
}

TEST_CASE("contract honesty: failure iff a declared capability is violated") {
    // Exhaustive over pool x suite; also proves no internal failures.
    for (const auto& c : pool_roster()) {
        for (const SyntheticCase& sc : suite()) {
            CharacteristicToken token = extract_token(sc.dataset);
            ExecutionOutcome out = c->execute(sc.dataset, c->settings()[0], limits());
            INFO("component ", c->id(), " case ", sc.name);
            if (rejects(*c, token)) {
                REQUIRE(!outcome_ok(out));
                CHECK(outcome_failure(out).reason == FailureReason::Incompatibility);
            } else {
                if (!outcome_ok(out)) {
                    CHECK_MESSAGE(false, "unexpected failure: ", outcome_failure(out).detail);
                }
            }
        }
    }
}

TEST_CASE("preprocessor closure: outputs are valid datasets with total extraction") {
    for (const auto& c : pool_roster()) {
        if (c->is_predictor()) continue;
        for (const SyntheticCase& sc : suite()) {
            ExecutionOutcome out = c->execute(sc.dataset, c->settings()[0], limits());
            if (!outcome_ok(out)) continue;
            const Dataset& produced = std::get<Dataset>(out);
            CHECK_NOTHROW(produced.validate());
            CHECK_NOTHROW(extract_token(produced));
        }
    }
}

TEST_CASE("execution is deterministic given the seed") {
    for (const auto& c : pool_roster()) {
        for (const SyntheticCase& sc : suite()) {
            ExecutionOutcome a = c->execute(sc.dataset, c->settings()[0], limits());
            ExecutionOutcome b = c->execute(sc.dataset, c->settings()[0], limits());
            REQUIRE(outcome_ok(a) == outcome_ok(b));
            if (!outcome_ok(a)) continue;
            if (std::holds_alternative<Dataset>(a)) {
                CHECK(std::get<Dataset>(a) == std::get<Dataset>(b));
            } else {
                auto model_a = std::get<std::shared_ptr<PredictiveModel>>(a);
                auto model_b = std::get<std::shared_ptr<PredictiveModel>>(b);
                for (const Row& row : sc.dataset.rows()) {
                    CHECK(model_a->predict(row) == model_b->predict(row));
                }
            }
        }
    }
}

TEST_CASE("capability and effect signatures are hyperparameter-invariant") {
    // Audit for the knowledge base being learned at each grid's first setting.
    for (const auto& c : pool_roster()) {
        for (const SyntheticCase& sc : suite()) {
            CharacteristicToken in = extract_token(sc.dataset);
            ExecutionOutcome base = c->execute(sc.dataset, c->settings()[0], limits());
            for (std::size_t s = 1; s < c->settings().size(); ++s) {
                ExecutionOutcome other = c->execute(sc.dataset, c->settings()[s], limits());
                INFO("component ", c->id(), " setting ", s, " case ", sc.name);
                REQUIRE(outcome_ok(base) == outcome_ok(other));
                if (!outcome_ok(base) || c->is_predictor()) continue;
                CharacteristicToken out_base = extract_token(std::get<Dataset>(base));
                CharacteristicToken out_other = extract_token(std::get<Dataset>(other));
                for (Characteristic ch : all_characteristics()) {
                    int delta_base = int(out_base.get(ch)) - int(in.get(ch));
                    int delta_other = int(out_other.get(ch)) - int(in.get(ch));
                    CHECK(delta_base == delta_other);
                }
            }
        }
    }
}

TEST_CASE("cooperative timeout fires on a tiny deadline") {
    const Dataset& d = bundled_dataset("clean_numeric");
    auto tree = find_component("decision_tree");
    ExecutionLimits tiny{std::chrono::duration<double>(1e-9), 7};
    ExecutionOutcome out = tree->execute(d, tree->settings()[0], tiny);
    REQUIRE(!outcome_ok(out));
    CHECK(outcome_failure(out).reason == FailureReason::Timeout);
}
