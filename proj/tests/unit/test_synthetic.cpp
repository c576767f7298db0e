#include <doctest.h>

#include <map>

#include "avatar/errors.hpp"
#include "avatar/synthetic.hpp"
#include "helpers.hpp"

using namespace avatar;
using test_helpers::token_of;

namespace {

// Frozen isolation oracle: target flag + class-kind flag + implied flags
// (carrier numeric, co-occurring kind/missing flags) and nothing else.
CharacteristicToken expected_case_token(Characteristic target, const std::string& variant) {
    auto with_class = [&](std::initializer_list<Characteristic> flags) {
        CharacteristicToken t = token_of(flags);
        t.set(Characteristic::NumericAttributes, 1);  // carrier
        if (variant == "nominal") {
            t.set(Characteristic::NominalClass, 1);
            t.set(Characteristic::SymbolicClass, 1);
        } else {
            t.set(Characteristic::NumericClass, 1);
        }
        return t;
    };
    switch (target) {
        case Characteristic::BinaryAttributes:
            return with_class({Characteristic::BinaryAttributes,
                               Characteristic::NominalAttributes});
        case Characteristic::DateAttributes:
            return with_class({Characteristic::DateAttributes});
        case Characteristic::EmptyNominalAttributes:
            return with_class({Characteristic::EmptyNominalAttributes,
                               Characteristic::MissingValues,
                               Characteristic::NominalAttributes});
        case Characteristic::MissingValues:
            return with_class({Characteristic::MissingValues});
        case Characteristic::NominalAttributes:
            return with_class({Characteristic::NominalAttributes});
        case Characteristic::NumericAttributes:
            return with_class({});
        case Characteristic::UnaryAttributes:
            return with_class({Characteristic::UnaryAttributes});
        case Characteristic::BinaryClass:
            return token_of({Characteristic::BinaryClass, Characteristic::NominalClass,
                             Characteristic::SymbolicClass, Characteristic::NumericAttributes});
        case Characteristic::NumericClass:
            return token_of({Characteristic::NumericClass, Characteristic::NumericAttributes});
        case Characteristic::DateClass:
            return token_of({Characteristic::DateClass, Characteristic::NumericAttributes});
        case Characteristic::MissingClassValues:
            return token_of({Characteristic::MissingClassValues, Characteristic::NominalClass,
                             Characteristic::SymbolicClass, Characteristic::NumericAttributes});
        case Characteristic::NominalClass:
            return token_of({Characteristic::NominalClass, Characteristic::SymbolicClass,
                             Characteristic::NumericAttributes});
        case Characteristic::StringClass:
            return token_of({Characteristic::StringClass, Characteristic::SymbolicClass,
                             Characteristic::NumericAttributes});
        case Characteristic::UnaryClass:
            return token_of({Characteristic::UnaryClass, Characteristic::NominalClass,
                             Characteristic::SymbolicClass, Characteristic::NumericAttributes});
        default:
            FAIL("unexpected characteristic");
            return {};
    }
}

}  // namespace

TEST_CASE("suite covers every characteristic except PREDICTIVE_MODEL") {
    auto suite = generate_suite(16, 42);
    CHECK(suite.size() == 21);  // 7 attribute-side x 2 variants + 7 class-side
    std::map<Characteristic, int> targeted;
    std::map<Characteristic, int> exercised;
    for (const SyntheticCase& c : suite) {
        ++targeted[c.characteristic];
        CharacteristicToken t = extract_token(c.dataset);
        for (Characteristic ch : all_characteristics()) {
            if (t.get(ch)) ++exercised[ch];
        }
    }
    for (Characteristic c : all_characteristics()) {
        INFO("characteristic ", characteristic_name(c));
        if (c == Characteristic::PredictiveModel) {
            CHECK(exercised[c] == 0);  // no dataset case, by design
        } else {
            CHECK(exercised[c] >= 1);
        }
    }
    for (Characteristic c :
         {Characteristic::BinaryAttributes, Characteristic::DateAttributes,
          Characteristic::EmptyNominalAttributes, Characteristic::MissingValues,
          Characteristic::NominalAttributes, Characteristic::NumericAttributes,
          Characteristic::UnaryAttributes}) {
        CHECK(targeted[c] == 2);  // both class variants
    }
}

TEST_CASE("every case isolates its characteristic modulo carrier and implied flags") {
    auto suite = generate_suite(16, 42);
    for (const SyntheticCase& c : suite) {
        INFO("case ", c.name);
        CHECK(extract_token(c.dataset) == expected_case_token(c.characteristic, c.class_variant));
    }
}

TEST_CASE("missing-values cases match the stated construction") {
    auto suite = generate_suite(16, 42);
    int found = 0;
    for (const SyntheticCase& c : suite) {
        if (c.characteristic != Characteristic::MissingValues) continue;
        ++found;
        CharacteristicToken t = extract_token(c.dataset);
        CHECK(t.get(Characteristic::MissingValues) == 1);
        if (c.class_variant == "nominal") {
            CHECK(t.get(Characteristic::NominalClass) == 1);
        } else {
            CHECK(t.get(Characteristic::NumericClass) == 1);
        }
        bool some_missing_numeric = false;
        for (std::size_t a = 0; a < c.dataset.n_attributes(); ++a) {
            if (c.dataset.is_class(a)) continue;
            if (c.dataset.attributes()[a].kind != AttributeKind::Numeric) continue;
            for (const Row& row : c.dataset.rows()) {
                if (!row[a].has_value()) some_missing_numeric = true;
            }
        }
        CHECK(some_missing_numeric);
    }
    CHECK(found == 2);
}

TEST_CASE("same rows and seed give a byte-identical suite") {
    auto a = generate_suite(16, 9);
    auto b = generate_suite(16, 9);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].name == b[i].name);
        CHECK(a[i].dataset == b[i].dataset);
    }
    CHECK(suite_hash(a) == suite_hash(b));
    auto c = generate_suite(16, 10);
    CHECK(suite_hash(a) != suite_hash(c));
}

TEST_CASE("suite round-trips through the on-disk form") {
    auto suite = generate_suite(16, 42);
    auto dir = test_helpers::temp_dir() / "suite";
    write_suite(suite, dir.string(), 16, 42);
    auto back = load_suite(dir.string());
    REQUIRE(back.size() == suite.size());
    for (std::size_t i = 0; i < suite.size(); ++i) {
        CHECK(back[i].name == suite[i].name);
        CHECK(extract_token(back[i].dataset) == extract_token(suite[i].dataset));
    }
}

TEST_CASE("rows below the minimum are rejected") {
    CHECK_THROWS_AS(generate_suite(4, 1), InvariantError);
}
