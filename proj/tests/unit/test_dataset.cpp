#include <doctest.h>

#include <random>
#include <set>

#include "avatar/bundled.hpp"
#include "avatar/dataset.hpp"
#include "avatar/errors.hpp"
#include "helpers.hpp"

using namespace avatar;
using test_helpers::token_of;
using test_helpers::write_file;

TEST_CASE("arff subset parses missing cells") {
    std::string path = write_file("three_col.arff",
                                  "@relation tiny\n"
                                  "@attribute a numeric\n"
                                  "@attribute b {x,y}\n"
                                  "@attribute cls {p,q}\n"
                                  "@data\n"
                                  "1.5,x,p\n"
                                  "?,y,q\n"
                                  "2.0,x,p\n");
    Dataset d = load_dataset(path, DatasetFormat::ArffSubset);
    CHECK(d.n_rows() == 3);
    CHECK(d.n_attributes() == 3);
    CHECK(d.class_index() == 2);
    std::size_t missing = 0;
    for (const Row& row : d.rows()) {
        for (const Cell& cell : row) missing += cell.has_value() ? 0 : 1;
    }
    CHECK(missing == 1);
}

TEST_CASE("csv schema sidecar declares the class column") {
    write_file("sidecar.schema.json",
               R"({"class_index": 2,
                   "attributes": [{"name": "a", "kind": "numeric"},
                                  {"name": "b", "kind": "numeric"},
                                  {"name": "cls", "kind": "nominal", "categories": ["p","q"]},
                                  {"name": "c", "kind": "numeric"}]})");
    std::string path = write_file("sidecar.csv", "1,2,p,4\n5,6,q,8\n");
    Dataset d = load_dataset(path, DatasetFormat::CsvWithSchema);
    CHECK(d.class_index() == 2);
    CHECK(d.class_attribute().name == "cls");
    CHECK(d.n_rows() == 2);
}

TEST_CASE("nominal cell outside its category list is a parse error") {
    std::string path = write_file("bad_nominal.arff",
                                  "@relation tiny\n"
                                  "@attribute b {x,y}\n"
                                  "@attribute cls {p,q}\n"
                                  "@data\n"
                                  "z,p\n");
    CHECK_THROWS_AS(load_dataset(path, DatasetFormat::ArffSubset), ParseError);
}

TEST_CASE("arity mismatch is a schema error") {
    std::string path = write_file("bad_arity.arff",
                                  "@relation tiny\n"
                                  "@attribute a numeric\n"
                                  "@attribute cls {p,q}\n"
                                  "@data\n"
                                  "1,p,extra\n");
    CHECK_THROWS_AS(load_dataset(path, DatasetFormat::ArffSubset), SchemaError);
}

TEST_CASE("token of the numeric+missing bundled dataset matches the worked example") {
    const Dataset& d = bundled_dataset("numeric_missing");
    CharacteristicToken t = extract_token(d);
    CHECK(t.get(Characteristic::NumericAttributes) == 1);
    CHECK(t.get(Characteristic::MissingValues) == 1);
    CHECK(t.get(Characteristic::NominalClass) == 1);
    CHECK(t.get(Characteristic::NominalAttributes) == 0);
    CHECK(t.get(Characteristic::NumericClass) == 0);
    // Symbolic-class is the nominal/string union, so it rides along.
    CHECK(t == token_of({Characteristic::NumericAttributes, Characteristic::MissingValues,
                         Characteristic::NominalClass, Characteristic::SymbolicClass}));
}

TEST_CASE("zero rows with a lone numeric class attribute") {
    Dataset d("empty", {{"y", AttributeKind::Numeric, {}}}, {}, 0);
    CHECK(extract_token(d) == token_of({Characteristic::NumericClass}));
}

TEST_CASE("two observed class categories set the binary refinement") {
    std::vector<Attribute> attrs = {{"x", AttributeKind::Numeric, {}},
                                    {"cls", AttributeKind::Nominal, {"p", "q", "r"}}};
    std::vector<Row> rows;
    for (int i = 0; i < 10; ++i) {
        rows.push_back({Value{i * 0.1}, Value{static_cast<int32_t>(i % 2)}});
    }
    Dataset d("two_cat", attrs, rows, 1);
    // Oracle: distinct present class values counted by direct scan.
    CHECK(test_helpers::distinct_present(d, 1) == 2);
    CharacteristicToken t = extract_token(d);
    CHECK(t.get(Characteristic::BinaryClass) == 1);
    CHECK(t.get(Characteristic::NominalClass) == 1);
}

TEST_CASE("inserting a missing cell flips MISSING_VALUES and nothing class-side") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 20; ++round) {
        std::uniform_int_distribution<int> rows_dist(2, 12);
        int n = rows_dist(rng);
        std::vector<Attribute> attrs = {{"x", AttributeKind::Numeric, {}},
                                        {"c", AttributeKind::Nominal, {"a", "b"}},
                                        {"cls", AttributeKind::Nominal, {"p", "q"}}};
        std::vector<Row> rows;
        std::uniform_real_distribution<double> val(0.0, 1.0);
        for (int i = 0; i < n; ++i) {
            rows.push_back({Value{val(rng)}, Value{static_cast<int32_t>(i % 2)},
                            Value{static_cast<int32_t>(i % 2)}});
        }
        Dataset before("gen", attrs, rows, 2);
        CharacteristicToken t0 = extract_token(before);
        REQUIRE(t0.get(Characteristic::MissingValues) == 0);

        std::uniform_int_distribution<int> row_pick(0, n - 1);
        std::uniform_int_distribution<int> col_pick(0, 1);  // never the class
        rows[row_pick(rng)][col_pick(rng)] = std::nullopt;
        Dataset after("gen", attrs, rows, 2);
        CharacteristicToken t1 = extract_token(after);

        CHECK(t1.get(Characteristic::MissingValues) == 1);
        for (Characteristic c :
             {Characteristic::BinaryClass, Characteristic::NumericClass, Characteristic::DateClass,
              Characteristic::MissingClassValues, Characteristic::NominalClass,
              Characteristic::SymbolicClass, Characteristic::StringClass,
              Characteristic::UnaryClass}) {
            CHECK(t1.get(c) == t0.get(c));
        }
    }
}

TEST_CASE("unary and empty-nominal flags by construction") {
    std::vector<Attribute> attrs = {{"flat", AttributeKind::Numeric, {}},
                                    {"hole", AttributeKind::Nominal, {"a", "b"}},
                                    {"cls", AttributeKind::Nominal, {"p", "q"}}};
    std::vector<Row> rows;
    for (int i = 0; i < 6; ++i) {
        rows.push_back({Value{0.25}, std::nullopt, Value{static_cast<int32_t>(i % 2)}});
    }
    Dataset d("pathological", attrs, rows, 2);
    CharacteristicToken t = extract_token(d);
    CHECK(t.get(Characteristic::UnaryAttributes) == 1);
    CHECK(t.get(Characteristic::EmptyNominalAttributes) == 1);
    CHECK(t.get(Characteristic::MissingValues) == 1);
    CHECK(t.get(Characteristic::NominalAttributes) == 1);
    CHECK(t.get(Characteristic::PredictiveModel) == 0);
}

TEST_CASE("extraction is deterministic and pure") {
    const Dataset& d = bundled_dataset("nominal_mix");
    CHECK(extract_token(d) == extract_token(d));
}

TEST_CASE("arff round trip preserves the dataset") {
    const Dataset& d = bundled_dataset("mixed_missing_class");
    auto path = test_helpers::temp_dir() / "roundtrip.arff";
    save_arff(d, path.string());
    Dataset back = load_dataset(path.string(), DatasetFormat::ArffSubset);
    CHECK(back.n_rows() == d.n_rows());
    CHECK(back.attributes().size() == d.attributes().size());
    CHECK(extract_token(back) == extract_token(d));
    CHECK(back.rows() == d.rows());
}

TEST_CASE("dataset invariants are enforced") {
    std::vector<Attribute> attrs = {{"x", AttributeKind::Numeric, {}}};
    CHECK_THROWS_AS(Dataset("bad", attrs, {{Value{1.0}, Value{2.0}}}, 0), InvariantError);
    CHECK_THROWS_AS(Dataset("bad", attrs, {}, 3), InvariantError);
}
