#include <random>

#include "avatar/bundled.hpp"
#include "avatar/errors.hpp"

namespace avatar {

namespace {

constexpr uint64_t kBundledSeed = 0xA11CEull;

std::vector<double> uniforms(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> out(n);
    for (double& v : out) v = dist(rng);
    return out;
}

// Three-way label: cyclic over the first 24 rows so every stride sees all
// categories, threshold-driven afterwards so predictors have signal.
int32_t three_way_label(std::size_t i, double x) {
    if (i < 24) return static_cast<int32_t>(i % 3);
    if (x < 0.33) return 0;
    if (x < 0.66) return 1;
    return 2;
}

Dataset make_clean_numeric() {
    std::mt19937_64 rng(kBundledSeed ^ 0x1);
    const std::size_t n = 2000, m = 9;
    std::vector<Attribute> attrs;
    for (std::size_t j = 0; j < m; ++j) {
        attrs.push_back({"x" + std::to_string(j), AttributeKind::Numeric, {}});
    }
    attrs.push_back({"class", AttributeKind::Nominal, {"k_a", "k_b", "k_c"}});
    std::vector<std::vector<double>> cols;
    for (std::size_t j = 0; j < m; ++j) cols.push_back(uniforms(n, rng));
    std::vector<Row> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Row row;
        for (std::size_t j = 0; j < m; ++j) row.push_back(Value{cols[j][i]});
        row.push_back(Value{three_way_label(i, cols[0][i])});
        rows.push_back(std::move(row));
    }
    return Dataset("clean_numeric", std::move(attrs), std::move(rows), m);
}

Dataset make_numeric_missing() {
    std::mt19937_64 rng(kBundledSeed ^ 0x2);
    const std::size_t n = 400, m = 6;
    std::vector<Attribute> attrs;
    for (std::size_t j = 0; j < m; ++j) {
        attrs.push_back({"x" + std::to_string(j), AttributeKind::Numeric, {}});
    }
    attrs.push_back({"class", AttributeKind::Nominal, {"k_a", "k_b", "k_c"}});
    std::vector<std::vector<double>> cols;
    for (std::size_t j = 0; j < m; ++j) cols.push_back(uniforms(n, rng));
    std::vector<Row> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Row row;
        for (std::size_t j = 0; j < m; ++j) {
            bool hole = (j == 1 && i % 8 == 0) || (j == 3 && i % 8 == 4);
            row.push_back(hole ? Cell{std::nullopt} : Cell{Value{cols[j][i]}});
        }
        row.push_back(Value{three_way_label(i, cols[0][i])});
        rows.push_back(std::move(row));
    }
    return Dataset("numeric_missing", std::move(attrs), std::move(rows), m);
}

Dataset make_nominal_mix() {
    std::mt19937_64 rng(kBundledSeed ^ 0x3);
    const std::size_t n = 300;
    std::vector<Attribute> attrs = {
        {"x0", AttributeKind::Numeric, {}},
        {"c1", AttributeKind::Nominal, {"a", "b", "c"}},
        {"c2", AttributeKind::Nominal, {"yes", "no"}},
        {"class", AttributeKind::Nominal, {"k_a", "k_b", "k_c"}},
    };
    std::vector<double> x0 = uniforms(n, rng);
    std::vector<Row> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Row row;
        row.push_back(Value{x0[i]});
        row.push_back(Value{static_cast<int32_t>(i % 3)});
        row.push_back(Value{static_cast<int32_t>((i / 4) % 2)});
        row.push_back(Value{static_cast<int32_t>((i + 1) % 3)});
        rows.push_back(std::move(row));
    }
    return Dataset("nominal_mix", std::move(attrs), std::move(rows), 3);
}

Dataset make_mixed_missing_class() {
    std::mt19937_64 rng(kBundledSeed ^ 0x4);
    const std::size_t n = 300;
    std::vector<Attribute> attrs = {
        {"x0", AttributeKind::Numeric, {}},
        {"c1", AttributeKind::Nominal, {"a", "b", "c"}},
        {"x1", AttributeKind::Numeric, {}},
        {"class", AttributeKind::Nominal, {"k_a", "k_b", "k_c"}},
    };
    std::vector<double> x0 = uniforms(n, rng);
    std::vector<double> x1 = uniforms(n, rng);
    std::vector<Row> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Row row;
        row.push_back(Value{x0[i]});
        row.push_back(Value{static_cast<int32_t>(i % 3)});
        row.push_back(i % 8 == 0 ? Cell{std::nullopt} : Cell{Value{x1[i]}});
        row.push_back(i == 0 || i == 2 ? Cell{std::nullopt}
                                       : Cell{Value{static_cast<int32_t>(i % 3)}});
        rows.push_back(std::move(row));
    }
    return Dataset("mixed_missing_class", std::move(attrs), std::move(rows), 3);
}

Dataset make_regress_numeric() {
    std::mt19937_64 rng(kBundledSeed ^ 0x5);
    const std::size_t n = 400, m = 5;
    std::vector<Attribute> attrs;
    for (std::size_t j = 0; j < m; ++j) {
        attrs.push_back({"x" + std::to_string(j), AttributeKind::Numeric, {}});
    }
    attrs.push_back({"y", AttributeKind::Numeric, {}});
    std::vector<std::vector<double>> cols;
    for (std::size_t j = 0; j < m; ++j) cols.push_back(uniforms(n, rng));
    std::vector<double> noise = uniforms(n, rng);
    std::vector<Row> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Row row;
        for (std::size_t j = 0; j < m; ++j) row.push_back(Value{cols[j][i]});
        row.push_back(Value{2.0 * cols[0][i] - cols[1][i] + 0.1 * noise[i]});
        rows.push_back(std::move(row));
    }
    return Dataset("regress_numeric", std::move(attrs), std::move(rows), m);
}

Dataset make_pathological_unary() {
    std::mt19937_64 rng(kBundledSeed ^ 0x6);
    const std::size_t n = 200;
    std::vector<Attribute> attrs = {
        {"x0", AttributeKind::Numeric, {}},
        {"flat", AttributeKind::Numeric, {}},
        {"enom", AttributeKind::Nominal, {"a", "b", "c"}},
        {"class", AttributeKind::Nominal, {"only"}},
    };
    std::vector<double> x0 = uniforms(n, rng);
    std::vector<Row> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Row row;
        row.push_back(Value{x0[i]});
        row.push_back(Value{0.5});
        row.push_back(std::nullopt);
        row.push_back(Value{static_cast<int32_t>(0)});
        rows.push_back(std::move(row));
    }
    return Dataset("pathological_unary", std::move(attrs), std::move(rows), 3);
}

}  // namespace

const std::vector<Dataset>& bundled_datasets() {
    static const std::vector<Dataset> all = {
        make_clean_numeric(),       make_numeric_missing(),  make_nominal_mix(),
        make_mixed_missing_class(), make_regress_numeric(),  make_pathological_unary(),
    };
    return all;
}

const Dataset& bundled_dataset(const std::string& name) {
    for (const Dataset& d : bundled_datasets()) {
        if (d.name() == name) return d;
    }
    throw Error("no bundled dataset named " + name);
}

}  // namespace avatar
