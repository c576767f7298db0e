#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "avatar/components.hpp"
#include "avatar/components_detail.hpp"

namespace avatar {
namespace detail {

namespace {

double param_double(const HyperparamSetting& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : std::stod(it->second);
}

int param_int(const HyperparamSetting& params, const std::string& key, int fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : std::stoi(it->second);
}

std::vector<double> present_numeric(const Dataset& d, std::size_t col) {
    std::vector<double> out;
    out.reserve(d.n_rows());
    for (const Row& row : d.rows()) {
        if (row[col].has_value()) out.push_back(std::get<double>(*row[col]));
    }
    return out;
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Linear-interpolation quantile over a sorted vector.
double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    if (sorted.size() == 1) return sorted[0];
    double pos = q * static_cast<double>(sorted.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

// --- missing value handlers -------------------------------------------------

// Mean/median (numeric) and mode (symbolic) imputation of non-class cells.
// Fully-missing columns fall back to a fixed fill so no gap survives; leaving
// them open would let a later transform detach the missingness from the
// nominal flag the surrogate uses to track it.
class ReplaceMissing final : public Component {
public:
    ReplaceMissing()
        : Component("replace_missing", "Mean/Mode Imputation", ComponentKind::MissingValueHandler,
                    {{{"numeric_fill", "mean"}}, {{"numeric_fill", "median"}}}, {}) {}

private:
    ExecutionOutcome run(const Dataset& d, const HyperparamSetting& params,
                         const ExecutionLimits&, const Deadline& deadline) const override {
        bool use_median = params.count("numeric_fill") && params.at("numeric_fill") == "median";
        std::vector<Attribute> attrs = d.attributes();
        std::vector<Row> rows = d.rows();
        for (std::size_t a = 0; a < d.n_attributes(); ++a) {
            if (d.is_class(a)) continue;
            if (deadline.expired()) return Failure{FailureReason::Timeout, id(), {}};
            Attribute& attr = attrs[a];
            Cell fill;
            if (attr.kind == AttributeKind::Numeric) {
                std::vector<double> vals = present_numeric(d, a);
                if (vals.empty()) {
                    fill = Value{0.0};
                } else if (use_median) {
                    std::sort(vals.begin(), vals.end());
                    fill = Value{quantile_sorted(vals, 0.5)};
                } else {
                    fill = Value{mean_of(vals)};
                }
            } else {
                // Mode; ties resolved by first occurrence in row order.
                std::map<Value, std::size_t> counts;
                Value best{};
                std::size_t best_count = 0;
                for (const Row& row : d.rows()) {
                    if (!row[a].has_value()) continue;
                    std::size_t c = ++counts[*row[a]];
                    if (c > best_count) {
                        best_count = c;
                        best = *row[a];
                    }
                }
                if (best_count > 0) {
                    fill = best;
                } else if (attr.kind == AttributeKind::Nominal) {
                    if (attr.categories.empty()) attr.categories.push_back("missing");
                    fill = Value{static_cast<int32_t>(0)};
                } else if (attr.kind == AttributeKind::Date) {
                    fill = Value{std::string("1970-01-01")};
                } else {
                    fill = Value{std::string{}};
                }
            }
            for (Row& row : rows) {
                if (!row[a].has_value()) row[a] = fill;
            }
        }
        return Dataset(d.name(), std::move(attrs), std::move(rows), d.class_index());
    }
};

// EM-style imputation approximated by iterative mean refinement; restricted
// to fully numeric data with a numeric, fully labeled class.
class EmImpute final : public Component {
public:
    EmImpute()
        : Component("em_impute", "EM Imputation", ComponentKind::MissingValueHandler,
                    {{{"sweeps", "2"}}, {{"sweeps", "4"}}},
                    {Characteristic::NominalAttributes, Characteristic::BinaryAttributes,
                     Characteristic::DateAttributes, Characteristic::EmptyNominalAttributes,
                     Characteristic::NominalClass, Characteristic::BinaryClass,
                     Characteristic::SymbolicClass, Characteristic::StringClass,
                     Characteristic::UnaryClass, Characteristic::DateClass,
                     Characteristic::MissingClassValues}) {}

private:
    ExecutionOutcome run(const Dataset& d, const HyperparamSetting& params,
                         const ExecutionLimits&, const Deadline& deadline) const override {
        int sweeps = param_int(params, "sweeps", 2);
        std::vector<Row> rows = d.rows();
        std::vector<std::pair<std::size_t, std::size_t>> holes;
        for (std::size_t a = 0; a < d.n_attributes(); ++a) {
            if (d.is_class(a)) continue;
            double mean = mean_of(present_numeric(d, a));
            for (std::size_t r = 0; r < rows.size(); ++r) {
                if (!rows[r][a].has_value()) {
                    rows[r][a] = Value{mean};
                    holes.emplace_back(r, a);
                }
            }
        }
        for (int sweep = 0; sweep < sweeps && !holes.empty(); ++sweep) {
            if (deadline.expired()) return Failure{FailureReason::Timeout, id(), {}};
            std::vector<double> col_mean(d.n_attributes(), 0.0);
            for (std::size_t a = 0; a < d.n_attributes(); ++a) {
                if (d.is_class(a)) continue;
                double s = 0.0;
                for (const Row& row : rows) s += std::get<double>(*row[a]);
                col_mean[a] = rows.empty() ? 0.0 : s / static_cast<double>(rows.size());
            }
            std::vector<double> row_mean(rows.size(), 0.0);
            for (std::size_t r = 0; r < rows.size(); ++r) {
                double s = 0.0;
                std::size_t n = 0;
                for (std::size_t a = 0; a < d.n_attributes(); ++a) {
                    if (d.is_class(a)) continue;
                    s += std::get<double>(*rows[r][a]);
                    ++n;
                }
                row_mean[r] = n ? s / static_cast<double>(n) : 0.0;
            }
            for (auto [r, a] : holes) {
                rows[r][a] = Value{0.5 * (col_mean[a] + row_mean[r])};
            }
        }
        return Dataset(d.name(), d.attributes(), std::move(rows), d.class_index());
    }
};

// --- outlier handling ---------------------------------------------------------

// Clamps numeric cells outside [Q1 - f*IQR, Q3 + f*IQR]. Treating outliers by
// value instead of dropping rows keeps every observed-value flag stable.
class IqrClip final : public Component {
public:
    IqrClip()
        : Component("iqr_clip", "IQR Outlier Clipping", ComponentKind::OutlierRemover,
                    {{{"factor", "1.5"}}, {{"factor", "3.0"}}}, {}) {}

private:
    ExecutionOutcome run(const Dataset& d, const HyperparamSetting& params,
                         const ExecutionLimits&, const Deadline& deadline) const override {
        double factor = param_double(params, "factor", 1.5);
        std::vector<Row> rows = d.rows();
        for (std::size_t a = 0; a < d.n_attributes(); ++a) {
            if (d.is_class(a) || d.attributes()[a].kind != AttributeKind::Numeric) continue;
            if (deadline.expired()) return Failure{FailureReason::Timeout, id(), {}};
            std::vector<double> vals = present_numeric(d, a);
            if (vals.size() < 4) continue;
            std::sort(vals.begin(), vals.end());
            double q1 = quantile_sorted(vals, 0.25);
            double q3 = quantile_sorted(vals, 0.75);
            double iqr = q3 - q1;
            double lo = q1 - factor * iqr;
            double hi = q3 + factor * iqr;
            for (Row& row : rows) {
                if (!row[a].has_value()) continue;
                double v = std::get<double>(*row[a]);
                if (v < lo) row[a] = Value{lo};
                if (v > hi) row[a] = Value{hi};
            }
        }
        return Dataset(d.name(), d.attributes(), std::move(rows), d.class_index());
    }
};

// --- transformers -------------------------------------------------------------

class Center final : public Component {
public:
    Center() : Component("center", "Center", ComponentKind::Transformer, {{}}, {}) {}

private:
    ExecutionOutcome run(const Dataset& d, const HyperparamSetting&, const ExecutionLimits&,
                         const Deadline& deadline) const override {
        std::vector<Row> rows = d.rows();
        for (std::size_t a = 0; a < d.n_attributes(); ++a) {
            if (d.is_class(a) || d.attributes()[a].kind != AttributeKind::Numeric) continue;
            if (deadline.expired()) return Failure{FailureReason::Timeout, id(), {}};
            double mean = mean_of(present_numeric(d, a));
            for (Row& row : rows) {
                if (row[a].has_value()) row[a] = Value{std::get<double>(*row[a]) - mean};
            }
        }
        return Dataset(d.name(), d.attributes(), std::move(rows), d.class_index());
    }
};

class Standardize final : public Component {
public:
    Standardize() : Component("standardize", "Standardize", ComponentKind::Transformer, {{}}, {}) {}

private:
    ExecutionOutcome run(const Dataset& d, const HyperparamSetting&, const ExecutionLimits&,
                         const Deadline& deadline) const override {
        std::vector<Row> rows = d.rows();
        for (std::size_t a = 0; a < d.n_attributes(); ++a) {
            if (d.is_class(a) || d.attributes()[a].kind != AttributeKind::Numeric) continue;
            if (deadline.expired()) return Failure{FailureReason::Timeout, id(), {}};
            std::vector<double> vals = present_numeric(d, a);
            double mean = mean_of(vals);
            double var = 0.0;
            for (double v : vals) var += (v - mean) * (v - mean);
            var = vals.empty() ? 0.0 : var / static_cast<double>(vals.size());
            double scale = var > 1e-24 ? 1.0 / std::sqrt(var) : 1.0;
            for (Row& row : rows) {
                if (row[a].has_value()) {
                    row[a] = Value{(std::get<double>(*row[a]) - mean) * scale};
                }
            }
        }
        return Dataset(d.name(), d.attributes(), std::move(rows), d.class_index());
    }
};

// Equal-width binning of every numeric non-class attribute.
class Discretize final : public Component {
public:
    Discretize()
        : Component("discretize", "Equal-Width Discretize", ComponentKind::Transformer,
                    {{{"bins", "4"}}, {{"bins", "8"}}}, {}) {}

private:
    ExecutionOutcome run(const Dataset& d, const HyperparamSetting& params,
                         const ExecutionLimits&, const Deadline& deadline) const override {
        int bins = std::max(2, param_int(params, "bins", 4));
        std::vector<Attribute> attrs = d.attributes();
        std::vector<Row> rows = d.rows();
        std::vector<std::string> labels;
        labels.reserve(bins);
        for (int b = 0; b < bins; ++b) labels.push_back("bin" + std::to_string(b));
        for (std::size_t a = 0; a < d.n_attributes(); ++a) {
            if (d.is_class(a) || attrs[a].kind != AttributeKind::Numeric) continue;
            if (deadline.expired()) return Failure{FailureReason::Timeout, id(), {}};
            std::vector<double> vals = present_numeric(d, a);
            double lo = vals.empty() ? 0.0 : *std::min_element(vals.begin(), vals.end());
            double hi = vals.empty() ? 0.0 : *std::max_element(vals.begin(), vals.end());
            double width = (hi - lo) / static_cast<double>(bins);
            attrs[a].kind = AttributeKind::Nominal;
            attrs[a].categories = labels;
            for (Row& row : rows) {
                if (!row[a].has_value()) continue;
                double v = std::get<double>(*row[a]);
                int32_t bin = 0;
                if (width > 0.0) {
                    bin = static_cast<int32_t>((v - lo) / width);
                    bin = std::clamp(bin, 0, bins - 1);
                }
                row[a] = Value{bin};
            }
        }
        return Dataset(d.name(), std::move(attrs), std::move(rows), d.class_index());
    }
};

// Expands every non-class nominal attribute into one numeric indicator column
// per declared category; missing cells propagate to every indicator.
class NominalToBinary final : public Component {
public:
    NominalToBinary()
        : Component("nominal_to_binary", "Nominal To Binary", ComponentKind::Transformer, {{}},
                    {}) {}

private:
    ExecutionOutcome run(const Dataset& d, const HyperparamSetting&, const ExecutionLimits&,
                         const Deadline& deadline) const override {
        std::vector<Attribute> attrs;
        std::vector<std::vector<std::size_t>> expansion;  // per old attr: new indices
        std::vector<std::pair<std::size_t, int32_t>> indicator_source;
        std::size_t new_class_index = 0;
        for (std::size_t a = 0; a < d.n_attributes(); ++a) {
            const Attribute& attr = d.attributes()[a];
            expansion.push_back({});
            if (d.is_class(a)) new_class_index = attrs.size();
            if (d.is_class(a) || attr.kind != AttributeKind::Nominal) {
                expansion.back().push_back(attrs.size());
                indicator_source.emplace_back(a, -1);
                attrs.push_back(attr);
                continue;
            }
            for (std::size_t c = 0; c < attr.categories.size(); ++c) {
                expansion.back().push_back(attrs.size());
                indicator_source.emplace_back(a, static_cast<int32_t>(c));
                attrs.push_back(Attribute{attr.name + "=" + attr.categories[c],
                                          AttributeKind::Numeric,
                                          {}});
            }
        }
        std::vector<Row> rows;
        rows.reserve(d.n_rows());
        for (const Row& src : d.rows()) {
            if (deadline.expired()) return Failure{FailureReason::Timeout, id(), {}};
            Row row(attrs.size());
            for (std::size_t n = 0; n < attrs.size(); ++n) {
                auto [old_a, cat] = indicator_source[n];
                const Cell& cell = src[old_a];
                if (cat < 0) {
                    row[n] = cell;
                } else if (!cell.has_value()) {
                    row[n] = std::nullopt;
                } else {
                    row[n] = Value{std::get<int32_t>(*cell) == cat ? 1.0 : 0.0};
                }
            }
            rows.push_back(std::move(row));
        }
        return Dataset(d.name(), std::move(attrs), std::move(rows), new_class_index);
    }
};

// --- eigen helpers for whitening / PCA ---------------------------------------

namespace {

using Matrix = std::vector<std::vector<double>>;

// Cyclic Jacobi for small symmetric matrices; returns eigenvalues on the
// diagonal of a and accumulates rotations into v.
void jacobi_eigen(Matrix& a, Matrix& v) {
    std::size_t n = a.size();
    v.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
    for (int sweep = 0; sweep < 50; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::fabs(a[p][q]) < 1e-300) continue;
                double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
}

struct CenteredNumeric {
    std::vector<std::size_t> cols;   // attribute indices
    std::vector<double> mean;
    Matrix data;                      // rows x cols, centered
};

CenteredNumeric centered_numeric(const Dataset& d) {
    CenteredNumeric out;
    for (std::size_t a = 0; a < d.n_attributes(); ++a) {
        if (!d.is_class(a) && d.attributes()[a].kind == AttributeKind::Numeric) {
            out.cols.push_back(a);
        }
    }
    std::size_t n = d.n_rows(), m = out.cols.size();
    out.mean.assign(m, 0.0);
    out.data.assign(n, std::vector<double>(m, 0.0));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < m; ++c) {
            out.data[r][c] = std::get<double>(*d.rows()[r][out.cols[c]]);
            out.mean[c] += out.data[r][c];
        }
    }
    for (std::size_t c = 0; c < m; ++c) out.mean[c] /= n ? static_cast<double>(n) : 1.0;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < m; ++c) out.data[r][c] -= out.mean[c];
    return out;
}

Matrix covariance(const Matrix& centered, std::size_t m) {
    Matrix cov(m, std::vector<double>(m, 0.0));
    std::size_t n = centered.size();
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i; j < m; ++j) {
                cov[i][j] += centered[r][i] * centered[r][j];
            }
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
            cov[i][j] /= n ? static_cast<double>(n) : 1.0;
            cov[j][i] = cov[i][j];
        }
    }
    return cov;
}

}  // namespace

// ZCA whitening over complete numeric attributes; the independent-components
// stand-in. Rejects missing values and any non-numeric attribute.
class Whiten final : public Component {
public:
    Whiten()
        : Component("whiten", "Whitening Transform", ComponentKind::Transformer,
                    {{{"epsilon", "1e-6"}}},
                    {Characteristic::MissingValues, Characteristic::NominalAttributes,
                     Characteristic::BinaryAttributes, Characteristic::DateAttributes,
                     Characteristic::EmptyNominalAttributes}) {}

private:
    ExecutionOutcome run(const Dataset& d, const HyperparamSetting& params,
                         const ExecutionLimits&, const Deadline& deadline) const override {
        double eps = param_double(params, "epsilon", 1e-6);
        CenteredNumeric cn = centered_numeric(d);
        std::size_t m = cn.cols.size();
        if (m == 0) return Dataset(d.name(), d.attributes(), d.rows(), d.class_index());
        Matrix cov = covariance(cn.data, m);
        Matrix v;
        jacobi_eigen(cov, v);
        if (deadline.expired()) return Failure{FailureReason::Timeout, id(), {}};
        // W = V diag(1/sqrt(lambda+eps)) V^T
        std::vector<double> inv_sqrt(m);
        for (std::size_t i = 0; i < m; ++i) {
            inv_sqrt[i] = 1.0 / std::sqrt(std::max(cov[i][i], 0.0) + eps);
        }
        Matrix w(m, std::vector<double>(m, 0.0));
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < m; ++k) s += v[i][k] * inv_sqrt[k] * v[j][k];
                w[i][j] = s;
            }
        }
        std::vector<Row> rows = d.rows();
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (deadline.expired()) return Failure{FailureReason::Timeout, id(), {}};
            for (std::size_t j = 0; j < m; ++j) {
                double s = 0.0;
                for (std::size_t i = 0; i < m; ++i) s += cn.data[r][i] * w[i][j];
                rows[r][cn.cols[j]] = Value{s};
            }
        }
        return Dataset(d.name(), d.attributes(), std::move(rows), d.class_index());
    }
};

// Power-style PCA via a dense eigensolve of the covariance; projects onto the
// top-k principal directions. Requires complete numeric attributes.
class Pca final : public Component {
public:
    Pca()
        : Component("pca", "Principal Components", ComponentKind::DimensionalityReducer,
                    {{{"components", "2"}}, {{"components", "3"}}},
                    {Characteristic::MissingValues, Characteristic::NominalAttributes,
                     Characteristic::BinaryAttributes, Characteristic::DateAttributes,
                     Characteristic::EmptyNominalAttributes}) {}

private:
    ExecutionOutcome run(const Dataset& d, const HyperparamSetting& params,
                         const ExecutionLimits&, const Deadline& deadline) const override {
        std::size_t k = static_cast<std::size_t>(std::max(1, param_int(params, "components", 2)));
        CenteredNumeric cn = centered_numeric(d);
        std::size_t m = cn.cols.size();
        if (m == 0) return Dataset(d.name(), d.attributes(), d.rows(), d.class_index());
        k = std::min(k, m);
        Matrix cov = covariance(cn.data, m);
        Matrix v;
        jacobi_eigen(cov, v);
        if (deadline.expired()) return Failure{FailureReason::Timeout, id(), {}};
        std::vector<std::size_t> order(m);
        for (std::size_t i = 0; i < m; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return cov[a][a] > cov[b][b]; });
        // Deterministic sign: largest-magnitude loading is positive.
        Matrix basis(k, std::vector<double>(m));
        for (std::size_t j = 0; j < k; ++j) {
            std::size_t e = order[j];
            std::size_t arg = 0;
            for (std::size_t i = 1; i < m; ++i) {
                if (std::fabs(v[i][e]) > std::fabs(v[arg][e])) arg = i;
            }
            double sign = v[arg][e] < 0.0 ? -1.0 : 1.0;
            for (std::size_t i = 0; i < m; ++i) basis[j][i] = sign * v[i][e];
        }

        std::vector<Attribute> attrs;
        for (std::size_t j = 0; j < k; ++j) {
            attrs.push_back(Attribute{"pc_" + std::to_string(j + 1), AttributeKind::Numeric, {}});
        }
        // Non-numeric non-class attributes cannot occur past the capability
        // gate; the class column is re-appended last.
        attrs.push_back(d.class_attribute());
        std::vector<Row> rows;
        rows.reserve(d.n_rows());
        for (std::size_t r = 0; r < d.n_rows(); ++r) {
            if (deadline.expired()) return Failure{FailureReason::Timeout, id(), {}};
            Row row;
            row.reserve(k + 1);
            for (std::size_t j = 0; j < k; ++j) {
                double s = 0.0;
                for (std::size_t i = 0; i < m; ++i) s += cn.data[r][i] * basis[j][i];
                row.push_back(Value{s});
            }
            row.push_back(d.rows()[r][d.class_index()]);
            rows.push_back(std::move(row));
        }
        return Dataset(d.name(), std::move(attrs), std::move(rows), k);
    }
};

// --- samplers -----------------------------------------------------------------

// Keeps every period-th row starting at row 0; order preserved.
class PeriodicSample final : public Component {
public:
    PeriodicSample()
        : Component("periodic_sample", "Periodic Sampling", ComponentKind::Sampler,
                    {{{"period", "2"}}, {{"period", "4"}}}, {}) {}

private:
    ExecutionOutcome run(const Dataset& d, const HyperparamSetting& params,
                         const ExecutionLimits&, const Deadline&) const override {
        std::size_t period = static_cast<std::size_t>(std::max(1, param_int(params, "period", 2)));
        std::vector<Row> rows;
        for (std::size_t r = 0; r < d.n_rows(); r += period) rows.push_back(d.rows()[r]);
        return Dataset(d.name(), d.attributes(), std::move(rows), d.class_index());
    }
};

// Balances class groups by truncating each to the smallest group size, in
// original row order. Rows without a class label are dropped. Requires a
// symbolic class.
class ClassBalance final : public Component {
public:
    ClassBalance()
        : Component("class_balance", "Class Balancing", ComponentKind::Sampler, {{}},
                    {Characteristic::NumericClass, Characteristic::DateClass}) {}

private:
    ExecutionOutcome run(const Dataset& d, const HyperparamSetting&, const ExecutionLimits&,
                         const Deadline&) const override {
        std::map<Value, std::size_t> group_size;
        for (const Row& row : d.rows()) {
            if (row[d.class_index()].has_value()) ++group_size[*row[d.class_index()]];
        }
        std::size_t quota = 0;
        if (!group_size.empty()) {
            quota = group_size.begin()->second;
            for (const auto& [value, count] : group_size) quota = std::min(quota, count);
        }
        std::map<Value, std::size_t> taken;
        std::vector<Row> rows;
        for (const Row& row : d.rows()) {
            const Cell& cls = row[d.class_index()];
            if (!cls.has_value()) continue;
            if (taken[*cls] < quota) {
                ++taken[*cls];
                rows.push_back(row);
            }
        }
        return Dataset(d.name(), d.attributes(), std::move(rows), d.class_index());
    }
};

std::shared_ptr<const Component> make_replace_missing() { return std::make_shared<ReplaceMissing>(); }
std::shared_ptr<const Component> make_em_impute() { return std::make_shared<EmImpute>(); }
std::shared_ptr<const Component> make_iqr_clip() { return std::make_shared<IqrClip>(); }
std::shared_ptr<const Component> make_center() { return std::make_shared<Center>(); }
std::shared_ptr<const Component> make_standardize() { return std::make_shared<Standardize>(); }
std::shared_ptr<const Component> make_discretize() { return std::make_shared<Discretize>(); }
std::shared_ptr<const Component> make_nominal_to_binary() {
    return std::make_shared<NominalToBinary>();
}
std::shared_ptr<const Component> make_whiten() { return std::make_shared<Whiten>(); }
std::shared_ptr<const Component> make_pca() { return std::make_shared<Pca>(); }
std::shared_ptr<const Component> make_periodic_sample() { return std::make_shared<PeriodicSample>(); }
std::shared_ptr<const Component> make_class_balance() { return std::make_shared<ClassBalance>(); }

}  // namespace detail
}  // namespace avatar
