#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "avatar/components.hpp"
#include "avatar/components_detail.hpp"

namespace avatar {
namespace detail {

namespace {

int param_int(const HyperparamSetting& params, const std::string& key, int fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : std::stoi(it->second);
}

double param_double(const HyperparamSetting& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : std::stod(it->second);
}

std::string param_str(const HyperparamSetting& params, const std::string& key,
                      const std::string& fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

bool numeric_class(const Dataset& d) {
    return d.class_attribute().kind == AttributeKind::Numeric;
}

std::vector<std::size_t> labeled_rows(const Dataset& d) {
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r < d.n_rows(); ++r) {
        if (d.rows()[r][d.class_index()].has_value()) out.push_back(r);
    }
    return out;
}

std::vector<std::size_t> feature_columns(const Dataset& d) {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < d.n_attributes(); ++a) {
        if (!d.is_class(a)) out.push_back(a);
    }
    return out;
}

Cell fallback_prediction(const Dataset& d) {
    const Attribute& cls = d.class_attribute();
    switch (cls.kind) {
        case AttributeKind::Numeric: return Value{0.0};
        case AttributeKind::Nominal: return cls.categories.empty()
                                          ? Cell{std::nullopt}
                                          : Cell{Value{static_cast<int32_t>(0)}};
        case AttributeKind::String:
        case AttributeKind::Date: return Value{std::string{}};
    }
    return std::nullopt;
}

class ConstantModel final : public PredictiveModel {
public:
    ConstantModel(std::string component_id, Cell value)
        : component_id_(std::move(component_id)), value_(std::move(value)) {}
    const std::string& component_id() const override { return component_id_; }
    Cell predict(const Row&) const override { return value_; }

private:
    std::string component_id_;
    Cell value_;
};

// Majority class (symbolic targets) or target mean (numeric targets); ties
// resolved by first occurrence in row order.
Cell baseline_prediction(const Dataset& d) {
    std::vector<std::size_t> rows = labeled_rows(d);
    if (rows.empty()) return fallback_prediction(d);
    if (numeric_class(d)) {
        double s = 0.0;
        for (std::size_t r : rows) s += std::get<double>(*d.rows()[r][d.class_index()]);
        return Value{s / static_cast<double>(rows.size())};
    }
    std::map<Value, std::size_t> counts;
    Value best{};
    std::size_t best_count = 0;
    for (std::size_t r : rows) {
        const Value& v = *d.rows()[r][d.class_index()];
        std::size_t c = ++counts[v];
        if (c > best_count) {
            best_count = c;
            best = v;
        }
    }
    return best;
}

class ZeroRule final : public Component {
public:
    ZeroRule() : Component("zero_rule", "Zero Rule Baseline", ComponentKind::Predictor, {{}}, {}) {}

private:
    ExecutionOutcome run(const Dataset& d, const HyperparamSetting&, const ExecutionLimits&,
                         const Deadline&) const override {
        return std::shared_ptr<PredictiveModel>(
            std::make_shared<ConstantModel>(id(), baseline_prediction(d)));
    }
};

// --- decision tree ------------------------------------------------------------

struct TreeNode {
    bool leaf = true;
    Cell prediction;
    std::size_t feature = 0;
    bool numeric_split = true;
    double threshold = 0.0;       // numeric: go left iff v <= threshold
    Value category;               // categorical: go left iff v == category
    bool missing_goes_left = true;
    std::unique_ptr<TreeNode> left, right;
};

class TreeModel final : public PredictiveModel {
public:
    TreeModel(std::string component_id, std::unique_ptr<TreeNode> root)
        : component_id_(std::move(component_id)), root_(std::move(root)) {}
    const std::string& component_id() const override { return component_id_; }
    Cell predict(const Row& row) const override {
        const TreeNode* node = root_.get();
        while (!node->leaf) {
            const Cell& cell = node->feature < row.size() ? row[node->feature] : Cell{};
            bool go_left;
            if (!cell.has_value()) {
                go_left = node->missing_goes_left;
            } else if (node->numeric_split) {
                go_left = std::get<double>(*cell) <= node->threshold;
            } else {
                go_left = *cell == node->category;
            }
            node = go_left ? node->left.get() : node->right.get();
        }
        return node->prediction;
    }

private:
    std::string component_id_;
    std::unique_ptr<TreeNode> root_;
};

struct TreeBuilder {
    const Dataset& d;
    bool regression;
    int max_depth;
    const Deadline& deadline;
    bool timed_out = false;

    double impurity(const std::vector<std::size_t>& rows) const {
        if (rows.empty()) return 0.0;
        if (regression) {
            double mean = 0.0;
            for (std::size_t r : rows) mean += std::get<double>(*d.rows()[r][d.class_index()]);
            mean /= static_cast<double>(rows.size());
            double var = 0.0;
            for (std::size_t r : rows) {
                double v = std::get<double>(*d.rows()[r][d.class_index()]) - mean;
                var += v * v;
            }
            return var / static_cast<double>(rows.size());
        }
        std::map<Value, std::size_t> counts;
        for (std::size_t r : rows) ++counts[*d.rows()[r][d.class_index()]];
        double gini = 1.0;
        for (const auto& [value, count] : counts) {
            double p = static_cast<double>(count) / static_cast<double>(rows.size());
            gini -= p * p;
        }
        return gini;
    }

    Cell leaf_value(const std::vector<std::size_t>& rows) const {
        if (rows.empty()) return fallback_prediction(d);
        if (regression) {
            double mean = 0.0;
            for (std::size_t r : rows) mean += std::get<double>(*d.rows()[r][d.class_index()]);
            return Value{mean / static_cast<double>(rows.size())};
        }
        std::map<Value, std::size_t> counts;
        for (std::size_t r : rows) ++counts[*d.rows()[r][d.class_index()]];
        auto best = counts.begin();
        for (auto it = counts.begin(); it != counts.end(); ++it) {
            if (it->second > best->second) best = it;
        }
        return best->first;
    }

    std::vector<double> numeric_candidates(const std::vector<std::size_t>& rows,
                                           std::size_t col) const {
        std::vector<double> vals;
        for (std::size_t r : rows) {
            if (d.rows()[r][col].has_value()) vals.push_back(std::get<double>(*d.rows()[r][col]));
        }
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        std::vector<double> mids;
        if (vals.size() < 2) return mids;
        if (vals.size() <= 64) {
            for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
                mids.push_back(0.5 * (vals[i] + vals[i + 1]));
            }
        } else {
            for (int q = 1; q < 32; ++q) {
                std::size_t i = vals.size() * static_cast<std::size_t>(q) / 32;
                i = std::min(i, vals.size() - 2);
                mids.push_back(0.5 * (vals[i] + vals[i + 1]));
            }
            std::sort(mids.begin(), mids.end());
            mids.erase(std::unique(mids.begin(), mids.end()), mids.end());
        }
        return mids;
    }

    std::unique_ptr<TreeNode> build(const std::vector<std::size_t>& rows, int depth) {
        auto node = std::make_unique<TreeNode>();
        node->prediction = leaf_value(rows);
        double node_impurity = impurity(rows);
        if (depth >= max_depth || rows.size() < 2 || node_impurity <= 1e-12) return node;
        if (deadline.expired()) {
            timed_out = true;
            return node;
        }

        double best_score = node_impurity - 1e-9;
        std::size_t best_feature = 0;
        bool best_numeric = true;
        double best_threshold = 0.0;
        Value best_category{};
        bool found = false;

        for (std::size_t col : feature_columns(d)) {
            bool is_num = d.attributes()[col].kind == AttributeKind::Numeric;
            std::vector<std::size_t> present;
            std::vector<std::size_t> absent;
            for (std::size_t r : rows) {
                (d.rows()[r][col].has_value() ? present : absent).push_back(r);
            }
            if (present.size() < 2) continue;

            if (is_num) {
                for (double t : numeric_candidates(rows, col)) {
                    std::vector<std::size_t> left, right;
                    for (std::size_t r : present) {
                        (std::get<double>(*d.rows()[r][col]) <= t ? left : right).push_back(r);
                    }
                    if (left.empty() || right.empty()) continue;
                    double w_left = static_cast<double>(left.size());
                    double w_right = static_cast<double>(right.size());
                    double score = (w_left * impurity(left) + w_right * impurity(right)) /
                                   (w_left + w_right);
                    if (score < best_score) {
                        best_score = score;
                        found = true;
                        best_feature = col;
                        best_numeric = true;
                        best_threshold = t;
                    }
                }
            } else {
                std::map<Value, bool> values;
                for (std::size_t r : present) values[*d.rows()[r][col]] = true;
                if (values.size() < 2) continue;
                for (const auto& [value, unused] : values) {
                    (void)unused;
                    std::vector<std::size_t> left, right;
                    for (std::size_t r : present) {
                        (*d.rows()[r][col] == value ? left : right).push_back(r);
                    }
                    if (left.empty() || right.empty()) continue;
                    double w_left = static_cast<double>(left.size());
                    double w_right = static_cast<double>(right.size());
                    double score = (w_left * impurity(left) + w_right * impurity(right)) /
                                   (w_left + w_right);
                    if (score < best_score) {
                        best_score = score;
                        found = true;
                        best_feature = col;
                        best_numeric = false;
                        best_category = value;
                    }
                }
            }
        }
        if (!found) return node;

        std::vector<std::size_t> left, right;
        std::size_t left_present = 0, right_present = 0;
        for (std::size_t r : rows) {
            const Cell& cell = d.rows()[r][best_feature];
            if (!cell.has_value()) continue;
            bool go_left = best_numeric ? std::get<double>(*cell) <= best_threshold
                                        : *cell == best_category;
            (go_left ? left : right).push_back(r);
            ++(go_left ? left_present : right_present);
        }
        bool missing_left = left_present >= right_present;
        for (std::size_t r : rows) {
            if (!d.rows()[r][best_feature].has_value()) {
                (missing_left ? left : right).push_back(r);
            }
        }
        std::sort(left.begin(), left.end());
        std::sort(right.begin(), right.end());

        node->leaf = false;
        node->feature = best_feature;
        node->numeric_split = best_numeric;
        node->threshold = best_threshold;
        node->category = best_category;
        node->missing_goes_left = missing_left;
        node->left = build(left, depth + 1);
        node->right = build(right, depth + 1);
        return node;
    }
};

ExecutionOutcome train_tree(const std::string& id, const Dataset& d, int max_depth,
                            const Deadline& deadline) {
    std::vector<std::size_t> rows = labeled_rows(d);
    if (rows.empty()) {
        return std::shared_ptr<PredictiveModel>(
            std::make_shared<ConstantModel>(id, fallback_prediction(d)));
    }
    TreeBuilder builder{d, numeric_class(d), max_depth, deadline};
    auto root = builder.build(rows, 0);
    if (builder.timed_out) return Failure{FailureReason::Timeout, id, {}};
    return std::shared_ptr<PredictiveModel>(std::make_shared<TreeModel>(id, std::move(root)));
}

class DecisionTree final : public Component {
public:
    DecisionTree()
        : Component("decision_tree", "Decision Tree", ComponentKind::Predictor,
                    {{{"max_depth", "8"}}, {{"max_depth", "4"}}},
                    {Characteristic::DateClass}) {}

private:
    ExecutionOutcome run(const Dataset& d, const HyperparamSetting& params,
                         const ExecutionLimits&, const Deadline& deadline) const override {
        return train_tree(id(), d, param_int(params, "max_depth", 8), deadline);
    }
};

// --- naive bayes --------------------------------------------------------------

struct GaussianStat {
    double mean = 0.0;
    double var = 1.0;
    bool seen = false;
};

class NaiveBayesModel final : public PredictiveModel {
public:
    std::string id;
    std::vector<Value> classes;
    std::vector<double> log_prior;
    // Per class, per feature column: gaussian for numeric, log-prob table for
    // symbolic values.
    std::vector<std::map<std::size_t, GaussianStat>> gaussians;
    std::vector<std::map<std::size_t, std::map<Value, double>>> tables;
    std::vector<std::map<std::size_t, double>> unseen_log;
    std::vector<std::size_t> features;
    std::vector<bool> feature_numeric;

    const std::string& component_id() const override { return id; }

    Cell predict(const Row& row) const override {
        if (classes.empty()) return std::nullopt;
        std::size_t best = 0;
        double best_score = -1e300;
        for (std::size_t c = 0; c < classes.size(); ++c) {
            double score = log_prior[c];
            for (std::size_t f = 0; f < features.size(); ++f) {
                std::size_t col = features[f];
                if (col >= row.size() || !row[col].has_value()) continue;
                if (feature_numeric[f]) {
                    auto it = gaussians[c].find(col);
                    if (it == gaussians[c].end() || !it->second.seen) continue;
                    double diff = std::get<double>(*row[col]) - it->second.mean;
                    score += -0.5 * std::log(2.0 * M_PI * it->second.var) -
                             diff * diff / (2.0 * it->second.var);
                } else {
                    auto table_it = tables[c].find(col);
                    if (table_it == tables[c].end()) continue;
                    auto v = table_it->second.find(*row[col]);
                    score += v != table_it->second.end() ? v->second : unseen_log[c].at(col);
                }
            }
            if (score > best_score) {
                best_score = score;
                best = c;
            }
        }
        return classes[best];
    }
};

class NaiveBayes final : public Component {
public:
    NaiveBayes()
        : Component("naive_bayes", "Naive Bayes", ComponentKind::Predictor,
                    {{{"smoothing", "1.0"}}, {{"smoothing", "0.5"}}},
                    {Characteristic::NumericClass, Characteristic::DateClass}) {}

private:
    ExecutionOutcome run(const Dataset& d, const HyperparamSetting& params,
                         const ExecutionLimits&, const Deadline& deadline) const override {
        double smoothing = param_double(params, "smoothing", 1.0);
        std::vector<std::size_t> rows = labeled_rows(d);
        if (rows.empty()) {
            return std::shared_ptr<PredictiveModel>(
                std::make_shared<ConstantModel>(id(), fallback_prediction(d)));
        }
        auto model = std::make_shared<NaiveBayesModel>();
        model->id = id();
        std::map<Value, std::vector<std::size_t>> by_class;
        for (std::size_t r : rows) by_class[*d.rows()[r][d.class_index()]].push_back(r);
        for (const auto& [value, members] : by_class) {
            model->classes.push_back(value);
            model->log_prior.push_back(
                std::log((static_cast<double>(members.size()) + smoothing) /
                         (static_cast<double>(rows.size()) +
                          smoothing * static_cast<double>(by_class.size()))));
        }
        model->features = feature_columns(d);
        for (std::size_t col : model->features) {
            model->feature_numeric.push_back(d.attributes()[col].kind == AttributeKind::Numeric);
        }
        std::map<std::size_t, std::map<Value, bool>> distinct;
        for (std::size_t f = 0; f < model->features.size(); ++f) {
            if (model->feature_numeric[f]) continue;
            std::size_t col = model->features[f];
            for (std::size_t r : rows) {
                if (d.rows()[r][col].has_value()) distinct[col][*d.rows()[r][col]] = true;
            }
        }
        model->gaussians.resize(model->classes.size());
        model->tables.resize(model->classes.size());
        model->unseen_log.resize(model->classes.size());
        std::size_t ci = 0;
        for (const auto& [value, members] : by_class) {
            if (deadline.expired()) return Failure{FailureReason::Timeout, id(), {}};
            for (std::size_t f = 0; f < model->features.size(); ++f) {
                std::size_t col = model->features[f];
                if (model->feature_numeric[f]) {
                    double sum = 0.0, count = 0.0;
                    for (std::size_t r : members) {
                        if (!d.rows()[r][col].has_value()) continue;
                        sum += std::get<double>(*d.rows()[r][col]);
                        count += 1.0;
                    }
                    GaussianStat g;
                    if (count > 0) {
                        g.mean = sum / count;
                        double var = 0.0;
                        for (std::size_t r : members) {
                            if (!d.rows()[r][col].has_value()) continue;
                            double diff = std::get<double>(*d.rows()[r][col]) - g.mean;
                            var += diff * diff;
                        }
                        g.var = std::max(var / count, 1e-9);
                        g.seen = true;
                    }
                    model->gaussians[ci][col] = g;
                } else {
                    std::map<Value, std::size_t> counts;
                    double present = 0.0;
                    for (std::size_t r : members) {
                        if (!d.rows()[r][col].has_value()) continue;
                        ++counts[*d.rows()[r][col]];
                        present += 1.0;
                    }
                    double card = static_cast<double>(std::max<std::size_t>(distinct[col].size(), 1));
                    double denom = present + smoothing * card;
                    for (const auto& [v, unused] : distinct[col]) {
                        (void)unused;
                        auto it = counts.find(v);
                        double c = it == counts.end() ? 0.0 : static_cast<double>(it->second);
                        model->tables[ci][col][v] = std::log((c + smoothing) / denom);
                    }
                    model->unseen_log[ci][col] = std::log(smoothing / denom);
                }
            }
            ++ci;
        }
        return std::shared_ptr<PredictiveModel>(model);
    }
};

// --- linear regression ----------------------------------------------------------

class LinearModel final : public PredictiveModel {
public:
    std::string id;
    std::vector<std::size_t> features;
    std::vector<double> column_mean;  // imputation for missing cells at predict
    std::vector<double> weights;      // |features| + 1, last is bias
    const std::string& component_id() const override { return id; }
    Cell predict(const Row& row) const override {
        double y = weights.back();
        for (std::size_t f = 0; f < features.size(); ++f) {
            std::size_t col = features[f];
            double v = (col < row.size() && row[col].has_value()) ? std::get<double>(*row[col])
                                                                  : column_mean[f];
            y += weights[f] * v;
        }
        return Value{y};
    }
};

// Solves a (m x m) system in place by Gaussian elimination with partial
// pivoting; the ridge term keeps it well posed.
std::vector<double> solve_linear(std::vector<std::vector<double>> a, std::vector<double> b) {
    std::size_t m = a.size();
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t pivot = i;
        for (std::size_t r = i + 1; r < m; ++r) {
            if (std::fabs(a[r][i]) > std::fabs(a[pivot][i])) pivot = r;
        }
        std::swap(a[i], a[pivot]);
        std::swap(b[i], b[pivot]);
        double diag = a[i][i];
        if (std::fabs(diag) < 1e-300) continue;
        for (std::size_t r = i + 1; r < m; ++r) {
            double factor = a[r][i] / diag;
            if (factor == 0.0) continue;
            for (std::size_t c = i; c < m; ++c) a[r][c] -= factor * a[i][c];
            b[r] -= factor * b[i];
        }
    }
    std::vector<double> x(m, 0.0);
    for (std::size_t ii = m; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t c = ii + 1; c < m; ++c) s -= a[ii][c] * x[c];
        x[ii] = std::fabs(a[ii][ii]) < 1e-300 ? 0.0 : s / a[ii][ii];
    }
    return x;
}

class LinearRegression final : public Component {
public:
    LinearRegression()
        : Component("linear_regression", "Ridge Linear Regression", ComponentKind::Predictor,
                    {{{"ridge", "0.001"}}, {{"ridge", "0.1"}}},
                    {Characteristic::NominalAttributes, Characteristic::BinaryAttributes,
                     Characteristic::DateAttributes, Characteristic::EmptyNominalAttributes,
                     Characteristic::MissingValues, Characteristic::NominalClass,
                     Characteristic::BinaryClass, Characteristic::SymbolicClass,
                     Characteristic::StringClass, Characteristic::UnaryClass,
                     Characteristic::DateClass, Characteristic::MissingClassValues}) {}

private:
    ExecutionOutcome run(const Dataset& d, const HyperparamSetting& params,
                         const ExecutionLimits&, const Deadline& deadline) const override {
        double ridge = param_double(params, "ridge", 0.001);
        auto model = std::make_shared<LinearModel>();
        model->id = id();
        model->features = feature_columns(d);
        std::size_t m = model->features.size() + 1;
        std::size_t n = d.n_rows();
        model->column_mean.assign(model->features.size(), 0.0);
        if (n == 0) {
            model->weights.assign(m, 0.0);
            return std::shared_ptr<PredictiveModel>(model);
        }
        for (std::size_t f = 0; f < model->features.size(); ++f) {
            double s = 0.0;
            for (const Row& row : d.rows()) s += std::get<double>(*row[model->features[f]]);
            model->column_mean[f] = s / static_cast<double>(n);
        }
        std::vector<std::vector<double>> xtx(m, std::vector<double>(m, 0.0));
        std::vector<double> xty(m, 0.0);
        std::vector<double> x(m, 1.0);
        for (std::size_t r = 0; r < n; ++r) {
            if ((r & 255u) == 0 && deadline.expired()) {
                return Failure{FailureReason::Timeout, id(), {}};
            }
            for (std::size_t f = 0; f < model->features.size(); ++f) {
                x[f] = std::get<double>(*d.rows()[r][model->features[f]]);
            }
            x[m - 1] = 1.0;
            double y = std::get<double>(*d.rows()[r][d.class_index()]);
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = i; j < m; ++j) xtx[i][j] += x[i] * x[j];
                xty[i] += x[i] * y;
            }
        }
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < i; ++j) xtx[i][j] = xtx[j][i];
            xtx[i][i] += ridge;
        }
        model->weights = solve_linear(std::move(xtx), std::move(xty));
        return std::shared_ptr<PredictiveModel>(model);
    }
};

// --- k nearest neighbours --------------------------------------------------------

class KnnModel final : public PredictiveModel {
public:
    std::string id;
    int k = 3;
    bool regression = false;
    std::vector<std::size_t> features;
    std::vector<bool> feature_numeric;
    std::vector<double> range;  // per numeric feature, from train data
    std::vector<Row> train_rows;    // feature cells only, |features| wide
    std::vector<Value> labels;
    Cell fallback;

    const std::string& component_id() const override { return id; }

    Cell predict(const Row& row) const override {
        if (train_rows.empty()) return fallback;
        std::vector<std::pair<double, std::size_t>> dist;
        dist.reserve(train_rows.size());
        for (std::size_t t = 0; t < train_rows.size(); ++t) {
            double s = 0.0;
            for (std::size_t f = 0; f < features.size(); ++f) {
                std::size_t col = features[f];
                const Cell& a = col < row.size() ? row[col] : Cell{};
                const Cell& b = train_rows[t][f];
                if (!a.has_value() || !b.has_value()) {
                    s += 1.0;
                } else if (feature_numeric[f]) {
                    if (range[f] > 0.0) {
                        double diff = (std::get<double>(*a) - std::get<double>(*b)) / range[f];
                        s += std::fabs(diff);
                    }
                } else {
                    s += *a == *b ? 0.0 : 1.0;
                }
            }
            dist.emplace_back(s, t);
        }
        std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), dist.size());
        std::partial_sort(dist.begin(), dist.begin() + kk, dist.end());
        if (regression) {
            double s = 0.0;
            for (std::size_t i = 0; i < kk; ++i) s += std::get<double>(labels[dist[i].second]);
            return Value{s / static_cast<double>(kk)};
        }
        std::map<Value, std::size_t> votes;
        Value best = labels[dist[0].second];
        std::size_t best_votes = 0;
        for (std::size_t i = 0; i < kk; ++i) {
            const Value& v = labels[dist[i].second];
            std::size_t c = ++votes[v];
            if (c > best_votes) {
                best_votes = c;
                best = v;
            }
        }
        return best;
    }
};

class Knn final : public Component {
public:
    Knn()
        : Component("knn", "K Nearest Neighbours", ComponentKind::Predictor,
                    {{{"k", "3"}}, {{"k", "5"}}}, {Characteristic::DateClass}) {}

private:
    ExecutionOutcome run(const Dataset& d, const HyperparamSetting& params,
                         const ExecutionLimits&, const Deadline&) const override {
        auto model = std::make_shared<KnnModel>();
        model->id = id();
        model->k = param_int(params, "k", 3);
        model->regression = numeric_class(d);
        model->features = feature_columns(d);
        model->fallback = fallback_prediction(d);
        for (std::size_t col : model->features) {
            model->feature_numeric.push_back(d.attributes()[col].kind == AttributeKind::Numeric);
        }
        model->range.assign(model->features.size(), 0.0);
        for (std::size_t f = 0; f < model->features.size(); ++f) {
            if (!model->feature_numeric[f]) continue;
            double lo = 1e300, hi = -1e300;
            for (const Row& row : d.rows()) {
                if (!row[model->features[f]].has_value()) continue;
                double v = std::get<double>(*row[model->features[f]]);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (hi > lo) model->range[f] = hi - lo;
        }
        for (std::size_t r : labeled_rows(d)) {
            Row cells;
            cells.reserve(model->features.size());
            for (std::size_t col : model->features) cells.push_back(d.rows()[r][col]);
            model->train_rows.push_back(std::move(cells));
            model->labels.push_back(*d.rows()[r][d.class_index()]);
        }
        return std::shared_ptr<PredictiveModel>(model);
    }
};

// --- logistic regression ----------------------------------------------------------

class LogisticModel final : public PredictiveModel {
public:
    std::string id;
    std::vector<Value> classes;
    std::vector<std::size_t> features;
    std::vector<double> mean, scale;
    std::vector<std::vector<double>> weights;  // per class: |features| + bias

    const std::string& component_id() const override { return id; }

    Cell predict(const Row& row) const override {
        if (classes.empty()) return std::nullopt;
        std::size_t best = 0;
        double best_score = -1e300;
        for (std::size_t c = 0; c < classes.size(); ++c) {
            double s = weights[c].back();
            for (std::size_t f = 0; f < features.size(); ++f) {
                std::size_t col = features[f];
                double v = (col < row.size() && row[col].has_value())
                               ? std::get<double>(*row[col])
                               : mean[f];
                s += weights[c][f] * (v - mean[f]) * scale[f];
            }
            if (s > best_score) {
                best_score = s;
                best = c;
            }
        }
        return classes[best];
    }
};

class Logistic final : public Component {
public:
    Logistic()
        : Component("logistic", "Logistic Regression", ComponentKind::Predictor,
                    {{{"learning_rate", "0.1"}}, {{"learning_rate", "0.3"}}},
                    {Characteristic::NominalAttributes, Characteristic::BinaryAttributes,
                     Characteristic::DateAttributes, Characteristic::EmptyNominalAttributes,
                     Characteristic::MissingValues, Characteristic::NumericClass,
                     Characteristic::DateClass, Characteristic::StringClass,
                     Characteristic::MissingClassValues}) {}

private:
    ExecutionOutcome run(const Dataset& d, const HyperparamSetting& params,
                         const ExecutionLimits&, const Deadline& deadline) const override {
        double lr = param_double(params, "learning_rate", 0.1);
        constexpr int kIterations = 60;
        auto model = std::make_shared<LogisticModel>();
        model->id = id();
        model->features = feature_columns(d);
        std::size_t n = d.n_rows(), m = model->features.size();
        std::map<Value, std::size_t> class_ids;
        for (const Row& row : d.rows()) {
            if (row[d.class_index()].has_value()) class_ids.emplace(*row[d.class_index()], 0);
        }
        std::size_t ci = 0;
        for (auto& [value, idx] : class_ids) {
            idx = ci++;
            model->classes.push_back(value);
        }
        if (model->classes.empty()) {
            return std::shared_ptr<PredictiveModel>(
                std::make_shared<ConstantModel>(id(), fallback_prediction(d)));
        }
        model->mean.assign(m, 0.0);
        model->scale.assign(m, 1.0);
        std::vector<std::vector<double>> x(n, std::vector<double>(m, 0.0));
        for (std::size_t f = 0; f < m; ++f) {
            double s = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                x[r][f] = std::get<double>(*d.rows()[r][model->features[f]]);
                s += x[r][f];
            }
            model->mean[f] = n ? s / static_cast<double>(n) : 0.0;
            double var = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                double diff = x[r][f] - model->mean[f];
                var += diff * diff;
            }
            var = n ? var / static_cast<double>(n) : 0.0;
            model->scale[f] = var > 1e-24 ? 1.0 / std::sqrt(var) : 1.0;
            for (std::size_t r = 0; r < n; ++r) x[r][f] = (x[r][f] - model->mean[f]) * model->scale[f];
        }
        std::vector<std::size_t> y(n);
        for (std::size_t r = 0; r < n; ++r) y[r] = class_ids[*d.rows()[r][d.class_index()]];

        model->weights.assign(model->classes.size(), std::vector<double>(m + 1, 0.0));
        for (std::size_t c = 0; c < model->classes.size(); ++c) {
            std::vector<double>& w = model->weights[c];
            for (int iter = 0; iter < kIterations; ++iter) {
                if (deadline.expired()) return Failure{FailureReason::Timeout, id(), {}};
                std::vector<double> grad(m + 1, 0.0);
                for (std::size_t r = 0; r < n; ++r) {
                    double z = w[m];
                    for (std::size_t f = 0; f < m; ++f) z += w[f] * x[r][f];
                    double p = 1.0 / (1.0 + std::exp(-std::clamp(z, -30.0, 30.0)));
                    double err = p - (y[r] == c ? 1.0 : 0.0);
                    for (std::size_t f = 0; f < m; ++f) grad[f] += err * x[r][f];
                    grad[m] += err;
                }
                double inv_n = n ? 1.0 / static_cast<double>(n) : 0.0;
                for (std::size_t f = 0; f <= m; ++f) w[f] -= lr * grad[f] * inv_n;
            }
        }
        // predict() re-applies standardization from raw cells
        return std::shared_ptr<PredictiveModel>(model);
    }
};

// --- bagging meta-predictor ---------------------------------------------------------

class EnsembleModel final : public PredictiveModel {
public:
    std::string id;
    bool regression = false;
    std::vector<std::shared_ptr<PredictiveModel>> members;

    const std::string& component_id() const override { return id; }

    Cell predict(const Row& row) const override {
        if (members.empty()) return std::nullopt;
        if (regression) {
            double s = 0.0;
            std::size_t n = 0;
            for (const auto& member : members) {
                Cell c = member->predict(row);
                if (c.has_value()) {
                    s += std::get<double>(*c);
                    ++n;
                }
            }
            return n ? Cell{Value{s / static_cast<double>(n)}} : Cell{};
        }
        std::map<Value, std::size_t> votes;
        Cell best;
        std::size_t best_votes = 0;
        for (const auto& member : members) {
            Cell c = member->predict(row);
            if (!c.has_value()) continue;
            std::size_t v = ++votes[*c];
            if (v > best_votes) {
                best_votes = v;
                best = c;
            }
        }
        return best;
    }
};

// Bootstrap aggregation over a base predictor drawn from the pool's predictor
// subset. The eligible bases share one input contract, so the learned
// knowledge holds for every setting.
class Bagging final : public Component {
public:
    Bagging()
        : Component("bagging", "Bootstrap Aggregation", ComponentKind::MetaPredictor,
                    {{{"base", "decision_tree"}, {"bags", "5"}},
                     {{"base", "decision_tree"}, {"bags", "10"}},
                     {{"base", "knn"}, {"bags", "5"}},
                     {{"base", "knn"}, {"bags", "10"}}},
                    {Characteristic::DateClass}),
          tree_(make_decision_tree()),
          knn_(make_knn()) {}

private:
    ExecutionOutcome run(const Dataset& d, const HyperparamSetting& params,
                         const ExecutionLimits& limits, const Deadline& deadline) const override {
        const Component& base =
            param_str(params, "base", "decision_tree") == "knn" ? *knn_ : *tree_;
        int bags = param_int(params, "bags", 5);
        auto model = std::make_shared<EnsembleModel>();
        model->id = id();
        model->regression = numeric_class(d);
        for (int bag = 0; bag < bags; ++bag) {
            if (deadline.expired()) return Failure{FailureReason::Timeout, id(), {}};
            std::mt19937_64 rng(limits.seed ^ (0x9e3779b97f4a7c15ull * (bag + 1)));
            std::vector<Row> rows;
            rows.reserve(d.n_rows());
            if (d.n_rows() > 0) {
                std::uniform_int_distribution<std::size_t> pick(0, d.n_rows() - 1);
                for (std::size_t r = 0; r < d.n_rows(); ++r) rows.push_back(d.rows()[pick(rng)]);
            }
            Dataset sample(d.name(), d.attributes(), std::move(rows), d.class_index());
            ExecutionOutcome out = base.execute(sample, base.settings()[0], limits, deadline);
            if (!outcome_ok(out)) return out;
            model->members.push_back(std::get<std::shared_ptr<PredictiveModel>>(out));
        }
        return std::shared_ptr<PredictiveModel>(model);
    }

    std::shared_ptr<const Component> tree_;
    std::shared_ptr<const Component> knn_;
};

}  // namespace

std::shared_ptr<const Component> make_zero_rule() { return std::make_shared<ZeroRule>(); }
std::shared_ptr<const Component> make_decision_tree() { return std::make_shared<DecisionTree>(); }
std::shared_ptr<const Component> make_naive_bayes() { return std::make_shared<NaiveBayes>(); }
std::shared_ptr<const Component> make_linear_regression() {
    return std::make_shared<LinearRegression>();
}
std::shared_ptr<const Component> make_knn() { return std::make_shared<Knn>(); }
std::shared_ptr<const Component> make_logistic() { return std::make_shared<Logistic>(); }
std::shared_ptr<const Component> make_bagging() { return std::make_shared<Bagging>(); }

}  // namespace detail
}  // namespace avatar
