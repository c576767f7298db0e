#pragma once

#include <memory>

#include "avatar/components.hpp"

namespace avatar {
namespace detail {

std::shared_ptr<const Component> make_replace_missing();
std::shared_ptr<const Component> make_em_impute();
std::shared_ptr<const Component> make_iqr_clip();
std::shared_ptr<const Component> make_center();
std::shared_ptr<const Component> make_standardize();
std::shared_ptr<const Component> make_discretize();
std::shared_ptr<const Component> make_nominal_to_binary();
std::shared_ptr<const Component> make_whiten();
std::shared_ptr<const Component> make_pca();
std::shared_ptr<const Component> make_periodic_sample();
std::shared_ptr<const Component> make_class_balance();

std::shared_ptr<const Component> make_zero_rule();
std::shared_ptr<const Component> make_decision_tree();
std::shared_ptr<const Component> make_naive_bayes();
std::shared_ptr<const Component> make_linear_regression();
std::shared_ptr<const Component> make_knn();
std::shared_ptr<const Component> make_logistic();
std::shared_ptr<const Component> make_bagging();

}  // namespace detail
}  // namespace avatar
