#include <nlohmann/json.hpp>

#include "avatar/components.hpp"
#include "avatar/components_detail.hpp"
#include "avatar/errors.hpp"

namespace avatar {

const std::vector<std::shared_ptr<const Component>>& pool_roster() {
    static const std::vector<std::shared_ptr<const Component>> roster = {
        detail::make_replace_missing(),
        detail::make_em_impute(),
        detail::make_iqr_clip(),
        detail::make_center(),
        detail::make_standardize(),
        detail::make_discretize(),
        detail::make_nominal_to_binary(),
        detail::make_whiten(),
        detail::make_pca(),
        detail::make_periodic_sample(),
        detail::make_class_balance(),
        detail::make_zero_rule(),
        detail::make_decision_tree(),
        detail::make_naive_bayes(),
        detail::make_linear_regression(),
        detail::make_knn(),
        detail::make_logistic(),
        detail::make_bagging(),
    };
    return roster;
}

std::shared_ptr<const Component> find_component(const std::string& id) {
    for (const auto& c : pool_roster()) {
        if (c->id() == id) return c;
    }
    throw UnknownComponentError(id);
}

std::string pool_to_json() {
    nlohmann::ordered_json out;
    out["schema_version"] = 1;
    out["components"] = nlohmann::ordered_json::array();
    for (const auto& c : pool_roster()) {
        nlohmann::ordered_json entry;
        entry["id"] = c->id();
        entry["name"] = c->display_name();
        entry["kind"] = std::string(component_kind_name(c->kind()));
        entry["settings"] = nlohmann::ordered_json::array();
        for (const HyperparamSetting& s : c->settings()) {
            nlohmann::ordered_json setting = nlohmann::ordered_json::object();
            for (const auto& [key, value] : s) setting[key] = value;
            entry["settings"].push_back(setting);
        }
        out["components"].push_back(entry);
    }
    return out.dump(2) + "\n";
}

}  // namespace avatar
