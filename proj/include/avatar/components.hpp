#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "avatar/characteristics.hpp"
#include "avatar/dataset.hpp"

namespace avatar {

struct ExecutionLimits {
    std::chrono::duration<double> timeout{10.0};
    uint64_t seed = 0;
};

// Cooperative deadline shared across a pipeline execution; long-running loops
// poll it between units of work.
class Deadline {
public:
    explicit Deadline(std::chrono::duration<double> budget)
        : end_(std::chrono::steady_clock::now() +
               std::chrono::duration_cast<std::chrono::steady_clock::duration>(budget)) {}

    bool expired() const { return std::chrono::steady_clock::now() >= end_; }

private:
    std::chrono::steady_clock::time_point end_;
};

enum class ComponentKind {
    MissingValueHandler,
    OutlierRemover,
    Transformer,
    DimensionalityReducer,
    Sampler,
    Predictor,
    MetaPredictor,
};

std::string_view component_kind_name(ComponentKind k);
ComponentKind component_kind_from_name(std::string_view name);
bool is_predictor_kind(ComponentKind k);

// Template position of a kind in a pipeline; predictors close the chain.
int template_rank(ComponentKind k);

using HyperparamSetting = std::map<std::string, std::string>;

class PredictiveModel {
public:
    virtual ~PredictiveModel() = default;
    virtual const std::string& component_id() const = 0;
    // Total over rows matching the training schema, including missing cells.
    virtual Cell predict(const Row& row) const = 0;
};

enum class FailureReason { Incompatibility, Timeout, Internal };

struct Failure {
    FailureReason reason = FailureReason::Internal;
    std::string detail;
    std::vector<Characteristic> violated;  // set for incompatibility failures
};

using ExecutionOutcome =
    std::variant<Dataset, std::shared_ptr<PredictiveModel>, Failure>;

bool outcome_ok(const ExecutionOutcome& o);
const Failure& outcome_failure(const ExecutionOutcome& o);

class Component {
public:
    virtual ~Component() = default;

    const std::string& id() const { return id_; }
    const std::string& display_name() const { return display_name_; }
    ComponentKind kind() const { return kind_; }
    bool is_predictor() const { return is_predictor_kind(kind_); }

    // Enumerated hyperparameter grid, at most 4 settings; settings()[0] is
    // the default used when learning the knowledge base.
    const std::vector<HyperparamSetting>& settings() const { return settings_; }

    // Characteristics this component can consume. Execution refuses any input
    // whose token is active outside this mask; the learned knowledge base is
    // expected to rediscover exactly this mask from the synthetic suite.
    const CharacteristicToken& declared_capabilities() const { return declared_caps_; }

    ExecutionOutcome execute(const Dataset& d, const HyperparamSetting& params,
                             const ExecutionLimits& limits) const;
    ExecutionOutcome execute(const Dataset& d, const HyperparamSetting& params,
                             const ExecutionLimits& limits, const Deadline& deadline) const;

protected:
    Component(std::string id, std::string display_name, ComponentKind kind,
              std::vector<HyperparamSetting> settings,
              std::vector<Characteristic> rejected);

    virtual ExecutionOutcome run(const Dataset& d, const HyperparamSetting& params,
                                 const ExecutionLimits& limits, const Deadline& deadline) const = 0;

private:
    std::string id_;
    std::string display_name_;
    ComponentKind kind_;
    std::vector<HyperparamSetting> settings_;
    CharacteristicToken declared_caps_;
};

// The native pool: 2 missing-value handlers, 1 outlier handler, 5
// transformers, 1 dimensionality reducer, 2 samplers, 6 predictors and 1
// meta-predictor. Stable registration order, unique ids.
const std::vector<std::shared_ptr<const Component>>& pool_roster();

std::shared_ptr<const Component> find_component(const std::string& id);

// Roster dump consumed by the optimizer and docs (pool.json).
std::string pool_to_json();

}  // namespace avatar
