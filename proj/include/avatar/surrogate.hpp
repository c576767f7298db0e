#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "avatar/components.hpp"
#include "avatar/knowledge_base.hpp"

namespace avatar {

struct PipelineStep {
    std::string component_id;
    HyperparamSetting hyperparams;

    bool operator==(const PipelineStep& other) const = default;
};

// Ordered component chain: optional preprocessors in template order, each
// kind at most once, closed by exactly one predictor or meta-predictor.
// Evaluation also has to handle chains that break the template (the whole
// point of a validity check), so `unchecked` skips the ordering rule while
// still requiring the terminal predictor.
class Pipeline {
public:
    explicit Pipeline(std::vector<PipelineStep> steps);

    static Pipeline unchecked(std::vector<PipelineStep> steps);

    const std::vector<PipelineStep>& steps() const { return steps_; }
    std::size_t size() const { return steps_.size(); }

    std::string to_string() const;
    std::string to_json() const;
    // Parses without the template-order rule; eval accepts arbitrary chains.
    static Pipeline from_json(const std::string& text);

    bool operator==(const Pipeline& other) const = default;

private:
    struct Unchecked {};
    Pipeline(std::vector<PipelineStep> steps, Unchecked);

    std::vector<PipelineStep> steps_;
};

// Petri-net image of a pipeline: a place/transition chain whose transitions
// carry capability and effect vectors instead of algorithms.
struct SurrogateTransition {
    std::string component_id;
    CapabilityVector capabilities;
    EffectVector effects;
};

struct SurrogatePipeline {
    std::vector<std::string> places;  // start, inter_1..inter_{n-1}, end
    std::vector<SurrogateTransition> transitions;
    CharacteristicToken start_token;
};

struct ValidityVerdict {
    bool valid = false;
    std::optional<std::string> failing_component;
    std::vector<Characteristic> failing_characteristics;
    std::vector<CharacteristicToken> fired_tokens;  // one per reached place

    std::string to_json() const;
};

// Step 1 copies the chain structure, step 2 extracts the start token from the
// dataset, step 3 attaches each component's knowledge-base record.
SurrogatePipeline map_to_surrogate(const Pipeline& p, const Dataset& d, const KnowledgeBase& kb);
SurrogatePipeline map_to_surrogate(const Pipeline& p, const CharacteristicToken& start_token,
                                   const KnowledgeBase& kb);

struct FiringInvalid {
    std::vector<Characteristic> failing;
};

using FiringResult = std::variant<FiringInvalid, CharacteristicToken>;

// Invalid iff some characteristic is active in the input token but absent
// from the capabilities (all such characteristics reported). Otherwise each
// output entry is clamp(in + effect, 0, 1).
FiringResult fire_transition(const CharacteristicToken& in_token,
                             const ComponentKnowledge& knowledge);
FiringResult fire_transition(const CharacteristicToken& in_token,
                             const CapabilityVector& capabilities, const EffectVector& effects);

// Fires transitions left to right, stopping at the first invalid component.
ValidityVerdict evaluate_validity(const Pipeline& p, const Dataset& d, const KnowledgeBase& kb);
ValidityVerdict evaluate_validity(const Pipeline& p, const CharacteristicToken& start_token,
                                  const KnowledgeBase& kb);

}  // namespace avatar
