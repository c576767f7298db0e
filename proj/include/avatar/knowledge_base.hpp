#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "avatar/characteristics.hpp"
#include "avatar/components.hpp"
#include "avatar/synthetic.hpp"

namespace avatar {

// Per-characteristic {0,1}: can the component consume inputs with this flag.
using CapabilityVector = CharacteristicToken;

// Per-characteristic {-1,0,1}: how the component moves this flag.
class EffectVector {
public:
    EffectVector() { values_.fill(0); }
    int8_t get(Characteristic c) const { return values_[static_cast<int>(c)]; }
    void set(Characteristic c, int8_t v);
    bool operator==(const EffectVector& other) const = default;

private:
    std::array<int8_t, kCharacteristicCount> values_;
};

struct ComponentKnowledge {
    std::string component_id;
    std::string component_name;
    CapabilityVector capabilities;
    EffectVector effects;

    bool operator==(const ComponentKnowledge& other) const = default;
};

struct KnowledgeProvenance {
    uint64_t learner_seed = 0;
    std::string suite_manifest_hash;  // hex

    bool operator==(const KnowledgeProvenance& other) const = default;
};

class KnowledgeBase {
public:
    void insert(ComponentKnowledge record);  // throws on duplicate id
    void replace(ComponentKnowledge record);
    bool contains(const std::string& component_id) const;
    const ComponentKnowledge& at(const std::string& component_id) const;
    const std::map<std::string, ComponentKnowledge>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }

    KnowledgeProvenance provenance;

    bool operator==(const KnowledgeBase& other) const = default;

private:
    std::map<std::string, ComponentKnowledge> records_;
};

// One learner observation worth surfacing: a component that failed every
// synthetic case, or an effect observation disagreeing with the recorded one.
struct LearnerWarning {
    std::string component_id;
    std::string kind;  // "failed_all_cases" | "effect_conflict"
    std::string detail;
};

struct LearnResult {
    KnowledgeBase kb;
    std::vector<LearnerWarning> warnings;
};

// Four stages per component: init to zero, execute against every case,
// absorb successful input tokens into capabilities, then derive effects
// (PREDICTIVE_MODEL for predictors, first observed token delta otherwise).
// Executions run on up to `jobs` threads; aggregation order is fixed.
LearnResult learn_knowledge_base(const std::vector<std::shared_ptr<const Component>>& pool,
                                 const std::vector<SyntheticCase>& suite,
                                 const ExecutionLimits& limits, int jobs = 1);

void save_kb(const KnowledgeBase& kb, const std::string& path);
KnowledgeBase load_kb(const std::string& path);

std::string kb_to_json(const KnowledgeBase& kb);
KnowledgeBase kb_from_json(const std::string& text);

struct MergeResult {
    KnowledgeBase kb;
    std::vector<std::string> replaced_ids;
};

// Union by component id; extension records win collisions.
MergeResult merge_kb(const KnowledgeBase& base, const KnowledgeBase& extension);

}  // namespace avatar
