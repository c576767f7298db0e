#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "avatar/dataset.hpp"

namespace avatar {

// One minimal dataset isolating a single characteristic (plus the class-kind
// flag, the numeric carrier attribute, and any flags implied by construction).
struct SyntheticCase {
    Characteristic characteristic;
    std::string class_variant;  // "nominal" or "numeric"
    std::string name;           // "<characteristic>__<variant>" in lowercase
    Dataset dataset;
};

// Generates the full suite in canonical order: every attribute-side
// characteristic in both class variants plus one case per class-side
// characteristic, sorted by (characteristic name, variant name). rows >= 8.
std::vector<SyntheticCase> generate_suite(std::size_t rows, uint64_t seed);

// Writes one ARFF per case plus manifest.json mapping case -> expected token.
void write_suite(const std::vector<SyntheticCase>& suite, const std::string& dir,
                 std::size_t rows, uint64_t seed);

std::vector<SyntheticCase> load_suite(const std::string& dir);

// Stable content hash recorded in knowledge-base provenance.
uint64_t suite_hash(const std::vector<SyntheticCase>& suite);

}  // namespace avatar
