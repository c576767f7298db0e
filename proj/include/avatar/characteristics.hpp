#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace avatar {

// The boolean dataset properties that drive every capability and effect
// decision. Class-side flags describe the designated target attribute,
// attribute-side flags describe the remaining columns, and PREDICTIVE_MODEL
// marks the artifact a predictor leaves behind.
enum class Characteristic : int {
    BinaryClass = 0,
    NumericClass,
    DateClass,
    MissingClassValues,
    NominalClass,
    SymbolicClass,
    StringClass,
    UnaryClass,
    BinaryAttributes,
    DateAttributes,
    EmptyNominalAttributes,
    MissingValues,
    NominalAttributes,
    NumericAttributes,
    UnaryAttributes,
    PredictiveModel,
};

inline constexpr int kCharacteristicCount = 16;

std::array<Characteristic, kCharacteristicCount> all_characteristics();

// Canonical ALL_CAPS name used in every external file format.
std::string_view characteristic_name(Characteristic c);

// Inverse of characteristic_name; throws SchemaError on unknown names.
Characteristic characteristic_from_name(std::string_view name);

// A Petri-net token: one bit per characteristic. Tokens extracted from a
// dataset always satisfy base class-kind exclusivity (a class attribute has
// exactly one of the numeric/date/nominal/string kinds); tokens produced by
// effect arithmetic mid-pipeline are not re-normalized.
class CharacteristicToken {
public:
    CharacteristicToken() { bits_.fill(0); }

    uint8_t get(Characteristic c) const { return bits_[static_cast<int>(c)]; }
    void set(Characteristic c, uint8_t v) { bits_[static_cast<int>(c)] = v ? 1 : 0; }

    bool operator==(const CharacteristicToken& other) const = default;

    // Characteristics that are 1 in this token, in canonical order.
    std::array<uint8_t, kCharacteristicCount>& raw() { return bits_; }
    const std::array<uint8_t, kCharacteristicCount>& raw() const { return bits_; }

    std::string to_string() const;

private:
    std::array<uint8_t, kCharacteristicCount> bits_;
};

std::ostream& operator<<(std::ostream& os, const CharacteristicToken& t);

}  // namespace avatar
