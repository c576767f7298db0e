#include "avatar/characteristics.hpp"

#include <ostream>
#include <sstream>

#include "avatar/errors.hpp"

namespace avatar {

namespace {

constexpr std::string_view kNames[kCharacteristicCount] = {
    "BINARY_CLASS",
    "NUMERIC_CLASS",
    "DATE_CLASS",
    "MISSING_CLASS_VALUES",
    "NOMINAL_CLASS",
    "SYMBOLIC_CLASS",
    "STRING_CLASS",
    "UNARY_CLASS",
    "BINARY_ATTRIBUTES",
    "DATE_ATTRIBUTES",
    "EMPTY_NOMINAL_ATTRIBUTES",
    "MISSING_VALUES",
    "NOMINAL_ATTRIBUTES",
    "NUMERIC_ATTRIBUTES",
    "UNARY_ATTRIBUTES",
    "PREDICTIVE_MODEL",
};

}  // namespace

std::array<Characteristic, kCharacteristicCount> all_characteristics() {
    std::array<Characteristic, kCharacteristicCount> out{};
    for (int i = 0; i < kCharacteristicCount; ++i) {
        out[i] = static_cast<Characteristic>(i);
    }
    return out;
}

std::string_view characteristic_name(Characteristic c) {
    return kNames[static_cast<int>(c)];
}

Characteristic characteristic_from_name(std::string_view name) {
    for (int i = 0; i < kCharacteristicCount; ++i) {
        if (kNames[i] == name) return static_cast<Characteristic>(i);
    }
    throw SchemaError("unknown characteristic name: " + std::string(name));
}

std::string CharacteristicToken::to_string() const {
    std::ostringstream os;
    os << *this;
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const CharacteristicToken& t) {
    os << '{';
    bool first = true;
    for (Characteristic c : all_characteristics()) {
        if (!t.get(c)) continue;
        if (!first) os << ", ";
        os << characteristic_name(c);
        first = false;
    }
    os << '}';
    return os;
}

}  // namespace avatar
