#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <set>
#include <string>

#include "avatar/characteristics.hpp"
#include "avatar/dataset.hpp"

namespace test_helpers {

inline std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / "avatar_unit_tests";
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string write_file(const std::string& name, const std::string& content) {
    auto path = temp_dir() / name;
    std::ofstream out(path);
    out << content;
    return path.string();
}

inline avatar::CharacteristicToken token_of(std::initializer_list<avatar::Characteristic> on) {
    avatar::CharacteristicToken t;
    for (avatar::Characteristic c : on) t.set(c, 1);
    return t;
}

// Direct column scan: number of distinct present values, the oracle behind
// the binary/unary flags.
inline std::size_t distinct_present(const avatar::Dataset& d, std::size_t col) {
    std::set<avatar::Value> seen;
    for (const avatar::Row& row : d.rows()) {
        if (row[col].has_value()) seen.insert(*row[col]);
    }
    return seen.size();
}

}  // namespace test_helpers
