#pragma once

#include <cstdint>

#include "avatar/surrogate.hpp"

namespace avatar {

// Draws a template-legal pipeline: a uniform count of distinct preprocessor
// kinds (0..max_len-1), a uniform component and setting per chosen kind in
// template order, and a uniform predictor or meta-predictor at the end.
Pipeline random_pipeline(const std::vector<std::shared_ptr<const Component>>& pool,
                         std::size_t max_len, uint64_t seed);

}  // namespace avatar
