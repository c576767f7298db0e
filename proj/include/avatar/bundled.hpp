#pragma once

#include <vector>

#include "avatar/dataset.hpp"

namespace avatar {

// Six generated desk-scale datasets spanning the characteristic space:
//   clean_numeric       all-numeric classification, >= 10,000 cells
//   numeric_missing     numeric attributes with gaps, nominal class
//   nominal_mix         nominal + binary attributes
//   mixed_missing_class mixed attributes, missing cells and missing labels
//   regress_numeric     all-numeric regression target
//   pathological_unary  unary column, empty nominal column, unary class
// Content is fixed (internal seed); flag-bearing patterns recur on row
// strides 2 and 4 and inside every class group so sampling keeps them alive.
const std::vector<Dataset>& bundled_datasets();

const Dataset& bundled_dataset(const std::string& name);

}  // namespace avatar
