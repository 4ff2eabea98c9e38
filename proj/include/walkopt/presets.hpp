#pragma once

#include <vector>

#include "walkopt/types.hpp"

namespace walkopt {

inline constexpr double kDefaultCutoffM = 2400.0;

// Standard walk-score curve: near-full score within 400 m, zero beyond
// 2400 m (about a 30-minute walk).
PwlCurve walkscore_curve();

// The `toronto3` preset: grocery (nearest only), restaurants (top-10
// depth of choice), schools (nearest only), with the walk-score raw weights
// and a common budget k per type. Type ids 0, 1, 2.
std::vector<AmenityTypeSpec> toronto3_specs(int budget_per_type);

// The same weights normalized and rounded to two decimals, as used by the
// depth-of-choice self check; sums to exactly 1.00.
std::vector<std::vector<double>> toronto3_rounded_weights();

}  // namespace walkopt
