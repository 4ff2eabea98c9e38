#include "walkopt/presets.hpp"

namespace walkopt {

PwlCurve walkscore_curve() {
  return PwlCurve{{{0.0, 100.0}, {400.0, 95.0}, {1800.0, 10.0}, {2400.0, 0.0}}};
}

std::vector<AmenityTypeSpec> toronto3_specs(int budget_per_type) {
  return {
      {0, "grocery", {3.0}, budget_per_type},
      {1,
       "restaurants",
       {0.75, 0.45, 0.25, 0.25, 0.225, 0.225, 0.225, 0.225, 0.2, 0.2},
       budget_per_type},
      {2, "schools", {1.0}, budget_per_type},
  };
}

std::vector<std::vector<double>> toronto3_rounded_weights() {
  return {
      {0.43},
      {0.11, 0.06, 0.04, 0.04, 0.03, 0.03, 0.03, 0.03, 0.03, 0.03},
      {0.14},
  };
}

}  // namespace walkopt
