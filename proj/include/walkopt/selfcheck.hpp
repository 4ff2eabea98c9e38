#pragma once

#include <string>
#include <vector>

#include "walkopt/instance.hpp"

namespace walkopt {

// Bundled reference scenario for depth-of-choice scoring: one resident,
// six existing restaurants plus one grocery and one school all at 2000 m,
// six candidate sites at 1800 m and one at 1 m. Under the rounded weights,
// the marginal gain of the 1 m site is larger after six placements than
// after four, so the objective has no diminishing-returns guarantee with
// depth of choice.
Instance depth_choice_reference_instance();

struct SelfCheckLine {
  std::string label;
  double actual = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct SelfCheckResult {
  std::vector<SelfCheckLine> lines;
  double gain_after_four = 0.0;  // marginal gain of the 1 m site after 4 placements
  double gain_after_six = 0.0;   // and after 6 placements
  bool diminishing_returns_violated = false;
  bool pass = false;
};

// Evaluates the reference scenario with the rounded weights and compares
// every intermediate against its frozen expected value at 0.01 absolute.
SelfCheckResult run_depth_choice_selfcheck();

}  // namespace walkopt
