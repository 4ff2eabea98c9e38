#pragma once

#include "walkopt/solver.hpp"

namespace walkopt {

struct ExactOptions {
  double enumeration_limit = 1e7;
  int threads = 0;
  ScoringOptions scoring;
};

// Upper-bound estimate of the enumeration size, ignoring capacity pruning:
// the product over types of C(|M| + k_a - 1, k_a).
double exact_enumeration_estimate(const Instance& instance);

// Enumerates every feasible allocation (per-type multisets of size 0..k_a,
// joint capacity check) and returns a maximizer of the objective; ties go to
// the lexicographically smallest allocation. Throws SizeLimitError when the
// estimate exceeds the limit.
SolveReport exact_solve(const Instance& instance, const ExactOptions& options = {});

}  // namespace walkopt
