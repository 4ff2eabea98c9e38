#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "walkopt/scoring.hpp"

namespace walkopt {

// Variable naming scheme shared by the LP writer and the solution importer.
// Indices are 0-based: i = resident row, j = distance-matrix column
// (candidates first), a = amenity type id, p = choice rank, b = curve
// breakpoint, s = curve segment.
//   y_{j}_{a}        allocated count (integer, j < |M|)
//   x_{i}_{j}_{a}    nearest-only assignment (binary)
//   xp_{i}_{j}_{a}_{p} depth-of-choice assignment (binary)
//   l_{i}, f_{i}     weighted distance / score (continuous)
//   lam_{i}_{b}      curve interpolation weight (continuous)
//   seg_{i}_{s}      active curve segment (binary)

struct MilpExportSummary {
  long binary_vars = 0;      // x + xp + seg
  long integer_vars = 0;     // y
  long continuous_vars = 0;  // l + f + lam
  long constraints = 0;
  std::map<std::string, long> constraint_families;
};

// Writes the instance as a CPLEX-dialect LP file: budget and capacity rows,
// one-instance-per-choice assignment, choice uniqueness for existing
// locations, allocation-driven choice capacity, allocate-before-assign
// links, the weighted-distance definition with unavailable options folded
// into the right-hand side, and the score curve linearized by convex
// combination with per-segment binaries (the curve is neither convex nor
// concave, so segment binaries are required). Distances are clamped at the
// cutoff so the curve domain is closed.
MilpExportSummary export_milp(const Instance& instance, const std::filesystem::path& path);

struct CpExportSummary {
  long index_vars = 0;     // allocation slots + depth assignments
  long segment_vars = 0;   // score linearization booleans
  long continuous_vars = 0;
  long constraints = 0;
};

// Writes a MiniZinc model with index-domain allocation variables over the
// candidates plus a dummy slot, element-array distance lookups, count-based
// capacities, choice uniqueness, assignment-implies-allocation, and symmetry
// breaking by ordering the slots of each type.
CpExportSummary export_cp(const Instance& instance, const std::filesystem::path& path);

struct ImportedSolution {
  Allocation allocation;
  std::optional<double> reported_objective;  // from a comment line, if any
  double reevaluated_objective = 0.0;
  double discrepancy = 0.0;  // |reported - reevaluated|, 0 when unreported
};

// Reads a `name value` solution file against the exported model, rebuilds
// the allocation from the y variables, and re-scores it independently.
ImportedSolution import_solution(const Instance& instance,
                                 const std::filesystem::path& model_path,
                                 const std::filesystem::path& solution_path);

}  // namespace walkopt
