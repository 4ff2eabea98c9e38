#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "walkopt/scoring.hpp"

namespace walkopt {

struct IterationRecord {
  int step = 0;          // 1-based
  int type_id = 0;
  NodeId node = 0;       // candidate node id
  double gain = 0.0;
  double cumulative = 0.0;
};

struct SolveReport {
  Allocation allocation;
  double objective = 0.0;
  std::vector<IterationRecord> iterations;
  double wall_time_sec = 0.0;
  std::string method;
};

struct GreedyOptions {
  int threads = 0;  // 0 = hardware concurrency
  // Lazy priority-queue re-evaluation; defaults to on exactly when no type
  // uses depth of choice (stale bounds are only valid there).
  std::optional<bool> lazy;
  ScoringOptions scoring;
};

// Iteratively places the (type, candidate) pair with the largest objective
// gain until every budget or every capacity is exhausted; zero-gain steps
// still place and are logged. Ties break on smallest type id, then smallest
// candidate index, so identical instances give identical reports.
SolveReport greedy_solve(const Instance& instance, const GreedyOptions& options = {});

std::string report_to_json_text(const SolveReport& report, const Instance& instance);
void write_report(const SolveReport& report, const Instance& instance,
                  const std::filesystem::path& path);
void write_iterations_csv(const SolveReport& report, std::ostream& out);

}  // namespace walkopt
