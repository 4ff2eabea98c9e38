#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "walkopt/scoring.hpp"
#include "walkopt/solver.hpp"

namespace walkopt {

inline constexpr double kWalkMetersPerMinute = 72.0;  // 1.2 m/s

// Relative error of each method's best objective against the best objective
// across methods, in percent. Methods without a solution are listed
// separately and excluded from the percentages.
struct MreResult {
  std::map<std::string, double> mre_pct;
  std::string reference_method;
  double reference_value = 0.0;
  std::vector<std::string> no_solution;
};
MreResult mre(const std::map<std::string, std::optional<double>>& best_per_method);

// exp(mean(log(v + shift))) - shift.
double shifted_geomean(std::span<const double> values, double shift_seconds);

// Linear interpolation between closest ranks; q in [0, 1].
double percentile(std::vector<double> values, double q);

struct WalkTimeHistogram {
  int type_id = 0;
  int option = 0;             // 0-based choice rank
  double bin_width_min = 1.0;
  std::vector<long> counts;   // bin b covers [b*w, (b+1)*w) minutes
  double mean_min = 0.0;
  double max_min = 0.0;
  double p75_min = 0.0;
};

// Converts assigned distances to walking minutes at 1.2 m/s and bins them
// per (type, option) over all given breakdowns.
std::vector<WalkTimeHistogram> walk_time_histogram(std::span<const ScoreBreakdown> breakdowns,
                                                   double bin_width_min);

enum class Scenario { single_choice, multi_choice };

// single_choice keeps only the first raw weight of every depth type, which
// renormalizes the remaining weights globally; multi_choice returns the
// instance unchanged.
Instance apply_scenario(const Instance& instance, Scenario scenario);

enum class SweepMethod { greedy, exact, auto_select };

struct SweepOptions {
  SweepMethod method = SweepMethod::greedy;
  double exact_limit = 1e7;
  int threads = 0;
};

struct SweepRow {
  int k = 0;
  std::string scenario;
  double objective = 0.0;
  std::vector<double> mean_dist_m;  // parallel to SweepResult::dist_labels
};

struct SweepResult {
  std::vector<std::string> dist_labels;  // e.g. "grocery", "restaurants_1"
  std::vector<SweepRow> rows;
  std::vector<ScoreBreakdown> breakdowns;  // one per k, same order as rows
};

// Solves the instance for every k in [0, k_max] with all budgets set to k
// and records the objective and mean assigned distance per (type, option).
SweepResult sweep_k(const Instance& instance, int k_max, Scenario scenario,
                    const SweepOptions& options = {});

void write_sweep_csv(const SweepResult& sweep, const std::filesystem::path& path);
void write_hist_csv(std::span<const WalkTimeHistogram> hist, const std::filesystem::path& path);

struct MreCsvRow {
  std::string method;
  double mre_pct = 0.0;
  int feasible = 0;
  int optimal = 0;
};
void write_mre_csv(std::span<const MreCsvRow> rows, const std::filesystem::path& path);

// JSON mirror of the sweep and histogram outputs.
void write_sweep_summary_json(const SweepResult& sweep, std::span<const WalkTimeHistogram> hist,
                              const std::filesystem::path& path);

}  // namespace walkopt
