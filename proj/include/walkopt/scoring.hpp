#pragma once

#include <optional>
#include <string>
#include <vector>

#include "walkopt/instance.hpp"

namespace walkopt {

struct ScoringOptions {
  // Replaces the normalized weights with caller-supplied values (outer index
  // = type position after sorting by id, inner = option). Used to evaluate
  // with externally rounded weights.
  std::optional<std::vector<std::vector<double>>> weight_override;
};

// Every intermediate of one objective evaluation.
struct ScoreBreakdown {
  double objective = 0.0;                  // mean score over residents
  std::vector<double> weighted_distance;   // per resident, meters
  std::vector<double> score;               // per resident, points

  struct OptionDistances {
    int type_id = 0;
    int option = 0;                 // 0-based choice rank
    std::vector<double> meters;     // per resident; cutoff distance if unavailable
  };
  std::vector<OptionDistances> assigned;
};

// Mutable evaluation state for a growing allocation: per resident, the
// current minimum distance per nearest-only type and the sorted top-r
// distance list per depth type (padded with the cutoff distance).
struct EvalState {
  std::vector<double> option_dist;  // see Evaluator layout
  std::vector<double> contribution; // per resident x type, meters
  std::vector<double> weighted;     // l per resident
  std::vector<double> score;        // f per resident
  double objective = 0.0;           // F
  Allocation alloc;
  std::vector<int> budget_used;     // per type
  std::vector<int> capacity_used;   // per candidate
};

// Evaluates weighted walking distances, scores, and marginal gains against a
// fixed instance. Pure and safe to share across threads; EvalState commits
// are single-writer.
class Evaluator {
 public:
  explicit Evaluator(const Instance& instance, ScoringOptions options = {});

  const Instance& instance() const { return *inst_; }
  const std::vector<std::vector<double>>& weights() const { return weights_; }

  // Builds state from scratch; throws FeasibilityError on a bad allocation.
  EvalState make_state(const Allocation& alloc) const;

  // Objective delta of adding one instance of the type at the candidate,
  // without mutating the state. The pair must keep the allocation feasible.
  double gain(const EvalState& state, int type_index, int candidate_index) const;

  // Applies the placement to the state and refreshes all derived values.
  void commit(EvalState& state, int type_index, int candidate_index) const;

  ScoreBreakdown breakdown(const EvalState& state) const;

  double clamped_distance(std::size_t resident, std::size_t column) const;

 private:
  void rebuild_resident(EvalState& state, std::size_t i, std::size_t type_index) const;

  const Instance* inst_;
  std::vector<std::vector<double>> weights_;
  std::vector<std::size_t> option_base_;  // per type: offset into option_dist for resident 0
  std::size_t options_per_resident_ = 0;
};

// Spec-level convenience wrappers. Each builds a throwaway Evaluator, so
// hot paths should use the class directly.
double weighted_distance(const Instance& instance, const Allocation& alloc,
                         std::size_t resident_index, const ScoringOptions& options = {});
std::pair<double, ScoreBreakdown> objective(const Instance& instance, const Allocation& alloc,
                                            const ScoringOptions& options = {});
// F(S + e) - F(S) for e = (type id, candidate node); throws FeasibilityError
// if adding e breaks a budget or capacity.
double marginal_gain(const Instance& instance, const EvalState& state, int type_id,
                     NodeId candidate_node, const ScoringOptions& options = {});

std::string breakdown_to_json_text(const ScoreBreakdown& breakdown, const Instance& instance);

}  // namespace walkopt
