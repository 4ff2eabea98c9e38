#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "walkopt/types.hpp"

namespace walkopt {

// A problem instance. Immutable after construction; canonical ordering is
// residents, then candidates, then existing amenities grouped by type id
// ascending, ties broken by node id ascending. Distance matrix rows follow
// the resident order, columns the candidate-then-existing order. Node ids
// may repeat across the three groups; column identity is positional.
struct Instance {
  std::string name;
  std::string crs = "EPSG:4326";
  std::vector<NodeId> residents;
  std::vector<Candidate> candidates;
  std::vector<AmenityTypeSpec> types;
  std::vector<std::vector<NodeId>> existing;  // parallel to types
  PwlCurve curve;
  double d_infinity = 0.0;
  Matrix dist;  // |residents| x (|candidates| + total existing)
  std::map<NodeId, LonLat> coords;  // optional node coordinates

  std::size_t num_residents() const { return residents.size(); }
  std::size_t num_candidates() const { return candidates.size(); }
  std::size_t num_types() const { return types.size(); }
  std::size_t total_existing() const;
  std::size_t num_columns() const { return candidates.size() + total_existing(); }

  // First distance-matrix column of the existing instances of a type.
  std::size_t existing_col_begin(std::size_t type_index) const;

  int type_index_of(int type_id) const;           // -1 if unknown
  int candidate_index_of(NodeId node) const;      // -1 if unknown
};

// One invariant violation found by validate_instance.
struct Violation {
  std::string code;   // machine-readable, e.g. "negative_capacity"
  std::string where;  // field path, e.g. "candidates[3]"
  std::string message;
};

// Checks every structural invariant; an empty report means the instance is
// valid. Never throws on semantic problems.
std::vector<Violation> validate_instance(const Instance& instance);

// Throws ValidationError listing the violation codes if any are found.
void require_valid(const Instance& instance);

// Divides every raw weight by the grand sum over all types and options, so
// the result sums to 1. Throws ValidationError on empty or non-positive
// weights.
std::vector<std::vector<double>> normalize_weights(const std::vector<AmenityTypeSpec>& specs);

// Number of depth-of-choice options actually reachable given the budget and
// the count of existing instances: min(budget + existing_count, r). Options
// beyond this are charged the cutoff distance.
int available_choices(const AmenityTypeSpec& spec, int existing_count);

// A multiset of (type, candidate) placements with integer counts.
class Allocation {
 public:
  using Key = std::pair<int, int>;  // (type id, candidate index)

  void add(int type_id, int candidate_index, int count = 1);
  int count(int type_id, int candidate_index) const;
  int total_for_type(int type_id) const;
  int total_at(int candidate_index) const;
  int total() const;
  bool empty() const { return placements_.empty(); }
  const std::map<Key, int>& placements() const { return placements_; }

  // Lexicographic order on the expanded multiset of (type, candidate) pairs.
  bool lex_less(const Allocation& other) const;

  bool operator==(const Allocation&) const = default;

 private:
  std::map<Key, int> placements_;
};

// Throws FeasibilityError if the allocation violates budgets, capacities, or
// references an unknown type/candidate.
void check_feasible(const Instance& instance, const Allocation& alloc);

// Assembles an Instance from unordered parts, sorting everything into
// canonical order. Distances are keyed by location, so input order never
// affects the result.
class InstanceBuilder {
 public:
  InstanceBuilder& name(std::string v);
  InstanceBuilder& curve(PwlCurve v);
  InstanceBuilder& d_infinity(double v);
  InstanceBuilder& add_resident(NodeId id, std::optional<LonLat> pos = {});
  InstanceBuilder& add_candidate(NodeId id, int capacity, std::optional<LonLat> pos = {});
  InstanceBuilder& add_type(AmenityTypeSpec spec);
  InstanceBuilder& add_existing(int type_id, NodeId node, std::optional<LonLat> pos = {});
  // Distance from a resident to a candidate node.
  InstanceBuilder& candidate_distance(NodeId resident, NodeId candidate, double meters);
  // Distance from a resident to the existing instances of a type at a node.
  InstanceBuilder& existing_distance(NodeId resident, int type_id, NodeId node, double meters);

  // Validates and returns the canonical instance; throws ValidationError on
  // missing distances or invariant violations.
  Instance build() const;

 private:
  std::string name_;
  PwlCurve curve_;
  double d_infinity_ = 0.0;
  std::vector<NodeId> residents_;
  std::vector<Candidate> candidates_;
  std::vector<AmenityTypeSpec> types_;
  std::map<int, std::vector<NodeId>> existing_;
  std::map<std::pair<NodeId, NodeId>, double> cand_dist_;
  std::map<std::tuple<NodeId, int, NodeId>, double> exist_dist_;
  std::map<NodeId, LonLat> coords_;
};

}  // namespace walkopt
