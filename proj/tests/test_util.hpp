#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "walkopt/instance.hpp"
#include "walkopt/presets.hpp"

namespace testutil {

struct GenConfig {
  int max_residents = 8;
  int max_candidates = 6;
  int max_types = 3;
  bool allow_depth = false;
  int max_depth_options = 4;
  int max_budget = 2;
  int max_capacity = 2;
  int max_existing = 2;
  double max_distance = 3000.0;  // beyond the cutoff on purpose
};

inline walkopt::Instance random_instance(std::mt19937& rng, const GenConfig& cfg) {
  auto uniform_int = [&rng](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  auto uniform_real = [&rng](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  const int n = uniform_int(1, cfg.max_residents);
  const int m = uniform_int(1, cfg.max_candidates);
  const int num_types = uniform_int(1, cfg.max_types);

  walkopt::InstanceBuilder b;
  b.name("random").curve(walkopt::walkscore_curve()).d_infinity(walkopt::kDefaultCutoffM);
  for (int i = 0; i < n; ++i) b.add_resident(1000 + i);
  for (int j = 0; j < m; ++j) b.add_candidate(2000 + j, uniform_int(0, cfg.max_capacity));

  std::vector<walkopt::AmenityTypeSpec> specs;
  for (int t = 0; t < num_types; ++t) {
    walkopt::AmenityTypeSpec spec;
    spec.id = t;
    spec.name = "type" + std::to_string(t);
    const bool depth = cfg.allow_depth && uniform_int(0, 1) == 1;
    if (depth) {
      int r = uniform_int(2, cfg.max_depth_options);
      double w = uniform_real(0.5, 3.0);
      for (int p = 0; p < r; ++p) {
        spec.raw_weights.push_back(w);
        w *= uniform_real(0.5, 1.0);
      }
    } else {
      spec.raw_weights.push_back(uniform_real(0.5, 3.0));
    }
    spec.budget = uniform_int(0, cfg.max_budget);
    specs.push_back(spec);
    b.add_type(spec);
  }

  for (int t = 0; t < num_types; ++t) {
    const int ne = uniform_int(0, cfg.max_existing);
    for (int e = 0; e < ne; ++e) b.add_existing(t, 3000 + 100 * t + e);
  }

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j)
      b.candidate_distance(1000 + i, 2000 + j, uniform_real(0.0, cfg.max_distance));
    for (int t = 0; t < num_types; ++t)
      for (int e = 0; e < cfg.max_existing; ++e)
        b.existing_distance(1000 + i, t, 3000 + 100 * t + e, uniform_real(0.0, cfg.max_distance));
  }
  return b.build();
}

// All (type index, candidate index) pairs that can still take one more
// placement on top of `alloc`.
inline std::vector<std::pair<int, int>> feasible_additions(const walkopt::Instance& inst,
                                                           const walkopt::Allocation& alloc) {
  std::vector<std::pair<int, int>> out;
  for (std::size_t t = 0; t < inst.types.size(); ++t) {
    if (alloc.total_for_type(inst.types[t].id) >= inst.types[t].budget) continue;
    for (std::size_t j = 0; j < inst.candidates.size(); ++j)
      if (alloc.total_at(static_cast<int>(j)) < inst.candidates[j].capacity)
        out.push_back({static_cast<int>(t), static_cast<int>(j)});
  }
  return out;
}

inline walkopt::Allocation random_feasible_allocation(std::mt19937& rng,
                                                      const walkopt::Instance& inst,
                                                      int max_total) {
  walkopt::Allocation alloc;
  const int target = std::uniform_int_distribution<int>(0, max_total)(rng);
  for (int c = 0; c < target; ++c) {
    auto options = feasible_additions(inst, alloc);
    if (options.empty()) break;
    auto [t, j] = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
    alloc.add(inst.types[t].id, j);
  }
  return alloc;
}

// Nested pair S subset of T plus one further feasible addition e.
struct NestedSets {
  walkopt::Allocation small;  // S
  walkopt::Allocation big;    // T
  int type_index = 0;         // e
  int candidate_index = 0;
  bool ok = false;
};

inline NestedSets random_nested_sets(std::mt19937& rng, const walkopt::Instance& inst,
                                     int max_total) {
  NestedSets out;
  walkopt::Allocation with_e = random_feasible_allocation(rng, inst, max_total);
  if (with_e.empty()) return out;
  // Remove one random copy: that placement is e, the rest is T.
  std::vector<walkopt::Allocation::Key> expanded;
  for (const auto& [key, count] : with_e.placements())
    for (int c = 0; c < count; ++c) expanded.push_back(key);
  auto pick = expanded[std::uniform_int_distribution<std::size_t>(0, expanded.size() - 1)(rng)];
  with_e.add(pick.first, pick.second, -1);
  out.big = with_e;
  out.type_index = inst.type_index_of(pick.first);
  out.candidate_index = pick.second;
  // S: keep each copy of T with probability 1/2.
  for (const auto& [key, count] : out.big.placements())
    for (int c = 0; c < count; ++c)
      if (std::uniform_int_distribution<int>(0, 1)(rng) == 1) out.small.add(key.first, key.second);
  out.ok = true;
  return out;
}

inline std::filesystem::path make_temp_dir(const std::string& tag) {
  static std::mt19937_64 rng(std::random_device{}());
  auto dir = std::filesystem::temp_directory_path() /
             ("walkopt_" + tag + "_" + std::to_string(rng()));
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testutil
