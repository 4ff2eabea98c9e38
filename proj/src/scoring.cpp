#include "walkopt/scoring.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "walkopt/errors.hpp"

namespace walkopt {

Evaluator::Evaluator(const Instance& instance, ScoringOptions options) : inst_(&instance) {
  if (options.weight_override) {
    weights_ = std::move(*options.weight_override);
    if (weights_.size() != instance.types.size())
      throw ValidationError("weight override must cover every amenity type");
    for (std::size_t t = 0; t < weights_.size(); ++t)
      if (weights_[t].size() != instance.types[t].raw_weights.size())
        throw ValidationError("weight override for type " + std::to_string(instance.types[t].id) +
                              " has the wrong option count");
  } else {
    weights_ = normalize_weights(instance.types);
  }
  option_base_.resize(instance.types.size());
  std::size_t base = 0;
  for (std::size_t t = 0; t < instance.types.size(); ++t) {
    option_base_[t] = base;
    base += instance.types[t].options();
  }
  options_per_resident_ = base;
}

double Evaluator::clamped_distance(std::size_t resident, std::size_t column) const {
  return std::min(inst_->dist(resident, column), inst_->d_infinity);
}

// Recomputes the type contribution, l, f for one resident from option_dist.
// The summation order matches make_state exactly, so incremental states stay
// bitwise equal to from-scratch ones.
void Evaluator::rebuild_resident(EvalState& state, std::size_t i, std::size_t type_index) const {
  const std::size_t num_types = inst_->types.size();
  const double* od = state.option_dist.data() + i * options_per_resident_;
  {
    const auto& w = weights_[type_index];
    const double* d = od + option_base_[type_index];
    double sum = 0.0;
    for (std::size_t p = 0; p < w.size(); ++p) sum += w[p] * d[p];
    state.contribution[i * num_types + type_index] = sum;
  }
  double l = 0.0;
  for (std::size_t t = 0; t < num_types; ++t) l += state.contribution[i * num_types + t];
  state.weighted[i] = l;
  state.score[i] = inst_->curve.value(l);
}

EvalState Evaluator::make_state(const Allocation& alloc) const {
  check_feasible(*inst_, alloc);
  const Instance& inst = *inst_;
  const std::size_t n = inst.num_residents();
  const std::size_t num_types = inst.types.size();

  EvalState state;
  state.alloc = alloc;
  state.option_dist.assign(n * options_per_resident_, inst.d_infinity);
  state.contribution.assign(n * num_types, 0.0);
  state.weighted.assign(n, 0.0);
  state.score.assign(n, 0.0);
  state.budget_used.assign(num_types, 0);
  state.capacity_used.assign(inst.num_candidates(), 0);

  for (const auto& [key, count] : alloc.placements()) {
    state.budget_used[inst.type_index_of(key.first)] += count;
    state.capacity_used[key.second] += count;
  }

  std::vector<double> pool;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < num_types; ++t) {
      const int r = inst.types[t].options();
      pool.clear();
      const std::size_t col0 = inst.existing_col_begin(t);
      for (std::size_t e = 0; e < inst.existing[t].size(); ++e)
        pool.push_back(clamped_distance(i, col0 + e));
      for (const auto& [key, count] : alloc.placements()) {
        if (key.first != inst.types[t].id) continue;
        const double d = clamped_distance(i, static_cast<std::size_t>(key.second));
        for (int c = 0; c < count; ++c) pool.push_back(d);
      }
      std::sort(pool.begin(), pool.end());
      double* slot = state.option_dist.data() + i * options_per_resident_ + option_base_[t];
      for (int p = 0; p < r; ++p)
        slot[p] = p < static_cast<int>(pool.size()) ? pool[p] : inst.d_infinity;
      rebuild_resident(state, i, t);
    }
  }

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += state.score[i];
  state.objective = total / static_cast<double>(n);
  return state;
}

double Evaluator::gain(const EvalState& state, int type_index, int candidate_index) const {
  const Instance& inst = *inst_;
  const std::size_t n = inst.num_residents();
  const auto& w = weights_[type_index];
  const int r = static_cast<int>(w.size());
  const std::size_t num_types = inst.types.size();

  double delta_sum = 0.0;
  double buf[64];
  std::vector<double> heap_buf;
  double* scratch = buf;
  if (r > 64) {
    heap_buf.resize(r);
    scratch = heap_buf.data();
  }

  for (std::size_t i = 0; i < n; ++i) {
    const double d = clamped_distance(i, static_cast<std::size_t>(candidate_index));
    const double* od =
        state.option_dist.data() + i * options_per_resident_ + option_base_[type_index];
    if (d >= od[r - 1]) continue;  // cannot improve any kept option
    // Simulate inserting d into the sorted option list and dropping the last.
    int pos = r - 1;
    while (pos > 0 && od[pos - 1] > d) --pos;
    for (int p = 0; p < pos; ++p) scratch[p] = od[p];
    scratch[pos] = d;
    for (int p = pos + 1; p < r; ++p) scratch[p] = od[p - 1];
    double contrib = 0.0;
    for (int p = 0; p < r; ++p) contrib += w[p] * scratch[p];
    const double new_l =
        state.weighted[i] - state.contribution[i * num_types + type_index] + contrib;
    delta_sum += inst.curve.value(new_l) - state.score[i];
  }
  return delta_sum / static_cast<double>(n);
}

void Evaluator::commit(EvalState& state, int type_index, int candidate_index) const {
  const Instance& inst = *inst_;
  const std::size_t n = inst.num_residents();
  const int r = inst.types[type_index].options();

  for (std::size_t i = 0; i < n; ++i) {
    const double d = clamped_distance(i, static_cast<std::size_t>(candidate_index));
    double* od = state.option_dist.data() + i * options_per_resident_ + option_base_[type_index];
    if (d >= od[r - 1]) continue;
    int pos = r - 1;
    while (pos > 0 && od[pos - 1] > d) --pos;
    for (int p = r - 1; p > pos; --p) od[p] = od[p - 1];
    od[pos] = d;
    rebuild_resident(state, i, static_cast<std::size_t>(type_index));
  }

  state.alloc.add(inst.types[type_index].id, candidate_index);
  state.budget_used[type_index] += 1;
  state.capacity_used[candidate_index] += 1;

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += state.score[i];
  state.objective = total / static_cast<double>(n);
}

ScoreBreakdown Evaluator::breakdown(const EvalState& state) const {
  const Instance& inst = *inst_;
  ScoreBreakdown out;
  out.objective = state.objective;
  out.weighted_distance = state.weighted;
  out.score = state.score;
  for (std::size_t t = 0; t < inst.types.size(); ++t) {
    const int r = inst.types[t].options();
    for (int p = 0; p < r; ++p) {
      ScoreBreakdown::OptionDistances od;
      od.type_id = inst.types[t].id;
      od.option = p;
      od.meters.resize(inst.num_residents());
      for (std::size_t i = 0; i < inst.num_residents(); ++i)
        od.meters[i] = state.option_dist[i * options_per_resident_ + option_base_[t] + p];
      out.assigned.push_back(std::move(od));
    }
  }
  return out;
}

double weighted_distance(const Instance& instance, const Allocation& alloc,
                         std::size_t resident_index, const ScoringOptions& options) {
  Evaluator ev(instance, options);
  return ev.make_state(alloc).weighted.at(resident_index);
}

std::pair<double, ScoreBreakdown> objective(const Instance& instance, const Allocation& alloc,
                                            const ScoringOptions& options) {
  Evaluator ev(instance, options);
  EvalState state = ev.make_state(alloc);
  return {state.objective, ev.breakdown(state)};
}

double marginal_gain(const Instance& instance, const EvalState& state, int type_id,
                     NodeId candidate_node, const ScoringOptions& options) {
  Evaluator ev(instance, options);
  int t = instance.type_index_of(type_id);
  if (t < 0) throw FeasibilityError("unknown amenity type id " + std::to_string(type_id));
  int j = instance.candidate_index_of(candidate_node);
  if (j < 0) throw FeasibilityError("node " + std::to_string(candidate_node) + " is not a candidate");
  if (state.budget_used[t] + 1 > instance.types[t].budget)
    throw FeasibilityError("adding to type " + std::to_string(type_id) + " exceeds its budget");
  if (state.capacity_used[j] + 1 > instance.candidates[j].capacity)
    throw FeasibilityError("adding at node " + std::to_string(candidate_node) +
                           " exceeds its capacity");
  return ev.gain(state, t, j);
}

std::string breakdown_to_json_text(const ScoreBreakdown& b, const Instance& inst) {
  nlohmann::json j;
  j["objective"] = b.objective;
  nlohmann::json residents = nlohmann::json::array();
  for (std::size_t i = 0; i < b.weighted_distance.size(); ++i)
    residents.push_back({{"id", inst.residents[i]},
                         {"weighted_distance", b.weighted_distance[i]},
                         {"score", b.score[i]}});
  j["residents"] = std::move(residents);
  nlohmann::json assigned = nlohmann::json::array();
  for (const auto& od : b.assigned)
    assigned.push_back({{"type", od.type_id}, {"option", od.option}, {"meters", od.meters}});
  j["assigned"] = std::move(assigned);
  return j.dump(2) + "\n";
}

}  // namespace walkopt
