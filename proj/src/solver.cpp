#include "walkopt/solver.hpp"

#include <chrono>
#include <fstream>
#include <queue>

#include "json.hpp"
#include "walkopt/errors.hpp"
#include "walkopt/parallel.hpp"

namespace walkopt {

namespace {

struct PairRef {
  int type_index;
  int candidate_index;
};

struct HeapEntry {
  double bound;
  int type_index;
  int candidate_index;
  int evaluated_at;  // step counter when the bound was computed
};

// Highest bound first; equal bounds prefer smaller (type, candidate) so the
// lazy path selects the same argmax as a full scan.
struct HeapCmp {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;
    if (a.type_index != b.type_index) return a.type_index > b.type_index;
    return a.candidate_index > b.candidate_index;
  }
};

bool any_budget_left(const Instance& inst, const EvalState& state) {
  for (std::size_t t = 0; t < inst.types.size(); ++t)
    if (state.budget_used[t] < inst.types[t].budget) return true;
  return false;
}

bool any_capacity_left(const Instance& inst, const EvalState& state) {
  for (std::size_t j = 0; j < inst.candidates.size(); ++j)
    if (state.capacity_used[j] < inst.candidates[j].capacity) return true;
  return false;
}

}  // namespace

SolveReport greedy_solve(const Instance& inst, const GreedyOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  require_valid(inst);

  Evaluator ev(inst, options.scoring);
  EvalState state = ev.make_state(Allocation{});

  bool has_depth = false;
  for (const auto& spec : inst.types) has_depth |= spec.is_depth();
  const bool lazy = options.lazy.value_or(!has_depth);

  SolveReport report;
  report.method = "greedy";

  const std::size_t num_types = inst.types.size();
  const std::size_t num_cands = inst.num_candidates();

  std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapCmp> heap;
  int step = 0;
  if (lazy && num_cands > 0) {
    for (std::size_t t = 0; t < num_types; ++t) {
      if (inst.types[t].budget == 0) continue;
      for (std::size_t j = 0; j < num_cands; ++j) {
        if (inst.candidates[j].capacity == 0) continue;
        heap.push({ev.gain(state, static_cast<int>(t), static_cast<int>(j)),
                   static_cast<int>(t), static_cast<int>(j), step});
      }
    }
  }

  std::vector<PairRef> pairs;
  std::vector<double> gains;

  while (any_budget_left(inst, state) && any_capacity_left(inst, state)) {
    int best_t = -1, best_j = -1;

    if (lazy) {
      while (!heap.empty()) {
        HeapEntry top = heap.top();
        heap.pop();
        if (state.budget_used[top.type_index] >= inst.types[top.type_index].budget) continue;
        if (state.capacity_used[top.candidate_index] >=
            inst.candidates[top.candidate_index].capacity)
          continue;
        if (top.evaluated_at == step) {
          best_t = top.type_index;
          best_j = top.candidate_index;
          // Keep an entry for further copies at this pair; the achieved gain
          // stays a valid upper bound for them.
          heap.push({top.bound, top.type_index, top.candidate_index, -1});
          break;
        }
        top.bound = ev.gain(state, top.type_index, top.candidate_index);
        top.evaluated_at = step;
        heap.push(top);
      }
      if (best_t < 0) break;  // no feasible pair left
    } else {
      pairs.clear();
      for (std::size_t t = 0; t < num_types; ++t) {
        if (state.budget_used[t] >= inst.types[t].budget) continue;
        for (std::size_t j = 0; j < num_cands; ++j) {
          if (state.capacity_used[j] >= inst.candidates[j].capacity) continue;
          pairs.push_back({static_cast<int>(t), static_cast<int>(j)});
        }
      }
      if (pairs.empty()) break;
      gains.assign(pairs.size(), 0.0);
      parallel_for(pairs.size(), options.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p)
          gains[p] = ev.gain(state, pairs[p].type_index, pairs[p].candidate_index);
      });
      std::size_t best = 0;
      for (std::size_t p = 1; p < pairs.size(); ++p)
        if (gains[p] > gains[best]) best = p;
      best_t = pairs[best].type_index;
      best_j = pairs[best].candidate_index;
    }

    const double before = state.objective;
    ev.commit(state, best_t, best_j);
    ++step;
    report.iterations.push_back({step, inst.types[best_t].id, inst.candidates[best_j].id,
                                 state.objective - before, state.objective});
  }

  report.allocation = state.alloc;
  report.objective = state.objective;
  report.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

std::string report_to_json_text(const SolveReport& report, const Instance& inst) {
  nlohmann::json j;
  j["method"] = report.method;
  j["objective"] = report.objective;
  j["wall_time_sec"] = report.wall_time_sec;
  nlohmann::json placements = nlohmann::json::array();
  for (const auto& [key, count] : report.allocation.placements())
    placements.push_back({{"type", key.first},
                          {"node", inst.candidates[key.second].id},
                          {"count", count}});
  j["allocation"] = {{"placements", std::move(placements)}};
  nlohmann::json iters = nlohmann::json::array();
  for (const auto& it : report.iterations)
    iters.push_back({{"step", it.step},
                     {"type", it.type_id},
                     {"node", it.node},
                     {"gain", it.gain},
                     {"cumulative", it.cumulative}});
  j["iterations"] = std::move(iters);
  return j.dump(2) + "\n";
}

void write_report(const SolveReport& report, const Instance& inst,
                  const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << report_to_json_text(report, inst);
}

void write_iterations_csv(const SolveReport& report, std::ostream& out) {
  out << "step,type,node,gain,cumulative\n";
  for (const auto& it : report.iterations)
    out << it.step << ',' << it.type_id << ',' << it.node << ',' << it.gain << ','
        << it.cumulative << '\n';
}

}  // namespace walkopt
