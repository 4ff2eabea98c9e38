#include "walkopt/exact.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "walkopt/errors.hpp"
#include "walkopt/parallel.hpp"

namespace walkopt {

namespace {

double binomial(double n, double k) {
  if (k < 0) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= static_cast<int>(k); ++i) r *= (n - k + i) / i;
  return r;
}

struct Best {
  bool found = false;
  double objective = 0.0;
  Allocation alloc;

  void offer(double f, const Allocation& a) {
    if (!found || f > objective || (f == objective && a.lex_less(alloc))) {
      found = true;
      objective = f;
      alloc = a;
    }
  }
  void merge(const Best& other) {
    if (other.found) offer(other.objective, other.alloc);
  }
};

class Enumerator {
 public:
  Enumerator(const Instance& inst, const Evaluator& ev) : inst_(inst), ev_(ev) {
    cap_left_.reserve(inst.num_candidates());
    for (const auto& c : inst.candidates) cap_left_.push_back(c.capacity);
  }

  // Enumerates multisets for types [t, end) on top of the current partial
  // allocation; every completion is evaluated.
  void run(std::size_t t, Best& best) {
    if (t == inst_.types.size()) {
      best.offer(ev_.make_state(current_).objective, current_);
      return;
    }
    expand_type(t, 0, 0, best);
  }

  // Applies a fixed multiset for type t (used to partition work).
  void apply(int type_index, const std::vector<int>& counts) {
    for (std::size_t j = 0; j < counts.size(); ++j)
      if (counts[j] > 0) {
        current_.add(inst_.types[type_index].id, static_cast<int>(j), counts[j]);
        cap_left_[j] -= counts[j];
      }
  }

 private:
  void expand_type(std::size_t t, std::size_t next_j, int placed, Best& best) {
    run(t + 1, best);  // close this type at the current size
    if (placed >= inst_.types[t].budget) return;
    for (std::size_t j = next_j; j < cap_left_.size(); ++j) {
      if (cap_left_[j] <= 0) continue;
      cap_left_[j] -= 1;
      current_.add(inst_.types[t].id, static_cast<int>(j), 1);
      expand_type(t, j, placed + 1, best);
      current_.add(inst_.types[t].id, static_cast<int>(j), -1);
      cap_left_[j] += 1;
    }
  }

  const Instance& inst_;
  const Evaluator& ev_;
  Allocation current_;
  std::vector<int> cap_left_;
};

// All capacity-feasible multisets of size 0..budget over the candidates, as
// per-candidate counts.
std::vector<std::vector<int>> type_multisets(const Instance& inst, int type_index) {
  std::vector<std::vector<int>> out;
  std::vector<int> counts(inst.num_candidates(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t next_j, int placed) {
    out.push_back(counts);
    if (placed >= inst.types[type_index].budget) return;
    for (std::size_t j = next_j; j < counts.size(); ++j) {
      if (counts[j] >= inst.candidates[j].capacity) continue;
      ++counts[j];
      rec(j, placed + 1);
      --counts[j];
    }
  };
  rec(0, 0);
  return out;
}

}  // namespace

double exact_enumeration_estimate(const Instance& inst) {
  double est = 1.0;
  const double m = static_cast<double>(inst.num_candidates());
  for (const auto& spec : inst.types) est *= binomial(m + spec.budget - 1, spec.budget);
  return est;
}

SolveReport exact_solve(const Instance& inst, const ExactOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  require_valid(inst);

  const double estimate = exact_enumeration_estimate(inst);
  if (estimate > options.enumeration_limit) {
    std::ostringstream msg;
    msg << "instance too large for exhaustive search: estimated " << estimate
        << " allocations exceed the limit of " << options.enumeration_limit;
    throw SizeLimitError(msg.str());
  }

  Evaluator ev(inst, options.scoring);
  Best best;

  if (inst.types.empty() || inst.num_candidates() == 0) {
    best.offer(ev.make_state(Allocation{}).objective, Allocation{});
  } else {
    const auto partitions = type_multisets(inst, 0);
    const int threads = resolve_threads(options.threads);
    std::vector<Best> partial(partitions.size());
    parallel_for(partitions.size(), threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t p = begin; p < end; ++p) {
        Enumerator en(inst, ev);
        en.apply(0, partitions[p]);
        en.run(1, partial[p]);
      }
    });
    for (const auto& b : partial) best.merge(b);
  }

  SolveReport report;
  report.method = "exact";
  report.allocation = best.alloc;
  report.objective = best.objective;
  report.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace walkopt
