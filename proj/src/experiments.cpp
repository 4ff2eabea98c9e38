#include "walkopt/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"
#include "walkopt/errors.hpp"
#include "walkopt/exact.hpp"

namespace walkopt {

MreResult mre(const std::map<std::string, std::optional<double>>& best_per_method) {
  MreResult out;
  bool any = false;
  double ref = 0.0;
  for (const auto& [method, objective] : best_per_method) {
    if (!objective) {
      out.no_solution.push_back(method);
      continue;
    }
    if (!any || *objective > ref) {
      ref = *objective;
      out.reference_method = method;
      any = true;
    }
  }
  if (!any) throw ValidationError("mre needs at least one method with a solution");
  if (!(ref > 0.0)) throw ValidationError("mre reference objective must be positive");
  out.reference_value = ref;
  for (const auto& [method, objective] : best_per_method)
    if (objective) out.mre_pct[method] = 100.0 * (ref - *objective) / ref;
  return out;
}

double shifted_geomean(std::span<const double> values, double shift_seconds) {
  if (values.empty()) throw ValidationError("shifted_geomean needs at least one value");
  if (!(shift_seconds > 0.0)) throw ValidationError("shift must be positive");
  double acc = 0.0;
  for (double v : values) {
    if (v < 0.0) throw ValidationError("shifted_geomean values must be non-negative");
    acc += std::log(v + shift_seconds);
  }
  return std::exp(acc / static_cast<double>(values.size())) - shift_seconds;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw ValidationError("percentile of an empty set");
  std::sort(values.begin(), values.end());
  const double rank = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(rank));
  if (lo + 1 >= values.size()) return values.back();
  const double frac = rank - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

std::vector<WalkTimeHistogram> walk_time_histogram(std::span<const ScoreBreakdown> breakdowns,
                                                   double bin_width_min) {
  if (!(bin_width_min > 0.0)) throw ValidationError("bin width must be positive");
  std::map<std::pair<int, int>, std::vector<double>> minutes;
  for (const auto& b : breakdowns)
    for (const auto& od : b.assigned) {
      auto& bucket = minutes[{od.type_id, od.option}];
      for (double m : od.meters) bucket.push_back(m / kWalkMetersPerMinute);
    }
  std::vector<WalkTimeHistogram> out;
  for (auto& [key, vals] : minutes) {
    WalkTimeHistogram h;
    h.type_id = key.first;
    h.option = key.second;
    h.bin_width_min = bin_width_min;
    double sum = 0.0;
    for (double v : vals) {
      const auto bin = static_cast<std::size_t>(std::floor(v / bin_width_min));
      if (bin >= h.counts.size()) h.counts.resize(bin + 1, 0);
      ++h.counts[bin];
      sum += v;
      h.max_min = std::max(h.max_min, v);
    }
    h.mean_min = sum / static_cast<double>(vals.size());
    h.p75_min = percentile(vals, 0.75);
    out.push_back(std::move(h));
  }
  return out;
}

Instance apply_scenario(const Instance& instance, Scenario scenario) {
  if (scenario == Scenario::multi_choice) return instance;
  Instance out = instance;
  for (auto& spec : out.types) spec.raw_weights.resize(1);
  return out;
}

SweepResult sweep_k(const Instance& instance, int k_max, Scenario scenario,
                    const SweepOptions& options) {
  if (k_max < 0) throw ValidationError("k_max must be >= 0");
  Instance base = apply_scenario(instance, scenario);
  const std::string scenario_name =
      scenario == Scenario::single_choice ? "single" : "multi";

  SweepResult out;
  for (const auto& spec : base.types) {
    if (spec.is_depth()) {
      for (int p = 0; p < spec.options(); ++p)
        out.dist_labels.push_back(spec.name + "_" + std::to_string(p + 1));
    } else {
      out.dist_labels.push_back(spec.name);
    }
  }

  for (int k = 0; k <= k_max; ++k) {
    Instance step = base;
    for (auto& spec : step.types) spec.budget = k;

    GreedyOptions greedy_opts;
    greedy_opts.threads = options.threads;
    ExactOptions exact_opts;
    exact_opts.enumeration_limit = options.exact_limit;
    exact_opts.threads = options.threads;

    SolveReport report;
    const bool exact_ok = exact_enumeration_estimate(step) <= options.exact_limit;
    switch (options.method) {
      case SweepMethod::greedy:
        report = greedy_solve(step, greedy_opts);
        break;
      case SweepMethod::exact:
        report = exact_solve(step, exact_opts);
        break;
      case SweepMethod::auto_select:
        report = exact_ok ? exact_solve(step, exact_opts) : greedy_solve(step, greedy_opts);
        break;
    }

    auto [objective_value, breakdown] = objective(step, report.allocation);
    SweepRow row;
    row.k = k;
    row.scenario = scenario_name;
    row.objective = objective_value;
    for (const auto& od : breakdown.assigned) {
      double sum = 0.0;
      for (double m : od.meters) sum += m;
      row.mean_dist_m.push_back(sum / static_cast<double>(od.meters.size()));
    }
    out.rows.push_back(std::move(row));
    out.breakdowns.push_back(std::move(breakdown));
  }
  return out;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

}  // namespace

void write_sweep_csv(const SweepResult& sweep, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "k,scenario,F";
  for (const auto& label : sweep.dist_labels) out << ",mean_dist_m_" << label;
  out << "\n";
  for (const auto& row : sweep.rows) {
    out << row.k << ',' << row.scenario << ',' << row.objective;
    for (double v : row.mean_dist_m) out << ',' << v;
    out << "\n";
  }
}

void write_hist_csv(std::span<const WalkTimeHistogram> hist, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "type,option,bin_start_min,count\n";
  for (const auto& h : hist)
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      if (h.counts[b] == 0) continue;
      out << h.type_id << ',' << h.option << ',' << (static_cast<double>(b) * h.bin_width_min)
          << ',' << h.counts[b] << "\n";
    }
}

void write_mre_csv(std::span<const MreCsvRow> rows, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "method,mre_pct,feasible,optimal\n";
  for (const auto& r : rows)
    out << r.method << ',' << r.mre_pct << ',' << r.feasible << ',' << r.optimal << "\n";
}

void write_sweep_summary_json(const SweepResult& sweep, std::span<const WalkTimeHistogram> hist,
                              const std::filesystem::path& path) {
  nlohmann::json j;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : sweep.rows) {
    nlohmann::json r = {{"k", row.k}, {"scenario", row.scenario}, {"F", row.objective}};
    nlohmann::json dists = nlohmann::json::object();
    for (std::size_t d = 0; d < row.mean_dist_m.size(); ++d)
      dists[sweep.dist_labels[d]] = row.mean_dist_m[d];
    r["mean_dist_m"] = std::move(dists);
    rows.push_back(std::move(r));
  }
  j["sweep"] = std::move(rows);
  nlohmann::json hists = nlohmann::json::array();
  for (const auto& h : hist) {
    nlohmann::json bins = nlohmann::json::array();
    for (std::size_t b = 0; b < h.counts.size(); ++b)
      if (h.counts[b] != 0)
        bins.push_back({{"bin_start_min", static_cast<double>(b) * h.bin_width_min},
                        {"count", h.counts[b]}});
    hists.push_back({{"type", h.type_id},
                     {"option", h.option},
                     {"mean_min", h.mean_min},
                     {"max_min", h.max_min},
                     {"p75_min", h.p75_min},
                     {"bins", std::move(bins)}});
  }
  j["walk_time_histograms"] = std::move(hists);
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

}  // namespace walkopt
