// walkopt command-line tool: ingest geographic data, score and solve
// instances, export MILP/CP model files, import solver solutions, and run
// k-sweeps.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "walkopt/errors.hpp"
#include "walkopt/exact.hpp"
#include "walkopt/experiments.hpp"
#include "walkopt/geo.hpp"
#include "walkopt/instance_io.hpp"
#include "walkopt/model_export.hpp"
#include "walkopt/presets.hpp"
#include "walkopt/selfcheck.hpp"
#include "walkopt/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInfeasible = 3;

int log_level() {
  const char* env = std::getenv("WALKOPT_LOG");
  if (!env) return 1;
  std::string v = env;
  if (v == "debug") return 2;
  if (v == "warn" || v == "error") return 0;
  return 1;
}

void info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "walkopt: " << msg << "\n";
}

std::vector<walkopt::AmenityTypeSpec> load_specs_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw walkopt::ParseError("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw walkopt::ParseError(path.string() + " is not valid JSON: " + e.what());
  }
  if (!j.is_array()) throw walkopt::SchemaError(path.string() + ": expected an array of specs");
  std::vector<walkopt::AmenityTypeSpec> specs;
  for (const auto& s : j) {
    walkopt::AmenityTypeSpec spec;
    spec.id = s.at("id").get<int>();
    spec.name = s.at("name").get<std::string>();
    spec.raw_weights = s.at("raw_weights").get<std::vector<double>>();
    spec.budget = s.at("budget").get<int>();
    specs.push_back(std::move(spec));
  }
  return specs;
}

std::vector<std::vector<double>> load_weights_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw walkopt::ParseError("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw walkopt::ParseError(path.string() + " is not valid JSON: " + e.what());
  }
  return j.get<std::vector<std::vector<double>>>();
}

walkopt::Instance load_and_adjust(const std::string& path, const std::string& scenario, int k) {
  walkopt::Instance inst = walkopt::read_instance(path);
  if (scenario == "single")
    inst = walkopt::apply_scenario(inst, walkopt::Scenario::single_choice);
  if (k >= 0)
    for (auto& spec : inst.types) spec.budget = k;
  return inst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"walkability optimization toolkit"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker thread cap (0 = hardware)");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "build an instance from GeoJSON inputs");
  std::string network_path, points_path, preset = "toronto3", spec_path, out_path, name;
  int ingest_k = 3;
  double d_inf = walkopt::kDefaultCutoffM;
  ingest->add_option("--network", network_path, "pedestrian network GeoJSON")->required();
  ingest->add_option("--points", points_path, "points GeoJSON with role properties")->required();
  ingest->add_option("--preset", preset, "amenity preset (toronto3)");
  ingest->add_option("--spec", spec_path, "custom amenity spec JSON (overrides preset)");
  ingest->add_option("--k", ingest_k, "budget per type for the preset");
  ingest->add_option("--d-infinity", d_inf, "cutoff distance in meters");
  ingest->add_option("--name", name, "instance name");
  ingest->add_option("--out", out_path, "output instance file")->required();

  // score
  auto* score = app.add_subcommand("score", "evaluate an instance, optionally with an allocation");
  std::string score_instance, score_alloc, score_weights, score_breakdown;
  score->add_option("--instance", score_instance)->required();
  score->add_option("--allocation", score_alloc, "allocation JSON");
  score->add_option("--weights", score_weights, "override weights JSON (rounded-weight mode)");
  score->add_option("--breakdown", score_breakdown, "write the full breakdown JSON here");

  // solve
  auto* solve = app.add_subcommand("solve", "run the greedy or exhaustive solver");
  std::string solve_instance, method = "greedy", solve_scenario = "multi", solve_out, iters_csv;
  int solve_k = -1;
  double exact_limit = 1e7;
  solve->add_option("--instance", solve_instance)->required();
  solve->add_option("--method", method)->check(CLI::IsMember({"greedy", "exact"}));
  solve->add_option("--scenario", solve_scenario)->check(CLI::IsMember({"single", "multi"}));
  solve->add_option("--k", solve_k, "override every budget");
  solve->add_option("--limit", exact_limit, "enumeration limit for --method exact");
  solve->add_option("--out", solve_out, "report JSON path");
  solve->add_option("--iters-csv", iters_csv, "iteration log CSV path");

  // export
  auto* exp = app.add_subcommand("export", "write a MILP (lp) or CP (mzn) model file");
  std::string exp_instance, exp_format = "lp", exp_out;
  exp->add_option("--instance", exp_instance)->required();
  exp->add_option("--format", exp_format)->check(CLI::IsMember({"lp", "mzn"}));
  exp->add_option("--out", exp_out)->required();

  // import-solution
  auto* imp = app.add_subcommand("import-solution", "re-evaluate an external solver solution");
  std::string imp_instance, imp_model, imp_sol;
  imp->add_option("--instance", imp_instance)->required();
  imp->add_option("--model", imp_model, "the exported LP file")->required();
  imp->add_option("--sol", imp_sol, "solution file with 'name value' lines")->required();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "objective and distances for k = 0..k-max");
  std::string sweep_instance, sweep_scenario = "multi", sweep_method = "greedy", out_dir;
  int k_max = 3;
  sweep->add_option("--instance", sweep_instance)->required();
  sweep->add_option("--k-max", k_max)->required();
  sweep->add_option("--scenario", sweep_scenario)->check(CLI::IsMember({"single", "multi"}));
  sweep->add_option("--method", sweep_method)->check(CLI::IsMember({"greedy", "exact", "auto"}));
  sweep->add_option("--out-dir", out_dir)->required();

  // selftest
  auto* selftest = app.add_subcommand("selftest", "run the bundled golden checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*ingest) {
      walkopt::geo::LoadStats stats;
      auto [graph, layer] = walkopt::geo::load_geojson(network_path, points_path, &stats);
      info("network: " + std::to_string(graph.num_nodes()) + " nodes, " +
           std::to_string(stats.edges) + " edges" +
           (stats.dropped_zero_length
                ? " (" + std::to_string(stats.dropped_zero_length) + " zero-length dropped)"
                : ""));
      auto specs = spec_path.empty() ? walkopt::toronto3_specs(ingest_k)
                                     : load_specs_file(spec_path);
      if (spec_path.empty() && preset != "toronto3")
        throw walkopt::SchemaError("unknown preset '" + preset + "'");
      walkopt::geo::BuildOptions opts;
      opts.name = name.empty() ? std::filesystem::path(points_path).stem().string() : name;
      opts.threads = threads;
      auto result = walkopt::geo::build_instance(graph, layer, std::move(specs),
                                                 walkopt::walkscore_curve(), d_inf, opts);
      if (result.snap.far_count > 0)
        info("warning: " + std::to_string(result.snap.far_count) +
             " points snapped farther than the warn threshold");
      walkopt::write_instance(result.instance, out_path);
      info("wrote " + out_path + " (|N|=" + std::to_string(result.instance.num_residents()) +
           ", |M|=" + std::to_string(result.instance.num_candidates()) + ")");
      return kExitOk;
    }

    if (*score) {
      walkopt::Instance inst = walkopt::read_instance(score_instance);
      walkopt::Allocation alloc;
      if (!score_alloc.empty()) alloc = walkopt::read_allocation(score_alloc, inst);
      walkopt::ScoringOptions opts;
      if (!score_weights.empty()) opts.weight_override = load_weights_file(score_weights);
      auto [objective_value, breakdown] = walkopt::objective(inst, alloc, opts);
      std::printf("F = %.2f\n", objective_value);
      if (!score_breakdown.empty()) {
        std::ofstream out(score_breakdown);
        out << walkopt::breakdown_to_json_text(breakdown, inst);
        info("wrote " + score_breakdown);
      }
      return kExitOk;
    }

    if (*solve) {
      walkopt::Instance inst = load_and_adjust(solve_instance, solve_scenario, solve_k);
      walkopt::SolveReport report;
      if (method == "greedy") {
        walkopt::GreedyOptions gopts;
        gopts.threads = threads;
        report = walkopt::greedy_solve(inst, gopts);
      } else {
        walkopt::ExactOptions eopts;
        eopts.enumeration_limit = exact_limit;
        eopts.threads = threads;
        report = walkopt::exact_solve(inst, eopts);
      }
      std::printf("method = %s\nF = %.4f\nplacements = %d\nwall_time_sec = %.3f\n",
                  report.method.c_str(), report.objective, report.allocation.total(),
                  report.wall_time_sec);
      if (!solve_out.empty()) {
        walkopt::write_report(report, inst, solve_out);
        info("wrote " + solve_out);
      }
      if (!iters_csv.empty()) {
        std::ofstream out(iters_csv);
        walkopt::write_iterations_csv(report, out);
        info("wrote " + iters_csv);
      }
      return kExitOk;
    }

    if (*exp) {
      walkopt::Instance inst = walkopt::read_instance(exp_instance);
      if (exp_format == "lp") {
        auto summary = walkopt::export_milp(inst, exp_out);
        std::printf("wrote %s: %ld binaries, %ld integers, %ld continuous, %ld constraints\n",
                    exp_out.c_str(), summary.binary_vars, summary.integer_vars,
                    summary.continuous_vars, summary.constraints);
      } else {
        auto summary = walkopt::export_cp(inst, exp_out);
        std::printf("wrote %s: %ld index vars, %ld segment booleans, %ld constraints\n",
                    exp_out.c_str(), summary.index_vars, summary.segment_vars,
                    summary.constraints);
      }
      return kExitOk;
    }

    if (*imp) {
      walkopt::Instance inst = walkopt::read_instance(imp_instance);
      auto result = walkopt::import_solution(inst, imp_model, imp_sol);
      std::printf("placements = %d\nre-evaluated F = %.6f\n", result.allocation.total(),
                  result.reevaluated_objective);
      if (result.reported_objective)
        std::printf("reported F = %.6f\ndelta = %.6g\n", *result.reported_objective,
                    result.discrepancy);
      else
        std::printf("reported F = (none)\n");
      return kExitOk;
    }

    if (*sweep) {
      walkopt::Instance inst = walkopt::read_instance(sweep_instance);
      walkopt::SweepOptions opts;
      opts.threads = threads;
      opts.method = sweep_method == "greedy"  ? walkopt::SweepMethod::greedy
                    : sweep_method == "exact" ? walkopt::SweepMethod::exact
                                              : walkopt::SweepMethod::auto_select;
      auto scenario = sweep_scenario == "single" ? walkopt::Scenario::single_choice
                                                 : walkopt::Scenario::multi_choice;
      auto result = walkopt::sweep_k(inst, k_max, scenario, opts);
      auto hist = walkopt::walk_time_histogram(
          std::span(result.breakdowns.end() - 1, result.breakdowns.end()), 1.0);
      std::filesystem::create_directories(out_dir);
      auto dir = std::filesystem::path(out_dir);
      walkopt::write_sweep_csv(result, dir / "sweep.csv");
      walkopt::write_hist_csv(hist, dir / "hist.csv");
      walkopt::write_sweep_summary_json(result, hist, dir / "summary.json");
      std::printf("wrote %s/{sweep.csv,hist.csv,summary.json}\n", out_dir.c_str());
      for (const auto& row : result.rows) std::printf("k=%d F=%.4f\n", row.k, row.objective);
      return kExitOk;
    }

    if (*selftest) {
      auto result = walkopt::run_depth_choice_selfcheck();
      for (const auto& line : result.lines)
        std::printf("%-38s %10.4f  expected %8.2f  %s\n", line.label.c_str(), line.actual,
                    line.expected, line.pass ? "ok" : "FAIL");
      std::printf("delta(e|S)=%.2f delta(e|T)=%.2f diminishing returns violated: %s\n",
                  result.gain_after_four, result.gain_after_six,
                  result.diminishing_returns_violated ? "yes" : "no");
      std::printf("%s\n", result.pass ? "PASS" : "FAIL");
      return result.pass ? kExitOk : kExitData;
    }
  } catch (const walkopt::FeasibilityError& e) {
    std::cerr << "walkopt: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const walkopt::SizeLimitError& e) {
    std::cerr << "walkopt: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const walkopt::Error& e) {
    std::cerr << "walkopt: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "walkopt: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
