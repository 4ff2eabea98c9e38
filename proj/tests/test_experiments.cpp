#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "test_util.hpp"
#include "walkopt/errors.hpp"
#include "walkopt/experiments.hpp"
#include "walkopt/presets.hpp"
#include "walkopt/selfcheck.hpp"

using namespace walkopt;

TEST_CASE("mre formula and exclusions") {
  std::map<std::string, std::optional<double>> methods;
  methods["greedy"] = 49.5;
  methods["exact"] = 50.0;
  MreResult r = mre(methods);
  CHECK(r.reference_method == "exact");
  CHECK(r.mre_pct["greedy"] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.mre_pct["exact"] == 0.0);

  std::map<std::string, std::optional<double>> single;
  single["greedy"] = 12.0;
  CHECK(mre(single).mre_pct["greedy"] == 0.0);

  std::map<std::string, std::optional<double>> with_failure;
  with_failure["milp"] = std::nullopt;
  with_failure["greedy"] = 10.0;
  MreResult r2 = mre(with_failure);
  CHECK(r2.no_solution == std::vector<std::string>{"milp"});
  CHECK(r2.mre_pct.count("milp") == 0);

  std::map<std::string, std::optional<double>> zero_ref;
  zero_ref["greedy"] = 0.0;
  CHECK_THROWS_AS(mre(zero_ref), ValidationError);
  std::map<std::string, std::optional<double>> nothing;
  nothing["milp"] = std::nullopt;
  CHECK_THROWS_AS(mre(nothing), ValidationError);
}

TEST_CASE("shifted geometric mean") {
  std::vector<double> constant{10.0, 10.0, 10.0};
  CHECK(shifted_geomean(constant, 10.0) == doctest::Approx(10.0).epsilon(1e-12));
  std::vector<double> zeros{0.0, 0.0};
  CHECK(shifted_geomean(zeros, 10.0) == doctest::Approx(0.0));
  std::vector<double> pair{1.0, 100.0};
  // exp((ln 11 + ln 110) / 2) - 10 = sqrt(1210) - 10
  CHECK(shifted_geomean(pair, 10.0) ==
        doctest::Approx(std::sqrt(1210.0) - 10.0).epsilon(1e-12));
  CHECK(std::abs(shifted_geomean(pair, 10.0) - 24.79) < 0.01);
  CHECK_THROWS_AS(shifted_geomean({}, 10.0), ValidationError);
  CHECK_THROWS_AS(shifted_geomean(constant, 0.0), ValidationError);
  // constant sequences are fixed points for any shift
  for (double shift : {0.5, 1.0, 7.0, 100.0}) {
    std::vector<double> c{3.25, 3.25, 3.25, 3.25};
    CHECK(shifted_geomean(c, shift) == doctest::Approx(3.25).epsilon(1e-9));
  }
}

TEST_CASE("percentile uses linear interpolation between closest ranks") {
  std::vector<double> values;
  for (int v = 1; v <= 100; ++v) values.push_back(static_cast<double>(v));
  CHECK(percentile(values, 0.75) == doctest::Approx(75.25).epsilon(1e-12));
  CHECK(percentile(values, 0.0) == 1.0);
  CHECK(percentile(values, 1.0) == 100.0);
  CHECK(percentile({42.0}, 0.75) == 42.0);
}

TEST_CASE("walking time conversion and histogram totals") {
  // 720 m at 1.2 m/s is exactly 10 minutes
  CHECK(720.0 / kWalkMetersPerMinute == 10.0);

  Instance inst = depth_choice_reference_instance();
  auto [f, breakdown] = objective(inst, Allocation{});
  std::vector<ScoreBreakdown> breakdowns{breakdown};
  auto hist = walk_time_histogram(breakdowns, 1.0);
  // one histogram per (type, option): 1 + 10 + 1
  CHECK(hist.size() == 12);
  long total = 0;
  for (const auto& h : hist)
    for (long c : h.counts) total += c;
  CHECK(total == static_cast<long>(inst.num_residents()) * 12);
  // 2400 m pads the unavailable restaurant options: 33.33 minutes -> bin 33
  for (const auto& h : hist) {
    if (h.type_id == 1 && h.option == 9) {
      REQUIRE(h.counts.size() >= 34);
      CHECK(h.counts[33] == 1);
    }
    // existing sites at 2000 m -> 27.78 minutes
    if (h.type_id == 0) {
      CHECK(h.mean_min == doctest::Approx(2000.0 / 72.0));
      CHECK(h.max_min == doctest::Approx(2000.0 / 72.0));
    }
  }
}

TEST_CASE("scenario transform truncates depth weights and renormalizes") {
  Instance inst = depth_choice_reference_instance();
  Instance single = apply_scenario(inst, Scenario::single_choice);
  for (const auto& spec : single.types) CHECK(spec.options() == 1);
  auto w = normalize_weights(single.types);
  double total = 0.0;
  for (const auto& tw : w) total += tw[0];
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  // grocery keeps raw weight 3 of the new grand sum 3 + 0.75 + 1
  CHECK(w[0][0] == doctest::Approx(3.0 / 4.75).epsilon(1e-12));
  Instance multi = apply_scenario(inst, Scenario::multi_choice);
  CHECK(multi.types[1].options() == 10);
}

TEST_CASE("sweep over k is monotone with a baseline row") {
  Instance inst = depth_choice_reference_instance();
  for (auto& cand : inst.candidates) cand.capacity = 3;
  SweepResult sweep = sweep_k(inst, 3, Scenario::single_choice);
  REQUIRE(sweep.rows.size() == 4);
  CHECK(sweep.rows[0].k == 0);
  CHECK(sweep.rows[0].objective ==
        doctest::Approx(objective(apply_scenario(inst, Scenario::single_choice), Allocation{})
                            .first));
  for (std::size_t r = 1; r < sweep.rows.size(); ++r)
    CHECK(sweep.rows[r].objective >= sweep.rows[r - 1].objective - 1e-9);
  CHECK(sweep.dist_labels == std::vector<std::string>{"grocery", "restaurants", "schools"});
}

TEST_CASE("greedy increments shrink with k on nearest-only instances") {
  std::mt19937 rng(515);
  testutil::GenConfig cfg;
  cfg.allow_depth = false;
  cfg.max_types = 2;
  cfg.max_candidates = 5;
  cfg.max_capacity = 6;
  int checked = 0;
  while (checked < 15) {
    Instance inst = testutil::random_instance(rng, cfg);
    SweepResult sweep = sweep_k(inst, 3, Scenario::single_choice);
    for (std::size_t r = 2; r < sweep.rows.size(); ++r) {
      double inc_prev = sweep.rows[r - 1].objective - sweep.rows[r - 2].objective;
      double inc = sweep.rows[r].objective - sweep.rows[r - 1].objective;
      CHECK(inc <= inc_prev + 1e-9);
    }
    ++checked;
  }
}

TEST_CASE("csv and json writers emit the documented columns") {
  Instance inst = depth_choice_reference_instance();
  SweepResult sweep = sweep_k(inst, 1, Scenario::multi_choice);
  auto hist = walk_time_histogram(std::span(sweep.breakdowns), 1.0);
  auto dir = testutil::make_temp_dir("exp_csv");
  write_sweep_csv(sweep, dir / "sweep.csv");
  write_hist_csv(hist, dir / "hist.csv");
  std::vector<MreCsvRow> rows{{"greedy", 0.29, 99, 0}, {"exact", 0.0, 99, 99}};
  write_mre_csv(rows, dir / "mre.csv");
  write_sweep_summary_json(sweep, hist, dir / "summary.json");

  auto read = [](const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  std::string sweep_text = read(dir / "sweep.csv");
  CHECK(sweep_text.find("k,scenario,F") == 0);
  CHECK(sweep_text.find("mean_dist_m_grocery") != std::string::npos);
  CHECK(sweep_text.find("mean_dist_m_restaurants_10") != std::string::npos);
  std::string hist_text = read(dir / "hist.csv");
  CHECK(hist_text.find("type,option,bin_start_min,count") == 0);
  std::string mre_text = read(dir / "mre.csv");
  CHECK(mre_text.find("method,mre_pct,feasible,optimal") == 0);
  CHECK(mre_text.find("greedy,0.29,99,0") != std::string::npos);
  std::string json_text = read(dir / "summary.json");
  CHECK(json_text.find("\"sweep\"") != std::string::npos);
  CHECK(json_text.find("\"walk_time_histograms\"") != std::string::npos);
  std::filesystem::remove_all(dir);
}
