#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "test_util.hpp"
#include "walkopt/instance_io.hpp"
#include "walkopt/presets.hpp"
#include "walkopt/selfcheck.hpp"

namespace {

const std::string kCli = WALKOPT_CLI_BIN;
const std::filesystem::path kFixtures = WALKOPT_FIXTURE_DIR;

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  CliResult result;
  std::string cmd = kCli + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) result.output += buf.data();
  int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::filesystem::path write_reference_instance(const std::filesystem::path& dir) {
  auto path = dir / "reference.json";
  walkopt::write_instance(walkopt::depth_choice_reference_instance(), path);
  return path;
}

}  // namespace

TEST_CASE("selftest prints the golden gains and passes") {
  CliResult r = run_cli("selftest");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("delta(e|S)=5.77") != std::string::npos);
  CHECK(r.output.find("delta(e|T)=6.30") != std::string::npos);
  CHECK(r.output.find("PASS") != std::string::npos);
}

TEST_CASE("usage errors exit with 1") {
  CHECK(run_cli("").exit_code == 1);
  CHECK(run_cli("solve").exit_code == 1);           // missing --instance
  CHECK(run_cli("frobnicate").exit_code == 1);      // unknown subcommand
  CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("score without amenities prints zero") {
  auto dir = testutil::make_temp_dir("cli_score");
  walkopt::InstanceBuilder b;
  b.curve(walkopt::walkscore_curve()).d_infinity(walkopt::kDefaultCutoffM);
  b.add_resident(1);
  b.add_candidate(2, 1);
  b.add_type({0, "g", {1.0}, 1});
  b.candidate_distance(1, 2, 500.0);
  walkopt::write_instance(b.build(), dir / "empty.json");
  CliResult r = run_cli("score --instance " + (dir / "empty.json").string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("F = 0.00") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("score with rounded weights reproduces the golden objective") {
  auto dir = testutil::make_temp_dir("cli_round");
  auto inst_path = write_reference_instance(dir);
  {
    std::ofstream w(dir / "weights.json");
    w << "[[0.43],[0.11,0.06,0.04,0.04,0.03,0.03,0.03,0.03,0.03,0.03],[0.14]]";
  }
  {
    std::ofstream a(dir / "alloc.json");
    a << R"({"placements":[{"type":1,"node":1},{"type":1,"node":2},
             {"type":1,"node":3},{"type":1,"node":4},{"type":1,"node":7}]})";
  }
  CliResult r = run_cli("score --instance " + inst_path.string() + " --allocation " +
                        (dir / "alloc.json").string() + " --weights " +
                        (dir / "weights.json").string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("F = 13.27") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("solve writes a report and an iteration log") {
  auto dir = testutil::make_temp_dir("cli_solve");
  auto inst_path = write_reference_instance(dir);
  CliResult r = run_cli("solve --instance " + inst_path.string() + " --method greedy --out " +
                        (dir / "report.json").string() + " --iters-csv " +
                        (dir / "iters.csv").string());
  CHECK(r.exit_code == 0);
  CHECK(std::filesystem::exists(dir / "report.json"));
  std::ifstream csv(dir / "iters.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "step,type,node,gain,cumulative");
  std::string first;
  std::getline(csv, first);
  CHECK(first.rfind("1,1,7,", 0) == 0);  // first pick is the 1 m site
  std::filesystem::remove_all(dir);
}

TEST_CASE("oversized exact solve exits with 3 and names the estimate") {
  auto dir = testutil::make_temp_dir("cli_big");
  auto inst_path = write_reference_instance(dir);
  CliResult r = run_cli("solve --instance " + inst_path.string() +
                        " --method exact --limit 10");
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("1716") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("export then import round-trips through a solution file") {
  auto dir = testutil::make_temp_dir("cli_export");
  auto inst_path = write_reference_instance(dir);
  CliResult e1 = run_cli("export --instance " + inst_path.string() + " --format lp --out " +
                         (dir / "m.lp").string());
  CHECK(e1.exit_code == 0);
  CHECK(std::filesystem::exists(dir / "m.lp"));
  CliResult e2 = run_cli("export --instance " + inst_path.string() + " --format mzn --out " +
                         (dir / "m.mzn").string());
  CHECK(e2.exit_code == 0);
  {
    std::ofstream sol(dir / "m.sol");
    sol << "y_6_1 1\n";
  }
  CliResult imp = run_cli("import-solution --instance " + inst_path.string() + " --model " +
                          (dir / "m.lp").string() + " --sol " + (dir / "m.sol").string());
  CHECK(imp.exit_code == 0);
  CHECK(imp.output.find("re-evaluated F") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("ingest builds an instance from the fixtures") {
  auto dir = testutil::make_temp_dir("cli_ingest");
  CliResult r = run_cli("ingest --network " + (kFixtures / "network.geojson").string() +
                        " --points " + (kFixtures / "points.geojson").string() +
                        " --spec " + (dir / "spec.json").string() + " --out " +
                        (dir / "out.json").string());
  CHECK(r.exit_code == 2);  // spec file does not exist yet -> data error

  {
    std::ofstream spec(dir / "spec.json");
    spec << R"([{"id":0,"name":"grocery","raw_weights":[1.0],"budget":1}])";
  }
  CliResult ok = run_cli("ingest --network " + (kFixtures / "network.geojson").string() +
                         " --points " + (kFixtures / "points.geojson").string() +
                         " --spec " + (dir / "spec.json").string() + " --out " +
                         (dir / "out.json").string());
  CHECK(ok.exit_code == 0);
  walkopt::Instance inst = walkopt::read_instance(dir / "out.json");
  CHECK(inst.num_residents() == 2);
  CHECK(inst.num_candidates() == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("ingest with the builtin preset resolves existing types") {
  auto dir = testutil::make_temp_dir("cli_preset");
  CliResult ok = run_cli("ingest --network " + (kFixtures / "network.geojson").string() +
                         " --points " + (kFixtures / "points.geojson").string() +
                         " --preset toronto3 --k 2 --out " + (dir / "out.json").string());
  CHECK(ok.exit_code == 0);
  walkopt::Instance inst = walkopt::read_instance(dir / "out.json");
  CHECK(inst.types.size() == 3);
  CHECK(inst.types[1].options() == 10);
  for (const auto& spec : inst.types) CHECK(spec.budget == 2);
  CHECK(inst.existing[0].size() == 1);  // the fixture grocery
  std::filesystem::remove_all(dir);
}

TEST_CASE("sweep writes csv outputs") {
  auto dir = testutil::make_temp_dir("cli_sweep");
  auto inst_path = write_reference_instance(dir);
  CliResult r = run_cli("sweep --instance " + inst_path.string() +
                        " --k-max 2 --scenario single --out-dir " + (dir / "out").string());
  CHECK(r.exit_code == 0);
  CHECK(std::filesystem::exists(dir / "out" / "sweep.csv"));
  CHECK(std::filesystem::exists(dir / "out" / "hist.csv"));
  CHECK(std::filesystem::exists(dir / "out" / "summary.json"));
  CHECK(r.output.find("k=0") != std::string::npos);
  CHECK(r.output.find("k=2") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("data errors exit with 2") {
  auto dir = testutil::make_temp_dir("cli_data");
  {
    std::ofstream bad(dir / "bad.json");
    bad << "{\"residents\": 3}";
  }
  CliResult r = run_cli("score --instance " + (dir / "bad.json").string());
  CHECK(r.exit_code == 2);
  CliResult missing = run_cli("score --instance " + (dir / "missing.json").string());
  CHECK(missing.exit_code == 2);
  std::filesystem::remove_all(dir);
}
