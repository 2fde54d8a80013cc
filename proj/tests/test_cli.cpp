#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bob/cli.hpp"
#include "bob/errors.hpp"

namespace fs = std::filesystem;
using namespace bob::cli;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "boblab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("boblab_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Smallest solve that still exercises every output.
std::vector<std::string> tiny_solve(const fs::path& out) {
  return {"solve", "--L", "8", "--N", "64", "--T", "0.25", "--dt", "0.015625", "--snapshots", "4",
          "--b0_iters", "100", "--out", out.string()};
}

}  // namespace

TEST_CASE("config text round trip") {
  RunConfig a;
  a.command = "sweep-epsilon";
  a.epsilons = {0.5, 0.25};
  a.regimes = "1:1:1";
  a.seed = 99;
  a.out = "x/y";
  std::stringstream ss;
  write_config(ss, a);
  RunConfig b;
  read_config(ss, b);
  std::stringstream again;
  write_config(again, b);
  CHECK(again.str() == ss.str());
  CHECK(b.epsilons == a.epsilons);
  CHECK(b.seed == 99);
}

TEST_CASE("config parsing errors") {
  RunConfig c;
  std::istringstream unknown("bogus = 1\n");
  CHECK_THROWS_AS(read_config(unknown, c), bob::ConfigError);
  std::istringstream missing("N =\n");
  CHECK_THROWS_AS(read_config(missing, c), bob::ConfigError);
  std::istringstream noeq("N 64\n");
  CHECK_THROWS_AS(read_config(noeq, c), bob::ConfigError);
  CHECK_THROWS_AS(apply(c, "N", "sixty"), bob::ConfigError);
  std::istringstream ok("# comment\n\nN = 128\nresult.slope = 3\n");
  read_config(ok, c);
  CHECK(c.N == 128);
}

TEST_CASE("exit codes") {
  const fs::path dir = scratch("codes");
  CHECK(run({"solve", "--N", "7", "--out", dir.string()}).code == kExitConfig);
  CHECK(run({"solve", "--dt", "0.3", "--out", dir.string()}).code == kExitConfig);
  const fs::path cfg = dir / "bad.cfg";
  std::ofstream(cfg) << "frobnicate = 3\n";
  const auto r = run({"solve", "--config", cfg.string(), "--out", dir.string()});
  CHECK(r.code == kExitConfig);
  CHECK(r.err.find("frobnicate") != std::string::npos);

  auto blowup = tiny_solve(dir / "blow");
  blowup.insert(blowup.end(), {"--data_amplitude", "1e6", "--epsilon", "0"});
  CHECK(run(blowup).code == kExitDivergence);

  const auto p = run({"picard", "--L", "8", "--N", "64", "--picard_nodes", "32", "--picard_iters", "4",
                      "--data_amplitude", "3", "--assert", "--out", (dir / "pic").string()});
  CHECK(p.code == kExitAssert);
  CHECK(run({"print-config"}).code == kExitOk);
}

TEST_CASE("runs replay from their summary") {
  const fs::path a = scratch("replay_a"), b = scratch("replay_b");
  REQUIRE(run(tiny_solve(a)).code == kExitOk);
  std::string summary = slurp(a / "summary.txt");
  CHECK(summary.find("result.") != std::string::npos);
  const fs::path cfg = b / "from_summary.cfg";
  {
    std::ofstream os(cfg);
    std::istringstream is(summary);
    for (std::string line; std::getline(is, line);)
      os << (line.rfind("out =", 0) == 0 ? "out = " + b.string() : line) << '\n';
  }
  REQUIRE(run({"solve", "--config", cfg.string()}).code == kExitOk);
  for (const char* f : {"trajectory.csv", "energy.csv", "norms.csv"}) CHECK(slurp(a / f) == slurp(b / f));
}

TEST_CASE("norms command reproduces the solve norms") {
  const fs::path a = scratch("norms_a"), b = scratch("norms_b");
  REQUIRE(run(tiny_solve(a)).code == kExitOk);
  REQUIRE(run({"norms", "--input", (a / "trajectory.csv").string(), "--b0_iters", "100", "--out",
               b.string()})
              .code == kExitOk);
  CHECK(slurp(a / "norms.csv") == slurp(b / "norms.csv"));
}
