#pragma once

// Command-line front end. Configuration is flat `key = value` text:
//   - one key per line, '#' starts a comment, blank lines ignored
//   - lists are comma separated; regimes are k:k1:k2 triples
//   - keys prefixed with "result." are outputs and ignored on input
// Unknown keys are rejected. Command-line flags --key value override the file.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace bob::cli {

struct RunConfig {
  std::string command = "solve";
  // evolution grid and time stepping
  double L = 32.0;
  std::size_t N = 256;
  double T = 1.0;
  double dt = 1.0 / 1024;
  std::size_t snapshots = 64;
  double epsilon = 0.1;
  std::vector<double> epsilons{1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
  double sigma = 0.0;
  std::vector<double> sigmas{0.0, 1.0};
  // data
  double delta = 0.05;
  double data_width = 2.0;
  double data_amplitude = -1.0;  // < 0: tuned so the H~0 norm is delta / 2
  std::string input;             // trajectory CSV for `norms`
  // estimate studies
  std::uint64_t seed = 1;
  int k_y = 5;
  int samples = 20;
  double lab_L = 8.0;
  std::size_t lab_N = 64;
  double window = 4.0;
  std::size_t n_time = 1024;
  std::vector<double> study_epsilons{1.0, 1e-1, 1e-2, 1e-3, 1e-4};
  std::vector<double> kernel_blocks{4, 6, 8};
  int bilinear_samples = 100;
  int pairs = 50;
  std::size_t bilinear_N = 128;
  double bilinear_window = 8.0;
  std::string regimes = "2:2:2,3:2:2,1:2:2,0:1:1,2:1:2";
  // picard and norms
  int picard_iters = 8;
  std::size_t picard_nodes = 128;
  int b0_iters = 500;
  // run control
  std::string out = "out";
  int workers = 0;
  bool assert_thresholds = false;
};

// Applies one key; ConfigError on unknown keys or malformed values.
void apply(RunConfig& cfg, const std::string& key, const std::string& value);
// Reads the grammar above into cfg.
void read_config(std::istream& is, RunConfig& cfg);
// Every key with its resolved value, in a fixed order.
void write_config(std::ostream& os, const RunConfig& cfg);
// Checks ranges relevant to cfg.command before any work starts.
void validate(const RunConfig& cfg);

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDivergence = 3;
inline constexpr int kExitAssert = 4;

// Runs a validated command; writes files under cfg.out and returns an exit code.
int run_command(const RunConfig& cfg, std::ostream& log);

// Full entry point: argument parsing, config resolution, error-to-exit-code mapping.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bob::cli
