#include "bob/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

#include "bob/errors.hpp"
#include "bob/estimates.hpp"
#include "bob/evolution.hpp"
#include "bob/experiments.hpp"
#include "bob/norms.hpp"

namespace bob::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end || !std::isfinite(out))
    throw ConfigError("bad number for " + key + ": '" + v + "'");
  return out;
}

long long to_integer(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw ConfigError("bad integer for " + key + ": '" + v + "'");
  return out;
}

std::size_t to_size(const std::string& key, const std::string& v) {
  const long long x = to_integer(key, v);
  if (x < 0) throw ConfigError(key + " must be nonnegative");
  return static_cast<std::size_t>(x);
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  if (out.empty()) throw ConfigError("empty list for " + key);
  return out;
}

std::string list_text(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
  return s;
}

struct Key {
  std::string name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class T>
Key real(const char* name, T RunConfig::*field) {
  return {name, [=](RunConfig& c, const std::string& v) { c.*field = to_double(name, v); },
          [=](const RunConfig& c) { return num(c.*field); }};
}

Key size(const char* name, std::size_t RunConfig::*field) {
  return {name, [=](RunConfig& c, const std::string& v) { c.*field = to_size(name, v); },
          [=](const RunConfig& c) { return std::to_string(c.*field); }};
}

Key integer(const char* name, int RunConfig::*field) {
  return {name,
          [=](RunConfig& c, const std::string& v) { c.*field = static_cast<int>(to_integer(name, v)); },
          [=](const RunConfig& c) { return std::to_string(c.*field); }};
}

Key list(const char* name, std::vector<double> RunConfig::*field) {
  return {name, [=](RunConfig& c, const std::string& v) { c.*field = to_list(name, v); },
          [=](const RunConfig& c) { return list_text(c.*field); }};
}

Key text(const char* name, std::string RunConfig::*field) {
  return {name, [=](RunConfig& c, const std::string& v) { c.*field = v; },
          [=](const RunConfig& c) { return c.*field; }};
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      text("command", &RunConfig::command),
      real("L", &RunConfig::L),
      size("N", &RunConfig::N),
      real("T", &RunConfig::T),
      real("dt", &RunConfig::dt),
      size("snapshots", &RunConfig::snapshots),
      real("epsilon", &RunConfig::epsilon),
      list("epsilons", &RunConfig::epsilons),
      real("sigma", &RunConfig::sigma),
      list("sigmas", &RunConfig::sigmas),
      real("delta", &RunConfig::delta),
      real("data_width", &RunConfig::data_width),
      real("data_amplitude", &RunConfig::data_amplitude),
      text("input", &RunConfig::input),
      {"seed",
       [](RunConfig& c, const std::string& v) { c.seed = to_size("seed", v); },
       [](const RunConfig& c) { return std::to_string(c.seed); }},
      integer("k_y", &RunConfig::k_y),
      integer("samples", &RunConfig::samples),
      real("lab_L", &RunConfig::lab_L),
      size("lab_N", &RunConfig::lab_N),
      real("window", &RunConfig::window),
      size("n_time", &RunConfig::n_time),
      list("study_epsilons", &RunConfig::study_epsilons),
      list("kernel_blocks", &RunConfig::kernel_blocks),
      integer("bilinear_samples", &RunConfig::bilinear_samples),
      integer("pairs", &RunConfig::pairs),
      size("bilinear_N", &RunConfig::bilinear_N),
      real("bilinear_window", &RunConfig::bilinear_window),
      text("regimes", &RunConfig::regimes),
      integer("picard_iters", &RunConfig::picard_iters),
      size("picard_nodes", &RunConfig::picard_nodes),
      integer("b0_iters", &RunConfig::b0_iters),
      text("out", &RunConfig::out),
      integer("workers", &RunConfig::workers),
      {"assert",
       [](RunConfig& c, const std::string& v) {
         if (v == "true" || v == "1") c.assert_thresholds = true;
         else if (v == "false" || v == "0") c.assert_thresholds = false;
         else throw ConfigError("assert must be true or false");
       },
       [](const RunConfig& c) { return std::string(c.assert_thresholds ? "true" : "false"); }},
  };
  return table;
}

std::vector<BilinearRegime> parse_regimes(const std::string& text) {
  std::vector<BilinearRegime> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int v[3];
    std::stringstream is(trim(item));
    std::string part;
    int n = 0;
    while (std::getline(is, part, ':')) {
      if (n == 3) throw ConfigError("regime '" + item + "' must be k:k1:k2");
      v[n++] = static_cast<int>(to_integer("regimes", trim(part)));
    }
    if (n != 3) throw ConfigError("regime '" + item + "' must be k:k1:k2");
    out.push_back({v[0], v[1], v[2]});
  }
  if (out.empty()) throw ConfigError("no bilinear regimes given");
  return out;
}

// ---- outputs ------------------------------------------------------------------

class Outputs {
 public:
  explicit Outputs(const RunConfig& cfg) : cfg_(cfg), dir_(cfg.out) {
    std::filesystem::create_directories(dir_);
  }

  template <class Fn>
  void file(const std::string& name, Fn&& write) {
    std::ofstream os(dir_ / name, std::ios::binary);
    if (!os) throw ConfigError("cannot write " + (dir_ / name).string());
    write(os);
  }

  void result(const std::string& key, const std::string& value) {
    results_ += "result." + key + "=" + value + "\n";
  }
  void result(const std::string& key, double value) { result(key, num(value)); }
  void raw(const std::string& lines) { results_ += lines; }

  void finish() {
    file("summary.txt", [&](std::ostream& os) {
      write_config(os, cfg_);
      os << results_;
    });
  }

 private:
  const RunConfig& cfg_;
  std::filesystem::path dir_;
  std::string results_;
};

struct Verdict {
  std::vector<std::string> failures;
  void check(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

int conclude(const RunConfig& cfg, const Verdict& v, Outputs& out, std::ostream& log) {
  out.result("threshold_failures", static_cast<double>(v.failures.size()));
  for (const auto& f : v.failures) out.result("threshold_failed", f);
  out.finish();
  log << "wrote " << cfg.out << "/summary.txt\n";
  if (cfg.assert_thresholds && !v.failures.empty()) {
    for (const auto& f : v.failures) log << "assert failed: " << f << '\n';
    return kExitAssert;
  }
  return kExitOk;
}

PhysicalField make_data(const RunConfig& cfg, const Grid& g) {
  if (cfg.data_amplitude >= 0.0) {
    const double a = cfg.data_amplitude;
    const double w = cfg.data_width;
    return PhysicalField::sample(g, [a, w](double x) { return a * std::exp(-x * x / (w * w)); });
  }
  return default_data(g, cfg.delta, cfg.data_width);
}

void write_trajectory_norms(std::ostream& os, const Trajectory& traj, double sigma, int b0_iters) {
  B0Options opt;
  opt.max_iterations = b0_iters;
  os << "# schema=v1\n" << "t,l2,refined,b0\n";
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    const double l2 = l2_norm(traj.snapshots[i]);
    double total = 0.0, b0 = 0.0;
    if (l2 > 0.0) {
      const NormBreakdown b = refined_sobolev_norm(to_spectral(traj.snapshots[i]), sigma, opt);
      total = b.total;
      b0 = b.blocks.front().contribution;
    }
    os << num(traj.times[i]) << ',' << num(l2) << ',' << num(total) << ',' << num(b0) << '\n';
  }
}

std::string summary_text(const SweepResult& r) {
  std::ostringstream os;
  r.write_summary(os);
  return os.str();
}

void study_files(Outputs& out, const RatioStudy& s) {
  out.file(s.estimate_id + ".csv", [&](std::ostream& os) { s.write_csv(os); });
  out.file(s.estimate_id + ".json", [&](std::ostream& os) { s.write_json(os); });
  for (const auto& r : s.summarize()) {
    const std::string p = s.estimate_id + ".sigma" + num(r.sigma) + ".";
    out.result(p + "max", r.max);
    out.result(p + "median", r.median);
    out.result(p + "spread", r.spread);
    out.result(p + "slope", r.slope);
  }
}

// ---- commands -------------------------------------------------------------------

int cmd_solve(const RunConfig& cfg, std::ostream& log) {
  const Grid g = Grid::make(cfg.L, cfg.N);
  const Trajectory traj = solution_map(make_data(cfg, g), cfg.epsilon, cfg.T, cfg.dt, cfg.snapshots);
  const SweepResult energy = energy_report(traj);
  Outputs out(cfg);
  out.file("trajectory.csv", [&](std::ostream& os) { traj.write_csv(os); });
  out.file("energy.csv", [&](std::ostream& os) { energy.write_csv(os); });
  out.file("norms.csv", [&](std::ostream& os) {
    write_trajectory_norms(os, traj, cfg.sigma, cfg.b0_iters);
  });
  out.raw(summary_text(energy));
  return conclude(cfg, {}, out, log);
}

int cmd_sweep(const RunConfig& cfg, std::ostream& log) {
  const Grid g = Grid::make(cfg.L, cfg.N);
  SweepOptions opt;
  opt.horizon = cfg.T;
  opt.dt = cfg.dt;
  opt.snapshots = cfg.snapshots;
  opt.workers = cfg.workers;
  const SweepResult r = inviscid_sweep(make_data(cfg, g), cfg.sigma, cfg.epsilons, opt);
  Outputs out(cfg);
  out.file("sweep.csv", [&](std::ostream& os) { r.write_csv(os); });
  out.raw(summary_text(r));
  Verdict v;
  if (r.fit) {
    v.check(std::abs(r.fit->slope - 1.0) <= 0.15, "inviscid slope within 1 +- 0.15");
    v.check(r.fit->r2 >= 0.98, "inviscid fit r2 >= 0.98");
  }
  return conclude(cfg, v, out, log);
}

int cmd_verify_linear(const RunConfig& cfg, std::ostream& log) {
  StudyConfig sc;
  sc.lab = {cfg.lab_L, cfg.lab_N, cfg.window, cfg.n_time};
  sc.epsilons = cfg.study_epsilons;
  sc.sigmas = cfg.sigmas;
  sc.samples = cfg.samples;
  sc.seed = cfg.seed;
  sc.k_y = cfg.k_y;
  sc.workers = cfg.workers;
  const DataFamily family = gaussian_family();
  Outputs out(cfg);
  Verdict v;
  for (const RatioStudy& s : {free_estimate_study(sc, family), inhomogeneous_estimate_study(sc, family)}) {
    study_files(out, s);
    for (const auto& r : s.summarize()) {
      v.check(r.spread < 3.0, s.estimate_id + " spread < 3 at sigma " + num(r.sigma));
      v.check(std::abs(r.slope) < 0.1, s.estimate_id + " |slope| < 0.1 at sigma " + num(r.sigma));
    }
  }
  for (double kb : cfg.kernel_blocks) {
    const int k = static_cast<int>(kb);
    const RatioStudy s = multiplier_kernel_study(k, cfg.study_epsilons);
    study_files(out, s);
    for (const auto& r : s.summarize()) v.check(r.spread < 3.0, s.estimate_id + " spread < 3");
    const double excess = dissipative_envelope_excess(k, cfg.study_epsilons, 2.0, 0.05);
    out.result("dissipative_envelope_k" + std::to_string(k), excess);
    v.check(excess <= 1.0, "dissipative envelope at k = " + std::to_string(k));
  }
  return conclude(cfg, v, out, log);
}

int cmd_verify_bilinear(const RunConfig& cfg, std::ostream& log) {
  BilinearConfig bc;
  bc.lab = {cfg.lab_L, cfg.bilinear_N, cfg.bilinear_window, cfg.n_time};
  bc.samples = cfg.bilinear_samples;
  bc.seed = cfg.seed;
  bc.k_y = cfg.k_y;
  bc.workers = cfg.workers;
  const auto regimes = parse_regimes(cfg.regimes);
  Outputs out(cfg);
  Verdict v;
  for (const auto& r : regimes) {
    const RatioStudy s = bilinear_dyadic_study(r, bc);
    study_files(out, s);
    if (s.samples.size() < 2) {
      v.check(false, s.estimate_id + " has fewer than two usable samples");
      continue;
    }
    const auto sum = s.summarize().front();
    const double rho = s.rank_correlation();
    out.result(s.estimate_id + ".rank_correlation", rho);
    v.check(sum.max <= 10.0 * sum.median, s.estimate_id + " max <= 10 x median");
    v.check(std::abs(rho) < 0.3, s.estimate_id + " |rank correlation with j1| < 0.3");
  }
  BilinearConfig fc = bc;
  fc.samples = cfg.pairs;
  const RatioStudy full = full_bilinear_study(cfg.sigmas, fc);
  study_files(out, full);
  for (const auto& r : full.summarize())
    v.check(r.max <= 10.0 * r.median, "full bilinear max <= 10 x median at sigma " + num(r.sigma));
  return conclude(cfg, v, out, log);
}

int cmd_norms(const RunConfig& cfg, std::ostream& log) {
  auto load = [&cfg]() -> Trajectory {
    if (!cfg.input.empty()) {
      std::ifstream is(cfg.input, std::ios::binary);
      if (!is) throw ConfigError("cannot read " + cfg.input);
      return Trajectory::read_csv(is);
    }
    const Grid g = Grid::make(cfg.L, cfg.N);
    return Trajectory{g, 0.0, 0.0, "data", true, {0.0}, {make_data(cfg, g)}};
  };
  const Trajectory traj = load();
  Outputs out(cfg);
  out.file("norms.csv", [&](std::ostream& os) {
    write_trajectory_norms(os, traj, cfg.sigma, cfg.b0_iters);
  });
  out.result("snapshots", static_cast<double>(traj.snapshots.size()));
  return conclude(cfg, {}, out, log);
}

int cmd_picard(const RunConfig& cfg, std::ostream& log) {
  const Grid g = Grid::make(cfg.L, cfg.N);
  PicardOptions opt;
  opt.horizon = cfg.T;
  opt.nodes = cfg.picard_nodes;
  opt.etd_dt = cfg.dt;
  const SweepResult r = picard_report(make_data(cfg, g), cfg.epsilon, cfg.picard_iters, opt);
  Outputs out(cfg);
  out.file("picard.csv", [&](std::ostream& os) { r.write_csv(os); });
  out.raw(summary_text(r));
  Verdict v;
  v.check(r.extra("diverged") == 0.0, "Picard iteration stays bounded");
  if (r.extra("diverged") == 0.0) {
    v.check(r.extra("max_ratio") <= 0.8, "Picard difference ratios <= 0.8");
    v.check(r.extra("etd_gap") <= 1e-6, "Picard iterate within 1e-6 of the ETD solve");
  }
  return conclude(cfg, v, out, log);
}

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c = {"solve", "sweep-epsilon", "verify-linear",
                                             "verify-bilinear", "norms", "picard",
                                             "print-config"};
  return c;
}

const char* describe(const std::string& command) {
  static const std::map<std::string, const char*> d = {
      {"solve", "integrate one run; trajectory, energy and norm histories"},
      {"sweep-epsilon", "distance to the inviscid flow over an epsilon list"},
      {"verify-linear", "free, inhomogeneous and kernel ratio studies"},
      {"verify-bilinear", "dyadic and full bilinear ratio studies"},
      {"norms", "refined norms of a trajectory CSV or of the default data"},
      {"picard", "Picard iteration report against the ETD solve"},
      {"print-config", "print the resolved configuration"},
  };
  return d.at(command);
}

}  // namespace

void apply(RunConfig& cfg, const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  for (const auto& k : keys()) {
    if (k.name != key) continue;
    if (value.empty() && key != "input") throw ConfigError("missing value for " + key);
    k.set(cfg, value);
    return;
  }
  throw ConfigError("unknown configuration key '" + key + "'");
}

void read_config(std::istream& is, RunConfig& cfg) {
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.rfind("result.", 0) == 0) continue;
    apply(cfg, key, line.substr(eq + 1));
  }
}

void write_config(std::ostream& os, const RunConfig& cfg) {
  for (const auto& k : keys()) os << k.name << " = " << k.get(cfg) << '\n';
}

void validate(const RunConfig& cfg) {
  if (std::find(commands().begin(), commands().end(), cfg.command) == commands().end())
    throw ConfigError("unknown command '" + cfg.command + "'");
  Grid::make(cfg.L, cfg.N);
  if (!(cfg.T > 0.0 && cfg.T <= 1.0)) throw ConfigError("T must lie in (0, 1]");
  if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
  if (cfg.snapshots == 0) throw ConfigError("snapshots must be positive");
  if (!(cfg.epsilon >= 0.0 && cfg.epsilon <= 1.0)) throw ConfigError("epsilon must lie in [0, 1]");
  if (cfg.sigma < 0.0) throw ConfigError("sigma must be nonnegative");
  for (double s : cfg.sigmas)
    if (s < 0.0) throw ConfigError("sigmas must be nonnegative");
  for (double e : cfg.study_epsilons)
    if (!(e >= 0.0 && e <= 1.0)) throw ConfigError("study_epsilons must lie in [0, 1]");
  if (!(cfg.delta >= 0.0)) throw ConfigError("delta must be nonnegative");
  if (!(cfg.data_width > 0.0)) throw ConfigError("data_width must be positive");
  if (cfg.samples < 1 || cfg.bilinear_samples < 1 || cfg.pairs < 1)
    throw ConfigError("sample counts must be positive");
  if (cfg.k_y < 0) throw ConfigError("k_y must be nonnegative");
  if (cfg.picard_iters < 1 || cfg.picard_nodes < 2) throw ConfigError("bad Picard settings");
  if (cfg.b0_iters < 1) throw ConfigError("b0_iters must be positive");
  if (cfg.workers < 0) throw ConfigError("workers must be nonnegative");
  if (cfg.out.empty() && cfg.command != "print-config") throw ConfigError("missing output directory");
  if (cfg.command == "verify-linear" || cfg.command == "verify-bilinear") {
    Grid::make(cfg.lab_L, cfg.lab_N);
    if (!(cfg.window > 0.0) || cfg.n_time < 16) throw ConfigError("bad space-time window");
  }
  if (cfg.command == "verify-bilinear") parse_regimes(cfg.regimes);
  if (cfg.command == "sweep-epsilon") {
    for (double e : cfg.epsilons)
      if (!(e > 0.0 && e <= 1.0)) throw ConfigError("epsilons must lie in (0, 1]");
  }
}

int run_command(const RunConfig& cfg, std::ostream& log) {
  validate(cfg);
  if (cfg.command == "solve") return cmd_solve(cfg, log);
  if (cfg.command == "sweep-epsilon") return cmd_sweep(cfg, log);
  if (cfg.command == "verify-linear") return cmd_verify_linear(cfg, log);
  if (cfg.command == "verify-bilinear") return cmd_verify_bilinear(cfg, log);
  if (cfg.command == "norms") return cmd_norms(cfg, log);
  if (cfg.command == "picard") return cmd_picard(cfg, log);
  write_config(log, cfg);
  return kExitOk;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pseudospectral lab for the Benjamin-Ono-Burgers equation", "boblab"};
  app.require_subcommand(1);
  std::map<std::string, std::map<std::string, std::string>> flags;
  std::map<std::string, std::string> config_file;
  std::map<std::string, bool> assert_flag;
  for (const auto& name : commands()) {
    CLI::App* sub = app.add_subcommand(name, describe(name));
    sub->add_option("--config", config_file[name], "key = value configuration file");
    for (const auto& k : keys()) {
      if (k.name == "command" || k.name == "assert") continue;
      sub->add_option("--" + k.name, flags[name][k.name]);
    }
    sub->add_flag("--assert", assert_flag[name], "exit 4 when a threshold fails");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }
  try {
    const std::string name = app.get_subcommands().front()->get_name();
    RunConfig cfg;
    if (!config_file[name].empty()) {
      std::ifstream is(config_file[name]);
      if (!is) throw ConfigError("cannot read " + config_file[name]);
      cfg.command.clear();
      read_config(is, cfg);
      if (!cfg.command.empty() && cfg.command != name)
        throw ConfigError("configuration is for '" + cfg.command + "', not '" + name + "'");
    }
    cfg.command = name;
    CLI::App* sub = app.get_subcommand(name);
    for (const auto& [key, value] : flags[name])
      if (sub->count("--" + key) > 0) apply(cfg, key, value);
    if (assert_flag[name]) cfg.assert_thresholds = true;
    if (name == "print-config") {
      validate(cfg);
      write_config(out, cfg);
      return kExitOk;
    }
    return run_command(cfg, err);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ResolutionError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DivergenceError& e) {
    err << "divergence: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace bob::cli
