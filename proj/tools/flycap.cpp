// Copyright 2026 The flycap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// flycap: batch front end.
//
// Exit status:
//   0  success
//   1  bad command line
//   2  config or mode-list error (message carries the line / entry)
//   3  numerical abort during a run (message carries the step index)
//   4  output directory or file not writable
//   5  any other internal error

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "flycap/analysis.hpp"
#include "flycap/config.hpp"
#include "flycap/observability.hpp"
#include "flycap/sim.hpp"

namespace fs = std::filesystem;
using namespace flycap;

namespace {

enum Exit { kOk = 0, kUsage = 1, kConfig = 2, kNumerical = 3, kIo = 4, kInternal = 5 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string g9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

ScenarioConfig load(const std::string& path) {
  ScenarioConfig cfg = load_config(path);
  if (const char* env = std::getenv("FLYCAP_SEED")) {
    char* end = nullptr;
    const unsigned long long seed = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') {
      throw ConfigError(0, std::string("FLYCAP_SEED is not an integer: ") + env);
    }
    cfg.noise.seed = seed;
  }
  return cfg;
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream os(dir / name);
  if (!os) throw IoError("cannot write " + (dir / name).string());
  return os;
}

void gains_report(std::ostream& os, const ScenarioConfig& cfg) {
  const Condition16 c16 = check_condition16(cfg.sosml);
  os << "condition (16): " << (c16.pass ? "PASS" : "FAIL") << "  lhs=" << g9(c16.lhs)
     << " rhs=" << g9(c16.rhs) << " margin=" << g9(c16.margin) << '\n';
  const LyapunovMatrices lm = build_matrices(cfg.sosml);
  auto eig = [&](const char* name, const Eigen::Matrix3d& M) {
    const Eigen::Vector3d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(M).eigenvalues();
    os << name << " eigenvalues: " << g9(ev(0)) << ' ' << g9(ev(1)) << ' ' << g9(ev(2))
       << (is_positive_definite(M) ? "  (positive definite)" : "  (NOT positive definite)")
       << '\n';
  };
  eig("P", lm.P);
  eig("Omega1", lm.Omega1);
  eig("Omega2", lm.Omega2);
  os << "gamma1=" << g9(lm.gamma1) << " gamma2=" << g9(lm.gamma2_per_F)
     << "*F gamma3=" << g9(lm.gamma3) << " gamma4=" << g9(lm.gamma4) << '\n';

  const double T = cfg.pwm.period();
  const double span = std::max(T, cfg.t_end);
  const auto traj = trajectory_from_pwm(cfg.pwm, 0.0, span, cfg.params.p);
  const PeReport pe = pe_check(traj, T, 1.0);
  os << "PE min eigenvalue (window " << g9(T) << " s, scale 1): " << g9(pe.min_eigenvalue)
     << " at t=" << g9(pe.worst_window_start) << (pe.min_eigenvalue > 0 ? "  PASS" : "  FAIL")
     << '\n';

  if (cfg.luenberger && cfg.params.p == 3) {
    // Diagonal certificate matching the kappa1/kappa4 pair, if it has that shape.
    const auto& k = cfg.luenberger->kappa;
    const double r2 = -k[1] * cfg.params.L;
    const double r3 = -k[4] * cfg.params.L;
    if (r2 > 0 && r3 > 0) {
      const Eigen::Matrix3d P = Eigen::Vector3d(1.0, 1.0 / r2, 1.0 / r3).asDiagonal();
      const GainCertificate cert = certify_gains(*cfg.luenberger, cfg.params, P);
      os << "luenberger certificate P=diag(1, " << g9(1 / r2) << ", " << g9(1 / r3)
         << "): " << (cert.pass ? "PASS" : "FAIL") << "  max eig:";
      for (double v : cert.max_eigenvalue) os << ' ' << g9(v);
      os << '\n';
    } else {
      os << "luenberger certificate: no diagonal candidate (kappa1, kappa4 must be < 0)\n";
    }
  }
}

int cmd_simulate(const std::string& config, const std::string& out,
                 const std::string& observer) {
  ScenarioConfig cfg = load(config);
  if (observer == "sosml") {
    cfg.luenberger.reset();
    cfg.sosml_enabled = true;
  } else if (observer == "luenberger") {
    cfg.sosml_enabled = false;
    if (!cfg.luenberger) cfg.luenberger = LuenbergerGains::preset();
  } else {
    cfg.sosml_enabled = true;
    if (!cfg.luenberger) cfg.luenberger = LuenbergerGains::preset();
  }
  cfg.validate();
  const TimeSeries ts = run_scenario(cfg);
  const Metrics m = metrics(ts, cfg.settle_threshold);
  {
    auto os = open_out(out, "timeseries.csv");
    write_csv(os, ts);
  }
  {
    auto os = open_out(out, "metrics.txt");
    write_metrics(os, m);
  }
  {
    auto os = open_out(out, "gains_report.txt");
    gains_report(os, cfg);
  }
  write_metrics(std::cout, m);
  std::cout << "wrote " << ts.records.size() << " records to "
            << (fs::path(out) / "timeseries.csv").string() << '\n';
  return kOk;
}

int cmd_analyze(const std::string& config) {
  gains_report(std::cout, load(config));
  return kOk;
}

int cmd_observability(const std::string& config, const std::string& modes) {
  const ScenarioConfig cfg = load(config);
  HybridTimeTrajectory traj;
  if (!modes.empty()) {
    std::ifstream in(modes);
    if (!in) throw ConfigError(0, "cannot open mode list " + modes);
    traj = parse_mode_list(in, cfg.params.p);
  } else {
    traj = trajectory_from_pwm(cfg.pwm, 0.0, cfg.pwm.period(), cfg.params.p);
  }
  if (cfg.params.p == 3) std::cout << format_rank_table(cfg.params) << '\n';
  std::cout << format_verdict(z_observability_check(traj, {}, cfg.params));
  return kOk;
}

int cmd_compare(const std::string& config, const std::string& out) {
  const Comparison c = compare_observers(load(config));
  {
    auto os = open_out(out, "timeseries.csv");
    write_csv(os, c.series);
  }
  {
    auto os = open_out(out, "comparison.txt");
    write_comparison(os, c);
  }
  write_comparison(std::cout, c);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flying-capacitor converter observers: simulation and analysis"};
  app.require_subcommand(1);

  std::string config, out, observer = "both", modes;

  auto* sim = app.add_subcommand("simulate", "run a scenario and write CSV, metrics, gains report");
  sim->add_option("--config", config, "scenario file")->required();
  sim->add_option("--out", out, "output directory")->required();
  sim->add_option("--observer", observer, "sosml|luenberger|both")
      ->check(CLI::IsMember({"sosml", "luenberger", "both"}));

  auto* gains = app.add_subcommand("analyze-gains", "print gain condition and certificate report");
  gains->add_option("--config", config, "scenario file")->required();

  auto* obs = app.add_subcommand("check-observability",
                                 "rank table and Z(T_N) verdict for a trajectory");
  obs->add_option("--config", config, "scenario file")->required();
  obs->add_option("--modes", modes, "mode list file, e.g. [1,0,0];[1,1,0]");

  auto* cmp = app.add_subcommand("compare", "run both observers and print the RMSE table");
  cmp->add_option("--config", config, "scenario file")->required();
  cmp->add_option("--out", out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*sim) return cmd_simulate(config, out, observer);
    if (*gains) return cmd_analyze(config);
    if (*obs) return cmd_observability(config, modes);
    if (*cmp) return cmd_compare(config, out);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const NumericalAbort& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}
