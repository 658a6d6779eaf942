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

#include "flycap/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace flycap {

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

double to_double(const std::string& raw, int line, const std::string& key) {
  const std::string v = trim(raw);
  if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError(line, key + ": expected a number, got '" + v + "'");
}

std::vector<double> to_list(std::string v, int line, const std::string& key) {
  v = trim(v);
  if (!v.empty() && v.front() == '[' && v.back() == ']') v = v.substr(1, v.size() - 2);
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(item, line, key));
  if (out.empty()) throw ConfigError(line, key + ": expected a list of numbers");
  return out;
}

bool to_bool(const std::string& raw, int line, const std::string& key) {
  const std::string v = trim(raw);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError(line, key + ": expected true or false, got '" + v + "'");
}

std::uint64_t to_seed(const std::string& raw, int line, const std::string& key) {
  const std::string v = trim(raw);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(line, key + ": expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

using Setter = std::function<void(ScenarioConfig&, const std::string&, int,
                                  const std::string&)>;

template <typename F>
Setter with(F f) {
  return [f](ScenarioConfig& c, const std::string& v, int line, const std::string& k) {
    f(c, v, line, k);
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto scalar = [&](const std::string& key, auto getter) {
      t[key] = with([getter](ScenarioConfig& c, const std::string& v, int line,
                             const std::string& k) { getter(c) = to_double(v, line, k); });
    };
    scalar("plant.E", [](ScenarioConfig& c) -> double& { return c.params.E; });
    scalar("plant.R", [](ScenarioConfig& c) -> double& { return c.params.R; });
    scalar("plant.L", [](ScenarioConfig& c) -> double& { return c.params.L; });
    t["plant.p"] = with([](ScenarioConfig& c, const std::string& v, int line,
                           const std::string& k) {
      const double d = to_double(v, line, k);
      if (d != std::floor(d) || d < 2 || d > 16) {
        throw ConfigError(line, "plant.p must be an integer in [2, 16]");
      }
      c.params.p = static_cast<int>(d);
    });
    t["plant.c"] = with([](ScenarioConfig& c, const std::string& v, int line,
                           const std::string& k) { c.params.c = to_list(v, line, k); });

    scalar("pwm.f_chop", [](ScenarioConfig& c) -> double& { return c.pwm.f_chop; });
    scalar("pwm.phase_shift", [](ScenarioConfig& c) -> double& { return c.pwm.phase_shift; });
    t["pwm.duty"] = with([](ScenarioConfig& c, const std::string& v, int line,
                            const std::string& k) { c.pwm.duty = to_list(v, line, k); });

    t["sosml.enabled"] = with([](ScenarioConfig& c, const std::string& v, int line,
                                 const std::string& k) { c.sosml_enabled = to_bool(v, line, k); });
    scalar("sosml.lambda0", [](ScenarioConfig& c) -> double& { return c.sosml.lambda0; });
    scalar("sosml.alpha0", [](ScenarioConfig& c) -> double& { return c.sosml.alpha0; });
    scalar("sosml.k_lambda0", [](ScenarioConfig& c) -> double& { return c.sosml.k_lambda0; });
    scalar("sosml.k_alpha0", [](ScenarioConfig& c) -> double& { return c.sosml.k_alpha0; });
    scalar("sosml.k", [](ScenarioConfig& c) -> double& { return c.sosml.k; });
    scalar("sosml.kappa", [](ScenarioConfig& c) -> double& { return c.sosml.kappa; });
    scalar("sosml.l_init", [](ScenarioConfig& c) -> double& { return c.sosml.l_init; });
    scalar("sosml.eps_dz", [](ScenarioConfig& c) -> double& { return c.sosml.eps_dz; });
    scalar("sosml.l_max", [](ScenarioConfig& c) -> double& { return c.sosml.l_max; });

    t["luenberger.enabled"] = with([](ScenarioConfig& c, const std::string& v, int line,
                                      const std::string& k) {
      if (to_bool(v, line, k)) {
        if (!c.luenberger) c.luenberger = LuenbergerGains::preset();
      } else {
        c.luenberger.reset();
      }
    });
    for (int i = 0; i < 7; ++i) {
      t["luenberger.kappa" + std::to_string(i)] =
          with([i](ScenarioConfig& c, const std::string& v, int line, const std::string& k) {
            if (!c.luenberger) c.luenberger = LuenbergerGains::preset();
            c.luenberger->kappa[static_cast<std::size_t>(i)] = to_double(v, line, k);
          });
    }

    scalar("sim.t_end", [](ScenarioConfig& c) -> double& { return c.t_end; });
    scalar("sim.dt", [](ScenarioConfig& c) -> double& { return c.dt; });

    scalar("init.I", [](ScenarioConfig& c) -> double& { return c.x0.I; });
    t["init.Vc"] = with([](ScenarioConfig& c, const std::string& v, int line,
                           const std::string& k) { c.x0.Vc = to_list(v, line, k); });
    scalar("init.Ihat", [](ScenarioConfig& c) -> double& { return c.observer_x0.I_hat; });
    t["init.Vchat"] = with([](ScenarioConfig& c, const std::string& v, int line,
                              const std::string& k) {
      c.observer_x0.Vc_hat = to_list(v, line, k);
    });

    t["noise.kind"] = with([](ScenarioConfig& c, const std::string& raw, int line,
                              const std::string&) {
      const std::string v = trim(raw);
      if (v == "none") {
        c.noise.kind = NoiseKind::kNone;
      } else if (v == "uniform") {
        c.noise.kind = NoiseKind::kUniform;
      } else if (v == "gaussian") {
        c.noise.kind = NoiseKind::kGaussian;
      } else {
        throw ConfigError(line, "noise.kind must be none, uniform or gaussian");
      }
    });
    scalar("noise.amplitude", [](ScenarioConfig& c) -> double& { return c.noise.amplitude; });
    t["noise.seed"] = with([](ScenarioConfig& c, const std::string& v, int line,
                              const std::string& k) { c.noise.seed = to_seed(v, line, k); });

    scalar("load.t_switch", [](ScenarioConfig& c) -> double& { return c.load.t_switch; });
    scalar("load.R_factor", [](ScenarioConfig& c) -> double& { return c.load.R_factor; });

    scalar("metrics.threshold", [](ScenarioConfig& c) -> double& { return c.settle_threshold; });
    return t;
  }();
  return table;
}

}  // namespace

ConfigError::ConfigError(int line, const std::string& msg)
    : std::runtime_error(line > 0 ? "config line " + std::to_string(line) + ": " + msg
                                  : "config: " + msg),
      line_(line) {}

std::vector<std::string> known_config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : setters()) keys.push_back(k);
  return keys;
}

ScenarioConfig parse_config(std::istream& in) {
  ScenarioConfig cfg = ScenarioConfig::nominal();
  std::map<std::string, int> seen;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw.substr(0, raw.find('#')));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(line, "expected 'key = value'");
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(line, "unknown key '" + key + "'");
    if (seen.count(key)) {
      throw ConfigError(line, "duplicate key '" + key + "' (first on line " +
                                  std::to_string(seen[key]) + ")");
    }
    if (value.empty()) throw ConfigError(line, key + ": missing value");
    seen[key] = line;
    it->second(cfg, value, line, key);
  }

  // Follow the cell count unless given explicitly.
  const auto n = static_cast<std::size_t>(cfg.params.p);
  if (!seen.count("pwm.duty")) cfg.pwm.duty.assign(n, 0.5);
  if (!seen.count("pwm.phase_shift")) cfg.pwm.phase_shift = 1.0 / cfg.params.p;

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    // Messages start with the key they concern.
    const std::string msg = e.what();
    int where = 0;
    std::size_t best = 0;
    for (const auto& [k, l] : seen) {
      if (msg.rfind(k, 0) == 0 && k.size() > best) {
        where = l;
        best = k.size();
      }
    }
    throw ConfigError(where, msg);
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open " + path);
  return parse_config(in);
}

HybridTimeTrajectory parse_mode_list(std::istream& in, int p) {
  std::stringstream all;
  all << in.rdbuf();
  std::string text = all.str();
  std::replace(text.begin(), text.end(), '\n', ';');
  std::vector<std::vector<int>> switches;
  std::stringstream ss(text);
  std::string entry;
  int index = 0;
  while (std::getline(ss, entry, ';')) {
    entry = trim(entry);
    if (entry.empty()) continue;
    ++index;
    const std::string where = "mode entry " + std::to_string(index);
    if (entry.front() != '[' || entry.back() != ']') {
      throw ConfigError(0, where + ": expected [S1,...,Sp]");
    }
    std::vector<int> S;
    std::stringstream items(entry.substr(1, entry.size() - 2));
    std::string item;
    while (std::getline(items, item, ',')) {
      item = trim(item);
      if (item != "0" && item != "1") {
        throw ConfigError(0, where + ": switch states must be 0 or 1");
      }
      S.push_back(item == "1" ? 1 : 0);
    }
    if (static_cast<int>(S.size()) != p) {
      throw ConfigError(0, where + ": expected " + std::to_string(p) + " switch states");
    }
    switches.push_back(std::move(S));
  }
  if (switches.empty()) throw ConfigError(0, "mode list is empty");
  return HybridTimeTrajectory::from_switches(switches);
}

}  // namespace flycap
