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

#include "flycap/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <tuple>

namespace flycap {

namespace {

constexpr double kOverflow = 1e9;

bool blown(double v) { return !std::isfinite(v) || std::abs(v) > kOverflow; }

std::string fmt9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

void ScenarioConfig::validate() const {
  params.validate();
  pwm.validate(params.p);
  if (sosml_enabled) sosml.validate();
  if (luenberger) {
    luenberger->validate();
    if (params.p != 3) {
      throw std::invalid_argument("luenberger observer requires plant.p = 3");
    }
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("sim.dt must be > 0");
  }
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw std::invalid_argument("sim.t_end must be > 0");
  }
  if (!(noise.amplitude >= 0.0)) {
    throw std::invalid_argument("noise.amplitude must be >= 0");
  }
  if (!(load.R_factor > 0.0)) {
    throw std::invalid_argument("load.R_factor must be > 0");
  }
  const auto n = static_cast<std::size_t>(params.p - 1);
  if (x0.Vc.size() != n) {
    throw std::invalid_argument("init.Vc must list p-1 voltages");
  }
  if (observer_x0.Vc_hat.size() != n) {
    throw std::invalid_argument("init.Vchat must list p-1 voltages");
  }
  if (!(settle_threshold > 0.0)) {
    throw std::invalid_argument("metrics.threshold must be > 0");
  }
}

std::size_t ScenarioConfig::steps() const {
  // Guard against 0.1 / 5e-6 landing just below an integer.
  return static_cast<std::size_t>(std::floor(t_end / dt * (1.0 + 1e-12)));
}

ScenarioConfig ScenarioConfig::nominal() {
  ScenarioConfig cfg;
  cfg.luenberger = LuenbergerGains::preset();
  return cfg;
}

NumericalAbort::NumericalAbort(std::size_t step, const std::string& what)
    : std::runtime_error("numerical abort at step " + std::to_string(step) +
                         ": " + what),
      step_(step) {}

NoiseSource::NoiseSource(const NoiseConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {}

double NoiseSource::unit() {
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

double NoiseSource::next() {
  switch (cfg_.kind) {
    case NoiseKind::kNone:
      return 0.0;
    case NoiseKind::kUniform:
      return cfg_.amplitude * (2.0 * unit() - 1.0);
    case NoiseKind::kGaussian: {
      // Box-Muller, one draw per pair.
      const double u1 = 1.0 - unit();
      const double u2 = unit();
      return cfg_.amplitude * std::sqrt(-2.0 * std::log(u1)) *
             std::cos(2.0 * std::numbers::pi * u2);
    }
  }
  return 0.0;
}

TimeSeries run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  const ConverterParams& prm = cfg.params;
  const int p = prm.p;
  const std::size_t n_steps = cfg.steps();
  const double dt = cfg.dt;

  TimeSeries ts;
  ts.p = p;
  ts.dt = dt;
  ts.has_sosml = cfg.sosml_enabled;
  ts.has_luen = cfg.luenberger.has_value();
  ts.records.reserve(n_steps + 1);

  Eigen::VectorXd x = cfg.x0.to_vector();
  SosmlState sos = SosmlState::initial(cfg.observer_x0.I_hat,
                                       cfg.observer_x0.Vc_hat, cfg.sosml);
  LuenbergerState lue;
  if (ts.has_luen) {
    lue.I_hat = cfg.observer_x0.I_hat;
    lue.Vc_hat = {cfg.observer_x0.Vc_hat[0], cfg.observer_x0.Vc_hat[1]};
  }
  const Eigen::Matrix3d P_lyap = build_matrices(cfg.sosml).P;
  NoiseSource noise(cfg.noise);

  for (std::size_t n = 0;; ++n) {
    const double t = static_cast<double>(n) * dt;
    const ModeVector mode = pwm_mode_at(t, cfg.pwm, p);
    const double R_act = t >= cfg.load.t_switch ? prm.R * cfg.load.R_factor : prm.R;
    const double I_meas = x(0) + noise.next();
    const Eigen::VectorXd dx = dynamics(x, mode, prm, R_act);

    StepRecord rec;
    rec.t = t;
    rec.mode = mode;
    rec.I = x(0);
    rec.Vc.assign(x.data() + 1, x.data() + p);
    rec.I_meas = I_meas;

    if (ts.has_sosml) {
      ObserverSample s;
      s.I_hat = sos.I_hat;
      s.Vc_hat = sos.Vc_hat;
      s.e1 = x(0) - sos.I_hat;
      for (int j = 0; j < p - 1; ++j) s.e_V.push_back(x(j + 1) - sos.Vc_hat[j]);
      const double e1m = I_meas - sos.I_hat;
      s.l = sos.l;
      s.mu = mu(e1m, sos, cfg.sosml);
      // Continuous-time derivative of the current error at this sample.
      double dI_hat = -(prm.R / prm.L) * I_meas + prm.E / prm.L * mode.u[p - 1] + s.mu;
      for (int j = 0; j < p - 1; ++j) dI_hat -= sos.Vc_hat[j] / prm.L * mode.u[j];
      s.phi1 = phi1_from_error_dynamics(dx(0) - dI_hat, e1m, sos.l, cfg.sosml);
      const Eigen::Vector3d z = ZetaState::from_error(e1m, sos.l, s.phi1).vector();
      s.V_lyap = z.dot(P_lyap * z);
      s.in_dead_zone = std::abs(e1m) <= cfg.sosml.eps_dz;
      rec.sosml = std::move(s);
    }
    if (ts.has_luen) {
      ObserverSample s;
      s.I_hat = lue.I_hat;
      s.Vc_hat = {lue.Vc_hat[0], lue.Vc_hat[1]};
      s.e1 = x(0) - lue.I_hat;
      for (int j = 0; j < 2; ++j) s.e_V.push_back(x(j + 1) - lue.Vc_hat[j]);
      rec.luen = std::move(s);
    }
    ts.records.push_back(std::move(rec));
    if (n == n_steps) break;

    x += dt * dx;
    if (ts.has_sosml) {
      sos = observer_step(sos, I_meas, mode, prm, cfg.sosml, dt);
    }
    if (ts.has_luen) {
      lue = luenberger_step(lue, I_meas, mode, prm, *cfg.luenberger, dt);
    }

    for (int k = 0; k < p; ++k) {
      if (blown(x(k))) throw NumericalAbort(n + 1, "plant " + state_name(k));
    }
    if (ts.has_sosml) {
      if (blown(sos.I_hat) || blown(sos.l) || blown(sos.sigma_lin)) {
        throw NumericalAbort(n + 1, "sliding-mode observer diverged");
      }
      for (double v : sos.Vc_hat) {
        if (blown(v)) throw NumericalAbort(n + 1, "sliding-mode observer diverged");
      }
    }
    if (ts.has_luen &&
        (blown(lue.I_hat) || blown(lue.Vc_hat[0]) || blown(lue.Vc_hat[1]))) {
      throw NumericalAbort(n + 1, "luenberger observer diverged");
    }
  }
  return ts;
}

const ChannelMetrics& Metrics::at(const std::string& name) const {
  for (const auto& c : channels) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no metric channel " + name);
}

ChannelMetrics channel_metrics(const std::vector<double>& t,
                               const std::vector<double>& err,
                               double threshold, std::string name) {
  if (t.empty() || t.size() != err.size()) {
    throw std::invalid_argument("metrics need a nonempty series");
  }
  ChannelMetrics cm;
  cm.name = std::move(name);
  std::size_t first = err.size();
  while (first > 0 && std::abs(err[first - 1]) < threshold) --first;
  std::size_t from = 0;
  if (first < err.size()) {
    cm.convergence_time = t[first];
    from = first;
  }
  double sq = 0.0;
  double mx = 0.0;
  for (std::size_t i = from; i < err.size(); ++i) {
    sq += err[i] * err[i];
    mx = std::max(mx, std::abs(err[i]));
  }
  cm.rmse = std::sqrt(sq / static_cast<double>(err.size() - from));
  if (cm.convergence_time) cm.max_post_settle = mx;
  return cm;
}

std::vector<double> time_axis(const TimeSeries& ts) {
  std::vector<double> t;
  t.reserve(ts.records.size());
  for (const auto& r : ts.records) t.push_back(r.t);
  return t;
}

std::vector<double> error_channel(const TimeSeries& ts, ObserverKind obs, int k) {
  const bool sosml = obs == ObserverKind::kSosml;
  if (sosml ? !ts.has_sosml : !ts.has_luen) {
    throw std::invalid_argument("observer not present in time series");
  }
  if (k < 0 || k >= ts.p) throw std::out_of_range("error channel index");
  std::vector<double> e;
  e.reserve(ts.records.size());
  for (const auto& r : ts.records) {
    const ObserverSample& s = sosml ? *r.sosml : *r.luen;
    e.push_back(k == 0 ? s.e1 : s.e_V[k - 1]);
  }
  return e;
}

Metrics metrics(const TimeSeries& ts, double threshold) {
  if (ts.records.empty()) throw std::invalid_argument("metrics need a nonempty series");
  Metrics m;
  const auto t = time_axis(ts);
  for (auto [obs, on, tag] : {std::tuple{ObserverKind::kSosml, ts.has_sosml, "_sosml"},
                              std::tuple{ObserverKind::kLuenberger, ts.has_luen, "_luen"}}) {
    if (!on) continue;
    for (int k = 0; k < ts.p; ++k) {
      m.channels.push_back(channel_metrics(t, error_channel(ts, obs, k), threshold,
                                           "e" + std::to_string(k + 1) + tag));
    }
  }
  return m;
}

double voltage_rmse(const TimeSeries& ts, ObserverKind obs, double t_from) {
  double sq = 0.0;
  std::size_t n = 0;
  for (int k = 1; k < ts.p; ++k) {
    const auto e = error_channel(ts, obs, k);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (ts.records[i].t >= t_from) sq += e[i] * e[i];
    }
  }
  for (const auto& r : ts.records) n += r.t >= t_from ? 1 : 0;
  if (n == 0) throw std::invalid_argument("rmse window is empty");
  return std::sqrt(sq / static_cast<double>(n));
}

std::vector<SlidingSample> sliding_samples(const TimeSeries& ts) {
  if (!ts.has_sosml) throw std::invalid_argument("no sliding-mode observer in series");
  std::vector<SlidingSample> out;
  out.reserve(ts.records.size());
  for (const auto& r : ts.records) {
    out.push_back({r.I_meas - r.sosml->I_hat, r.sosml->l, r.sosml->phi1});
  }
  return out;
}

std::optional<double> reference_settle_time(const ScenarioConfig& cfg) {
  ScenarioConfig twin = cfg;
  twin.noise.kind = NoiseKind::kNone;
  twin.load = LoadVariation{};
  const TimeSeries ts = run_scenario(twin);
  const Metrics m = metrics(ts, cfg.settle_threshold);
  std::optional<double> latest = 0.0;
  for (const auto& c : m.channels) {
    if (c.name.rfind("e1_", 0) == 0) continue;  // current channel
    if (!c.convergence_time) return std::nullopt;
    latest = std::max(*latest, *c.convergence_time);
  }
  return latest;
}

Comparison compare_observers(ScenarioConfig cfg) {
  cfg.sosml_enabled = true;
  if (!cfg.luenberger) cfg.luenberger = LuenbergerGains::preset();
  Comparison out;
  out.t_from = reference_settle_time(cfg).value_or(0.5 * cfg.t_end);
  out.series = run_scenario(cfg);
  const auto t = time_axis(out.series);
  for (auto [obs, name] : {std::pair{ObserverKind::kSosml, "sosml"},
                           std::pair{ObserverKind::kLuenberger, "luenberger"}}) {
    std::vector<double> norm(t.size(), 0.0);
    for (int k = 1; k < out.series.p; ++k) {
      const auto e = error_channel(out.series, obs, k);
      for (std::size_t i = 0; i < e.size(); ++i) norm[i] += e[i] * e[i];
    }
    for (double& v : norm) v = std::sqrt(v);
    ComparisonRow row;
    row.observer = name;
    row.voltage_rmse = voltage_rmse(out.series, obs, out.t_from);
    row.settle_time = channel_metrics(t, norm, cfg.settle_threshold, name).convergence_time;
    out.rows.push_back(row);
  }
  return out;
}

void write_comparison(std::ostream& os, const Comparison& c) {
  os << "steady-state window: [" << fmt9(c.t_from) << ", "
     << fmt9(c.series.records.back().t) << "] s\n";
  os << "observer,voltage_rmse,settle_time\n";
  for (const auto& r : c.rows) {
    os << r.observer << ',' << fmt9(r.voltage_rmse) << ','
       << (r.settle_time ? fmt9(*r.settle_time) : "none") << '\n';
  }
}

void write_csv(std::ostream& os, const TimeSeries& ts) {
  const int p = ts.p;
  os << 't';
  for (int j = 1; j <= p; ++j) os << ",S" << j;
  for (int j = 1; j <= p; ++j) os << ",u" << j;
  os << ",I";
  for (int j = 1; j < p; ++j) os << ",Vc" << j;
  auto obs_header = [&](const char* tag, bool extra) {
    os << ",Ihat" << tag;
    for (int j = 1; j < p; ++j) os << ",Vc" << j << "hat" << tag;
    for (int j = 1; j <= p; ++j) os << ",e" << j << tag;
    if (extra) os << ",l" << tag << ",mu" << tag << ",V_lyap" << tag;
  };
  if (ts.has_sosml) obs_header("_sosml", true);
  if (ts.has_luen) obs_header("_luen", false);
  os << '\n';

  for (const auto& r : ts.records) {
    std::string line = fmt9(r.t);
    for (int s : r.mode.S) line += ',' + std::to_string(s);
    for (int u : r.mode.u) line += ',' + std::to_string(u);
    line += ',' + fmt9(r.I);
    for (double v : r.Vc) line += ',' + fmt9(v);
    auto obs_row = [&](const ObserverSample& s, bool extra) {
      line += ',' + fmt9(s.I_hat);
      for (double v : s.Vc_hat) line += ',' + fmt9(v);
      line += ',' + fmt9(s.e1);
      for (double v : s.e_V) line += ',' + fmt9(v);
      if (extra) line += ',' + fmt9(s.l) + ',' + fmt9(s.mu) + ',' + fmt9(s.V_lyap);
    };
    if (ts.has_sosml) obs_row(*r.sosml, true);
    if (ts.has_luen) obs_row(*r.luen, false);
    os << line << '\n';
  }
}

void write_metrics(std::ostream& os, const Metrics& m) {
  os << "channel,convergence_time,rmse,max_post_settle\n";
  for (const auto& c : m.channels) {
    os << c.name << ',' << (c.convergence_time ? fmt9(*c.convergence_time) : "none")
       << ',' << fmt9(c.rmse) << ','
       << (c.max_post_settle ? fmt9(*c.max_post_settle) : "none") << '\n';
  }
}

}  // namespace flycap
