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

#ifndef FLYCAP_SIM_HPP_
#define FLYCAP_SIM_HPP_

#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "flycap/analysis.hpp"
#include "flycap/converter.hpp"
#include "flycap/luenberger_observer.hpp"
#include "flycap/sosml_observer.hpp"
#include "flycap/switching.hpp"

namespace flycap {

enum class NoiseKind { kNone, kUniform, kGaussian };

struct NoiseConfig {
  NoiseKind kind = NoiseKind::kNone;
  // Uniform: half width of [-a, a].  Gaussian: standard deviation.
  double amplitude = 0.02;
  std::uint64_t seed = 1;
};

/// Step change of the plant resistance: R_actual = R * R_factor for t >= t_switch.
struct LoadVariation {
  double t_switch = std::numeric_limits<double>::infinity();
  double R_factor = 1.0;
};

struct InitialEstimates {
  double I_hat = 0.0;
  std::vector<double> Vc_hat{0.0, 0.0};
};

struct ScenarioConfig {
  ConverterParams params;
  PwmConfig pwm;
  SosmlParams sosml;
  bool sosml_enabled = true;
  std::optional<LuenbergerGains> luenberger;
  double t_end = 0.1;
  double dt = 5e-6;
  PlantState x0{0.0, {5.0, 10.0}, 0.0};
  InitialEstimates observer_x0;
  NoiseConfig noise;
  LoadVariation load;
  double settle_threshold = 0.5;  // [V], used by metrics()

  /// Throws std::invalid_argument naming the violated invariant.
  void validate() const;
  std::size_t steps() const;  // floor(t_end / dt)

  /// Bench parameters, Vc(0) = (5, 10) V, zero estimates, both observers,
  /// no noise, no load step.
  static ScenarioConfig nominal();
};

class NumericalAbort : public std::runtime_error {
 public:
  NumericalAbort(std::size_t step, const std::string& what);
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

/// Portable measurement-noise source: mt19937_64 with the raw output mapped
/// to doubles by hand, so sequences match across standard libraries.
class NoiseSource {
 public:
  explicit NoiseSource(const NoiseConfig& cfg);
  double next();

 private:
  double unit();  // [0, 1)

  NoiseConfig cfg_;
  std::mt19937_64 rng_;
};

struct ObserverSample {
  double I_hat = 0.0;
  std::vector<double> Vc_hat;
  double e1 = 0.0;             // I - I_hat (true current)
  std::vector<double> e_V;     // Vc - Vc_hat
  // Sliding-mode observer only (NaN for the linear one).
  double l = std::numeric_limits<double>::quiet_NaN();
  double mu = std::numeric_limits<double>::quiet_NaN();
  double phi1 = std::numeric_limits<double>::quiet_NaN();
  double V_lyap = std::numeric_limits<double>::quiet_NaN();
  bool in_dead_zone = false;
};

struct StepRecord {
  double t = 0.0;
  ModeVector mode;
  double I = 0.0;
  std::vector<double> Vc;
  double I_meas = 0.0;
  std::optional<ObserverSample> sosml;
  std::optional<ObserverSample> luen;
};

struct TimeSeries {
  int p = 3;
  double dt = 0.0;
  bool has_sosml = false;
  bool has_luen = false;
  std::vector<StepRecord> records;
};

/// Fixed-step run.  Record n holds the state at t = n dt together with the
/// mode and observer correction applied over [t, t + dt).
TimeSeries run_scenario(const ScenarioConfig& cfg);

enum class ObserverKind { kSosml, kLuenberger };

struct ChannelMetrics {
  std::string name;
  std::optional<double> convergence_time;  // absent if never settled
  double rmse = 0.0;                       // post-convergence, else whole run
  std::optional<double> max_post_settle;
};

struct Metrics {
  std::vector<ChannelMetrics> channels;
  const ChannelMetrics& at(const std::string& name) const;
};

ChannelMetrics channel_metrics(const std::vector<double>& t,
                               const std::vector<double>& err,
                               double threshold, std::string name);

/// e1, e2, ... per enabled observer, named e<k>_sosml / e<k>_luen.
Metrics metrics(const TimeSeries& ts, double threshold);

/// Error channel k (0 = current, j >= 1 = Vc_j) of one observer.
std::vector<double> error_channel(const TimeSeries& ts, ObserverKind obs, int k);
std::vector<double> time_axis(const TimeSeries& ts);

/// sqrt(mean ||e_V||^2) over records with t >= t_from.
double voltage_rmse(const TimeSeries& ts, ObserverKind obs, double t_from);

std::vector<SlidingSample> sliding_samples(const TimeSeries& ts);

/// Latest voltage-error convergence time over the enabled observers, taken
/// from a twin run of `cfg` without noise and without load step.  Absent if
/// some voltage channel never settles.
std::optional<double> reference_settle_time(const ScenarioConfig& cfg);

struct ComparisonRow {
  std::string observer;
  double voltage_rmse = 0.0;
  std::optional<double> settle_time;  // of ||e_V|| in this run
};

struct Comparison {
  double t_from = 0.0;  // steady-state window is [t_from, t_end]
  std::vector<ComparisonRow> rows;
  TimeSeries series;
};

/// Runs both observers on the same measurements and ranks their voltage
/// RMSE over the steady-state window.  The window starts at
/// reference_settle_time(), or at t_end / 2 when that is absent.
Comparison compare_observers(ScenarioConfig cfg);
void write_comparison(std::ostream& os, const Comparison& c);

void write_csv(std::ostream& os, const TimeSeries& ts);
void write_metrics(std::ostream& os, const Metrics& m);

}  // namespace flycap

#endif  // FLYCAP_SIM_HPP_
