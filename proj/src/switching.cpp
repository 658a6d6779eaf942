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

#include "flycap/switching.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <stdexcept>

namespace flycap {

namespace {

// Carrier phases are rounded to this grid before comparison so that
// crossings landing exactly on a sample time resolve the same way
// regardless of floating-point noise in f * t.
constexpr double kPhaseQuantum = 1e-9;

double carrier_phase(double t, const PwmConfig& cfg, int cell) {
  double phase = cfg.f_chop * t - cell * cfg.phase_shift;
  phase -= std::floor(phase);
  phase = std::round(phase / kPhaseQuantum) * kPhaseQuantum;
  if (phase >= 1.0) {
    phase -= 1.0;
  }
  return phase;
}

}  // namespace

void PwmConfig::validate(int p) const {
  if (!(f_chop > 0.0) || !std::isfinite(f_chop)) {
    throw std::invalid_argument("pwm.f_chop must be > 0");
  }
  if (static_cast<int>(duty.size()) != p) {
    throw std::invalid_argument("pwm.duty must list one ratio per cell");
  }
  for (double d : duty) {
    if (!(d >= 0.0 && d <= 1.0)) {
      throw std::invalid_argument("pwm.duty entries must lie in [0, 1]");
    }
  }
  if (!(phase_shift >= 0.0 && phase_shift < 1.0)) {
    throw std::invalid_argument("pwm.phase_shift must lie in [0, 1)");
  }
}

PwmConfig PwmConfig::defaults(int p) {
  PwmConfig cfg;
  cfg.duty.assign(static_cast<std::size_t>(p), 0.5);
  cfg.phase_shift = 1.0 / p;
  return cfg;
}

ModeVector pwm_mode_at(double t, const PwmConfig& cfg, int p) {
  std::vector<int> S(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) {
    S[j] = carrier_phase(t, cfg, j) < cfg.duty[j] ? 1 : 0;
  }
  return derive_inputs(S);
}

HybridTimeTrajectory::HybridTimeTrajectory(std::vector<ModeInterval> intervals)
    : intervals_(std::move(intervals)) {
  validate();
}

HybridTimeTrajectory HybridTimeTrajectory::from_switches(
    const std::vector<std::vector<int>>& switch_list, double dwell) {
  if (!(dwell > 0.0)) {
    throw std::invalid_argument("dwell time must be > 0");
  }
  std::vector<ModeInterval> intervals;
  double t = 0.0;
  for (const auto& S : switch_list) {
    intervals.push_back({t, t + dwell, derive_inputs(S)});
    t += dwell;
  }
  return HybridTimeTrajectory(std::move(intervals));
}

double HybridTimeTrajectory::t_ini() const {
  if (intervals_.empty()) {
    throw std::logic_error("empty trajectory has no start time");
  }
  return intervals_.front().t_start;
}

double HybridTimeTrajectory::t_end() const {
  if (intervals_.empty()) {
    throw std::logic_error("empty trajectory has no end time");
  }
  return intervals_.back().t_end;
}

const ModeVector& HybridTimeTrajectory::mode_at(double t) const {
  if (intervals_.empty() || t < t_ini() || t > t_end()) {
    throw std::out_of_range("time outside trajectory span");
  }
  auto it = std::upper_bound(
      intervals_.begin(), intervals_.end(), t,
      [](double value, const ModeInterval& iv) { return value < iv.t_end; });
  if (it == intervals_.end()) {
    return intervals_.back().mode;
  }
  return it->mode;
}

void HybridTimeTrajectory::append(const HybridTimeTrajectory& next) {
  if (next.empty()) {
    return;
  }
  if (!intervals_.empty() && next.t_ini() != t_end()) {
    throw std::invalid_argument("appended trajectory must start at t_end");
  }
  for (const auto& iv : next.intervals_) {
    if (!intervals_.empty() && intervals_.back().mode == iv.mode) {
      intervals_.back().t_end = iv.t_end;
    } else {
      intervals_.push_back(iv);
    }
  }
}

void HybridTimeTrajectory::validate() const {
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    const auto& iv = intervals_[i];
    if (!(iv.t_start < iv.t_end)) {
      throw std::logic_error("interval " + std::to_string(i) +
                             " has nonpositive length");
    }
    if (i > 0 && intervals_[i - 1].t_end != iv.t_start) {
      throw std::logic_error("intervals " + std::to_string(i - 1) + " and " +
                             std::to_string(i) + " are not contiguous");
    }
  }
}

HybridTimeTrajectory trajectory_from_pwm(const PwmConfig& cfg, double t_ini,
                                         double t_end, int p) {
  cfg.validate(p);
  if (!(t_ini < t_end)) {
    throw std::invalid_argument("trajectory window must have t_ini < t_end");
  }
  const double T = cfg.period();

  // Rising edges at phase 0, falling edges at phase duty.
  std::vector<double> cuts{t_ini, t_end};
  for (int j = 0; j < p; ++j) {
    const double offset = j * cfg.phase_shift;
    const auto n_lo = static_cast<long long>(std::floor(t_ini / T - offset)) - 1;
    const auto n_hi = static_cast<long long>(std::ceil(t_end / T - offset)) + 1;
    for (long long n = n_lo; n <= n_hi; ++n) {
      for (double edge : {(n + offset) * T, (n + offset + cfg.duty[j]) * T}) {
        if (edge > t_ini && edge < t_end) {
          cuts.push_back(edge);
        }
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  const double merge_tol = 1e-12 * T;
  std::vector<double> points;
  for (double c : cuts) {
    if (points.empty() || c - points.back() > merge_tol) {
      points.push_back(c);
    }
  }
  points.back() = t_end;

  std::vector<ModeInterval> intervals;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double a = points[i];
    const double b = points[i + 1];
    ModeVector mode = pwm_mode_at(0.5 * (a + b), cfg, p);
    if (!intervals.empty() && intervals.back().mode == mode) {
      intervals.back().t_end = b;
    } else {
      intervals.push_back({a, b, std::move(mode)});
    }
  }
  return HybridTimeTrajectory(std::move(intervals));
}

void write_trajectory_csv(std::ostream& os, const HybridTimeTrajectory& traj) {
  if (traj.empty()) {
    return;
  }
  const int p = traj.intervals().front().mode.cells();
  os << "t_start,t_end";
  for (int j = 1; j <= p; ++j) os << ",S" << j;
  for (int j = 1; j <= p; ++j) os << ",u" << j;
  os << '\n';
  const auto old_precision = os.precision(9);
  for (const auto& iv : traj.intervals()) {
    os << iv.t_start << ',' << iv.t_end;
    for (int s : iv.mode.S) os << ',' << s;
    for (int u : iv.mode.u) os << ',' << u;
    os << '\n';
  }
  os.precision(old_precision);
}

}  // namespace flycap
