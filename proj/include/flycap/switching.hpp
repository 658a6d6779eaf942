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

#ifndef FLYCAP_SWITCHING_HPP_
#define FLYCAP_SWITCHING_HPP_

#include <ostream>
#include <vector>

#include "flycap/converter.hpp"

namespace flycap {

/// Phase-shifted PWM with rising sawtooth carriers.
///
/// The carrier of cell j (zero-based) is frac(f_chop * t - j * phase_shift);
/// the cell is on while its carrier is strictly below duty[j].
/// The duty cycle and phase shift of the reference runs are not published;
/// the defaults (0.5 and 1/p) are a choice.
struct PwmConfig {
  double f_chop = 5000.0;
  std::vector<double> duty{0.5, 0.5, 0.5};
  double phase_shift = 1.0 / 3.0;

  double period() const { return 1.0 / f_chop; }
  void validate(int p) const;

  static PwmConfig defaults(int p);
};

/// Switch pattern at time t.  Deterministic in t.
ModeVector pwm_mode_at(double t, const PwmConfig& cfg, int p);

/// A constant-mode time interval [t_start, t_end).
struct ModeInterval {
  double t_start = 0.0;
  double t_end = 0.0;
  ModeVector mode;

  double duration() const { return t_end - t_start; }
};

/// Contiguous sequence of constant-mode intervals.
class HybridTimeTrajectory {
 public:
  HybridTimeTrajectory() = default;
  explicit HybridTimeTrajectory(std::vector<ModeInterval> intervals);

  /// Unit-length intervals, one per listed switch vector.
  static HybridTimeTrajectory from_switches(
      const std::vector<std::vector<int>>& switch_list, double dwell = 1.0);

  const std::vector<ModeInterval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  std::size_t size() const { return intervals_.size(); }
  double t_ini() const;
  double t_end() const;

  /// Mode active at t (t in [t_ini, t_end]; t_end maps to the last interval).
  const ModeVector& mode_at(double t) const;

  /// Appends `next`, which must start where this trajectory ends.  Adjacent
  /// intervals carrying the same mode are merged.
  void append(const HybridTimeTrajectory& next);

  /// Throws std::logic_error if intervals are empty-length or not contiguous.
  void validate() const;

  bool operator==(const HybridTimeTrajectory&) const = default;

 private:
  std::vector<ModeInterval> intervals_;
};

/// Maximal constant-mode segments of the PWM pattern on [t_ini, t_end].
/// Carrier crossings are located analytically.
HybridTimeTrajectory trajectory_from_pwm(const PwmConfig& cfg, double t_ini,
                                         double t_end, int p);

/// CSV with columns t_start,t_end,S1..Sp,u1..up.
void write_trajectory_csv(std::ostream& os, const HybridTimeTrajectory& traj);

}  // namespace flycap

#endif  // FLYCAP_SWITCHING_HPP_
