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

#ifndef FLYCAP_LUENBERGER_OBSERVER_HPP_
#define FLYCAP_LUENBERGER_OBSERVER_HPP_

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "flycap/converter.hpp"

namespace flycap {

/// Output-injection gains of the three-cell switched Luenberger observer.
///
/// kappa[0] drives the current estimate.  The voltage estimates receive
/// (kappa1*u1 + kappa3*u2 + kappa5*u3) e1 and (kappa2*u1 + kappa4*u2 +
/// kappa6*u3) e1 respectively.
struct LuenbergerGains {
  std::array<double, 7> kappa{};

  /// Injection vector K_i (i = 0..3) acting on the error e1.
  Eigen::Vector3d K(int i) const;
  void validate() const;

  /// Gains from the certified grid search (see search_luenberger_gains).
  static LuenbergerGains preset();
  /// Diagonal Lyapunov matrix certifying preset().
  static Eigen::Matrix3d preset_lyapunov();
};

struct LuenbergerState {
  double I_hat = 0.0;
  std::array<double, 2> Vc_hat{};
};

/// One explicit step.  Unlike the sliding-mode observer, the resistive term
/// uses the estimated current.
LuenbergerState luenberger_step(const LuenbergerState& st, double I_meas,
                                const ModeVector& m,
                                const ConverterParams& params,
                                const LuenbergerGains& gains, double dt);

/// Closed-loop error matrices A_i - K_i C for i = 0..3, so that
/// e' = (Ã0 + u1 Ã1 + u2 Ã2 + u3 Ã3) e.  The capacitor rows of A_i vanish
/// because the observer integrates the measured current.
std::array<Eigen::Matrix3d, 4> error_matrices(const ConverterParams& params,
                                              const LuenbergerGains& gains);

struct GainCertificate {
  bool pass = false;
  bool P_positive = false;
  double P_min_eigenvalue = 0.0;
  // Largest eigenvalue of Ã_i^T P + P Ã_i; must not exceed `tolerance`.
  std::array<double, 4> max_eigenvalue{};
  double tolerance = 0.0;
};

/// Checks P > 0 and Ã_i^T P + P Ã_i <= 0 for i = 0..3.  Eigenvalues up to
/// 1e-8 times the largest eigenvalue magnitude over the four forms count as
/// zero.  Throws std::invalid_argument if P is not symmetric.
GainCertificate certify_gains(const LuenbergerGains& gains,
                              const ConverterParams& params,
                              const Eigen::Matrix3d& P);

struct GainCandidate {
  LuenbergerGains gains;
  Eigen::Matrix3d P;
  GainCertificate certificate;
  std::optional<double> score;  // objective value, lower is better
};

/// Coarse grid search over kappa0 and diagonal Lyapunov matrices
/// P = diag(1, 1/r2, 1/r3).  With a diagonal P the cross terms only cancel
/// for kappa1 = -r2/L, kappa4 = -r3/L and the remaining voltage gains at
/// zero, so each grid point yields one candidate; candidates whose gains
/// leave [-1e5, 1e5] are skipped.  Every certified candidate is scored by
/// `objective` (nullopt = unusable) and the lowest score wins.
std::vector<GainCandidate> search_luenberger_gains(
    const ConverterParams& params, const std::vector<double>& kappa0_grid,
    const std::vector<double>& ratio_grid,
    const std::function<std::optional<double>(const LuenbergerGains&)>&
        objective);

}  // namespace flycap

#endif  // FLYCAP_LUENBERGER_OBSERVER_HPP_
