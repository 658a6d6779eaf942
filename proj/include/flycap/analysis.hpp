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

#ifndef FLYCAP_ANALYSIS_HPP_
#define FLYCAP_ANALYSIS_HPP_

#include <ostream>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "flycap/sosml_observer.hpp"
#include "flycap/switching.hpp"

namespace flycap {

/// Matrices of the quadratic Lyapunov certificate for the sliding-mode
/// error loop, written in the scaled coordinates zeta (see ZetaState).
struct LyapunovMatrices {
  Eigen::Matrix3d P;
  Eigen::Matrix3d Omega1;
  Eigen::Matrix3d Omega2;
  Eigen::Matrix3d Q;  // diagonal

  // Decay constants of the differential inequality.  gamma2 is proportional
  // to the unknown perturbation bound F, so only its coefficient is reported:
  // gamma2 = gamma2_per_F * F.
  double gamma1 = 0.0;
  double gamma2_per_F = 0.0;
  double gamma3 = 0.0;
  double gamma4 = 0.0;
};

LyapunovMatrices build_matrices(const SosmlParams& prm);

struct Condition16 {
  bool pass = false;
  double lhs = 0.0;     // 4 alpha0 k_alpha0
  double rhs = 0.0;     // 8 k_lambda0^2 alpha0 + 9 lambda0^2 k_lambda0^2
  double margin = 0.0;  // lhs - rhs
};

/// Gain condition under which Omega1 (and hence the certificate) is
/// positive definite: 4 a0 ka0 > 8 kl0^2 a0 + 9 l0^2 kl0^2.
Condition16 check_condition16(const SosmlParams& prm);

/// min eigenvalue > 1e-10 * max eigenvalue.
bool is_positive_definite(const Eigen::Matrix3d& M);

/// Scaled error coordinates:
/// zeta1 = sqrt(l |e1|) sign(e1), zeta2 = l e1, zeta3 = phi1.
struct ZetaState {
  double zeta1 = 0.0;
  double zeta2 = 0.0;
  double zeta3 = 0.0;

  static ZetaState from_error(double e1, double l, double phi1);
  Eigen::Vector3d vector() const { return {zeta1, zeta2, zeta3}; }
};

/// Remainder term bounded by zeta^T Q zeta in the certificate derivation.
double delta_omega(const ZetaState& z, const SosmlParams& prm);

/// One observer sample needed to evaluate the certificate.
struct SlidingSample {
  double e1 = 0.0;
  double l = 1.0;
  double phi1 = 0.0;
};

/// phi1 = e1' + lambda |e1|^(1/2) sign(e1) + k_lambda e1: the part of the
/// current-error derivative not produced by the two proportional terms.
double phi1_from_error_dynamics(double e1_dot, double e1, double l,
                                const SosmlParams& prm);

/// V = zeta^T P zeta for every sample.
std::vector<double> lyapunov_along_trajectory(
    std::span<const SlidingSample> samples, const SosmlParams& prm);

struct PeReport {
  double min_eigenvalue = 0.0;
  double worst_window_start = 0.0;
  double psi_norm_bound = 0.0;  // sup of ||Psi|| over the trajectory
};

/// Excitation vector Psi = sqrt(scale) * (u1, ..., u_{p-1}).
Eigen::VectorXd excitation_vector(const ModeVector& m, double scale);

/// Smallest eigenvalue of the windowed Gram integral of Psi Psi^T, minimised
/// over all window starts in [t_ini, t_end - window].  The minimum over
/// starts is attained where a window edge meets a mode switch, so only those
/// starts are evaluated.
PeReport pe_check(const HybridTimeTrajectory& traj, double window,
                  double scale);

/// CSV export (quantity,value) of matrices, eigenvalues and margins.
void write_gain_report_csv(std::ostream& os, const SosmlParams& prm);

}  // namespace flycap

#endif  // FLYCAP_ANALYSIS_HPP_
