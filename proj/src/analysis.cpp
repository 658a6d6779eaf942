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

#include "flycap/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace flycap {

LyapunovMatrices build_matrices(const SosmlParams& prm) {
  const double l0 = prm.lambda0;
  const double a0 = prm.alpha0;
  const double kl = prm.k_lambda0;
  const double ka = prm.k_alpha0;

  LyapunovMatrices out;
  out.P << 4 * a0 + l0 * l0, l0 * kl, -l0,
           l0 * kl, kl * kl + 2 * ka, -kl,
           -l0, -kl, 2;
  out.P *= 0.5;

  out.Omega1 << l0 * l0 + 2 * a0, 0, -l0,
                0, 2 * ka + 5 * kl * kl, -3 * kl,
                -l0, -3 * kl, 1;
  out.Omega1 *= l0 / 2;

  out.Omega2 << a0 + 2 * l0 * l0, 0, 0,
                0, ka + kl * kl, -kl,
                0, -kl, 1;
  out.Omega2 *= kl;

  out.Q.setZero();
  out.Q(0, 0) = 4 * a0 + l0 * l0 + l0 * kl + l0 / 2;
  out.Q(1, 1) = 2 * ka * kl * kl + l0 * kl + kl / 2;
  out.Q(2, 2) = (l0 + kl) / 2;

  const Eigen::Vector3d p_eig =
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(out.P).eigenvalues();
  const double p_min = p_eig.minCoeff();
  const double p_max = p_eig.maxCoeff();
  const double omega1_min =
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(out.Omega1)
          .eigenvalues()
          .minCoeff();
  const double omega2_min =
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(out.Omega2)
          .eigenvalues()
          .minCoeff();
  const Eigen::Vector3d q1(-l0, -kl, 2.0);

  out.gamma1 = omega1_min / std::sqrt(p_max);
  out.gamma2_per_F = q1.norm() / std::sqrt(p_min);
  out.gamma3 = omega2_min / p_max;
  out.gamma4 = out.Q.diagonal().maxCoeff() / (2 * p_min);
  return out;
}

Condition16 check_condition16(const SosmlParams& prm) {
  Condition16 c;
  c.lhs = 4 * prm.alpha0 * prm.k_alpha0;
  c.rhs = 8 * prm.k_lambda0 * prm.k_lambda0 * prm.alpha0 +
          9 * prm.lambda0 * prm.lambda0 * prm.k_lambda0 * prm.k_lambda0;
  c.margin = c.lhs - c.rhs;
  c.pass = c.margin > 0.0;
  return c;
}

bool is_positive_definite(const Eigen::Matrix3d& M) {
  const Eigen::Vector3d eig =
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(M).eigenvalues();
  return eig.minCoeff() > 1e-10 * eig.maxCoeff() && eig.maxCoeff() > 0.0;
}

ZetaState ZetaState::from_error(double e1, double l, double phi1) {
  return {std::sqrt(l * std::abs(e1)) * signum(e1), l * e1, phi1};
}

double delta_omega(const ZetaState& z, const SosmlParams& prm) {
  const double l0 = prm.lambda0;
  const double kl = prm.k_lambda0;
  return (4 * prm.alpha0 + l0 * l0) * z.zeta1 * z.zeta1 +
         2 * l0 * kl * z.zeta1 * z.zeta2 +
         2 * prm.k_alpha0 * kl * kl * z.zeta2 * z.zeta2 -
         l0 * z.zeta1 * z.zeta3 - kl * z.zeta2 * z.zeta3;
}

double phi1_from_error_dynamics(double e1_dot, double e1, double l,
                                const SosmlParams& prm) {
  const AdaptiveGains g = gains_at(l, prm);
  return e1_dot + g.lambda * std::sqrt(std::abs(e1)) * signum(e1) +
         g.k_lambda * e1;
}

std::vector<double> lyapunov_along_trajectory(
    std::span<const SlidingSample> samples, const SosmlParams& prm) {
  const Eigen::Matrix3d P = build_matrices(prm).P;
  std::vector<double> V;
  V.reserve(samples.size());
  for (const auto& s : samples) {
    const Eigen::Vector3d z = ZetaState::from_error(s.e1, s.l, s.phi1).vector();
    V.push_back(z.dot(P * z));
  }
  return V;
}

Eigen::VectorXd excitation_vector(const ModeVector& m, double scale) {
  const int n = m.cells() - 1;
  Eigen::VectorXd psi(n);
  for (int j = 0; j < n; ++j) {
    psi(j) = std::sqrt(scale) * m.u[j];
  }
  return psi;
}

PeReport pe_check(const HybridTimeTrajectory& traj, double window,
                  double scale) {
  if (traj.empty()) {
    throw std::invalid_argument("trajectory must contain at least one interval");
  }
  if (!(window > 0.0)) {
    throw std::invalid_argument("PE window must be > 0");
  }
  if (!(scale >= 0.0)) {
    throw std::invalid_argument("PE scale must be >= 0");
  }
  const double t0 = traj.t_ini();
  const double t1 = traj.t_end();
  // Relative slack so a window equal to the span is accepted.
  const double slack = 1e-12 * (t1 - t0);
  if (window > t1 - t0 + slack) {
    throw std::invalid_argument("PE window is longer than the trajectory");
  }
  const auto& ivs = traj.intervals();
  const int n = ivs.front().mode.cells() - 1;

  // Cumulative Gram integral at every interval boundary.
  std::vector<double> bounds{t0};
  std::vector<Eigen::MatrixXd> outer;
  std::vector<Eigen::MatrixXd> cumulative{Eigen::MatrixXd::Zero(n, n)};
  PeReport report;
  for (const auto& iv : ivs) {
    const Eigen::VectorXd psi = excitation_vector(iv.mode, scale);
    report.psi_norm_bound = std::max(report.psi_norm_bound, psi.norm());
    outer.push_back(psi * psi.transpose());
    cumulative.push_back(cumulative.back() + iv.duration() * outer.back());
    bounds.push_back(iv.t_end);
  }
  auto gram_until = [&](double t) -> Eigen::MatrixXd {
    const auto it = std::upper_bound(bounds.begin(), bounds.end(), t);
    std::size_t k = static_cast<std::size_t>(it - bounds.begin());
    if (k == 0) return cumulative.front();
    if (k >= bounds.size()) return cumulative.back();
    --k;  // bounds[k] <= t < bounds[k+1]
    return cumulative[k] + (t - bounds[k]) * outer[k];
  };

  const double last_start = std::max(t0, t1 - window);
  std::vector<double> starts{t0, last_start};
  for (double b : bounds) {
    for (double s : {b, b - window}) {
      if (s >= t0 && s <= last_start) starts.push_back(s);
    }
  }
  std::sort(starts.begin(), starts.end());
  starts.erase(std::unique(starts.begin(), starts.end()), starts.end());

  report.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (double s : starts) {
    const Eigen::MatrixXd G = gram_until(std::min(s + window, t1)) - gram_until(s);
    const double lam =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(G).eigenvalues().minCoeff();
    if (lam < report.min_eigenvalue) {
      report.min_eigenvalue = lam;
      report.worst_window_start = s;
    }
  }
  // Round-off can leave a tiny negative value for a singular Gram matrix.
  report.min_eigenvalue = std::max(report.min_eigenvalue, 0.0);
  return report;
}

void write_gain_report_csv(std::ostream& os, const SosmlParams& prm) {
  const LyapunovMatrices lm = build_matrices(prm);
  const Condition16 c16 = check_condition16(prm);
  const auto old_precision = os.precision(9);
  os << "quantity,value\n";
  os << "condition16_lhs," << c16.lhs << '\n';
  os << "condition16_rhs," << c16.rhs << '\n';
  os << "condition16_margin," << c16.margin << '\n';
  os << "condition16_pass," << (c16.pass ? 1 : 0) << '\n';
  auto dump = [&](const char* name, const Eigen::Matrix3d& M) {
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        os << name << '_' << r + 1 << c + 1 << ',' << M(r, c) << '\n';
      }
    }
    const Eigen::Vector3d eig =
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(M).eigenvalues();
    for (int i = 0; i < 3; ++i) {
      os << name << "_eig" << i + 1 << ',' << eig(i) << '\n';
    }
  };
  dump("P", lm.P);
  dump("Omega1", lm.Omega1);
  dump("Omega2", lm.Omega2);
  dump("Q", lm.Q);
  os << "gamma1," << lm.gamma1 << '\n';
  os << "gamma2_per_F," << lm.gamma2_per_F << '\n';
  os << "gamma3," << lm.gamma3 << '\n';
  os << "gamma4," << lm.gamma4 << '\n';
  os.precision(old_precision);
}

}  // namespace flycap
