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

#include "flycap/luenberger_observer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flycap {

namespace {

constexpr double kGainBound = 1e5;
constexpr double kEigenTolerance = 1e-8;

}  // namespace

Eigen::Vector3d LuenbergerGains::K(int i) const {
  switch (i) {
    case 0:
      return {kappa[0], 0.0, 0.0};
    case 1:
      return {0.0, kappa[1], kappa[2]};
    case 2:
      return {0.0, kappa[3], kappa[4]};
    case 3:
      return {0.0, kappa[5], kappa[6]};
    default:
      throw std::out_of_range("injection index must be 0..3");
  }
}

void LuenbergerGains::validate() const {
  for (double v : kappa) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("luenberger gains must be finite");
    }
  }
  if (!(kappa[0] > 0.0)) {
    throw std::invalid_argument("luenberger.kappa0 must be > 0");
  }
}

LuenbergerGains LuenbergerGains::preset() {
  LuenbergerGains g;
  g.kappa = {1e4, -1e5, 0.0, 0.0, -1e5, 0.0, 0.0};
  return g;
}

Eigen::Matrix3d LuenbergerGains::preset_lyapunov() {
  return Eigen::Vector3d(1.0, 1e-3, 1e-3).asDiagonal();
}

LuenbergerState luenberger_step(const LuenbergerState& st, double I_meas,
                                const ModeVector& m,
                                const ConverterParams& params,
                                const LuenbergerGains& gains, double dt) {
  if (params.p != 3 || m.cells() != 3) {
    throw std::invalid_argument(
        "the switched Luenberger observer is defined for three cells only");
  }
  if (!(dt > 0.0)) {
    throw std::invalid_argument("observer step requires dt > 0");
  }
  const auto& k = gains.kappa;
  const double L = params.L;
  const double u1 = m.u[0];
  const double u2 = m.u[1];
  const double u3 = m.u[2];
  const double e1 = I_meas - st.I_hat;

  LuenbergerState next;
  next.I_hat = st.I_hat +
               dt * (-(params.R / L) * st.I_hat + params.E / L * u3 -
                     st.Vc_hat[0] / L * u1 - st.Vc_hat[1] / L * u2 + k[0] * e1);
  next.Vc_hat[0] = st.Vc_hat[0] + dt * (u1 / params.c[0] * I_meas +
                                        (k[1] * u1 + k[3] * u2 + k[5] * u3) * e1);
  next.Vc_hat[1] = st.Vc_hat[1] + dt * (u2 / params.c[1] * I_meas +
                                        (k[2] * u1 + k[4] * u2 + k[6] * u3) * e1);
  return next;
}

std::array<Eigen::Matrix3d, 4> error_matrices(const ConverterParams& params,
                                              const LuenbergerGains& gains) {
  const Eigen::RowVector3d C(1.0, 0.0, 0.0);
  std::array<Eigen::Matrix3d, 4> A;
  for (auto& a : A) a.setZero();
  A[0](0, 0) = -params.R / params.L;
  A[1](0, 1) = -1.0 / params.L;
  A[2](0, 2) = -1.0 / params.L;
  for (int i = 0; i < 4; ++i) {
    A[i] -= gains.K(i) * C;
  }
  return A;
}

GainCertificate certify_gains(const LuenbergerGains& gains,
                              const ConverterParams& params,
                              const Eigen::Matrix3d& P) {
  if ((P - P.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * P.cwiseAbs().maxCoeff()) {
    throw std::invalid_argument("candidate Lyapunov matrix must be symmetric");
  }
  GainCertificate cert;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> p_eig(P);
  cert.P_min_eigenvalue = p_eig.eigenvalues().minCoeff();
  const double p_scale = p_eig.eigenvalues().cwiseAbs().maxCoeff();
  cert.P_positive = cert.P_min_eigenvalue > kEigenTolerance * p_scale;

  const auto A = error_matrices(params, gains);
  double scale = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Eigen::Matrix3d M = A[i].transpose() * P + P * A[i];
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(M);
    cert.max_eigenvalue[i] = eig.eigenvalues().maxCoeff();
    scale = std::max(scale, eig.eigenvalues().cwiseAbs().maxCoeff());
  }
  cert.tolerance = kEigenTolerance * scale;
  cert.pass = cert.P_positive &&
              std::all_of(cert.max_eigenvalue.begin(), cert.max_eigenvalue.end(),
                          [&](double v) { return v <= cert.tolerance; });
  return cert;
}

std::vector<GainCandidate> search_luenberger_gains(
    const ConverterParams& params, const std::vector<double>& kappa0_grid,
    const std::vector<double>& ratio_grid,
    const std::function<std::optional<double>(const LuenbergerGains&)>&
        objective) {
  std::vector<GainCandidate> out;
  for (double kappa0 : kappa0_grid) {
    for (double r2 : ratio_grid) {
      for (double r3 : ratio_grid) {
        LuenbergerGains g;
        g.kappa = {kappa0, -r2 / params.L, 0.0, 0.0, -r3 / params.L, 0.0, 0.0};
        if (std::abs(g.kappa[1]) > kGainBound ||
            std::abs(g.kappa[4]) > kGainBound || kappa0 > kGainBound) {
          continue;
        }
        GainCandidate cand;
        cand.gains = g;
        cand.P = Eigen::Vector3d(1.0, 1.0 / r2, 1.0 / r3).asDiagonal();
        cand.certificate = certify_gains(g, params, cand.P);
        if (!cand.certificate.pass) {
          continue;
        }
        cand.score = objective(g);
        out.push_back(std::move(cand));
      }
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const GainCandidate& a, const GainCandidate& b) {
                     if (a.score.has_value() != b.score.has_value()) {
                       return a.score.has_value();
                     }
                     return a.score.has_value() && *a.score < *b.score;
                   });
  return out;
}

}  // namespace flycap
