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

#include "flycap/sosml_observer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flycap {

void SosmlParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || std::isnan(v)) {
      throw std::invalid_argument(std::string("sosml.") + name + " must be > 0");
    }
  };
  positive(lambda0, "lambda0");
  positive(alpha0, "alpha0");
  positive(k_lambda0, "k_lambda0");
  positive(k_alpha0, "k_alpha0");
  positive(k, "k");
  positive(kappa, "kappa");
  positive(l_init, "l_init");
  positive(eps_dz, "eps_dz");
  if (!(l_max >= l_init)) {
    throw std::invalid_argument("sosml.l_max must be >= sosml.l_init");
  }
}

SosmlParams SosmlParams::published() { return SosmlParams{}; }

SosmlParams SosmlParams::certified() {
  SosmlParams prm;
  prm.k_alpha0 = 30.0;
  return prm;
}

AdaptiveGains gains_at(double l, const SosmlParams& prm) {
  return {prm.lambda0 * std::sqrt(l), prm.alpha0 * l, prm.k_lambda0 * l,
          prm.k_alpha0 * l * l};
}

SosmlState SosmlState::initial(double I_hat, std::vector<double> Vc_hat,
                               const SosmlParams& prm) {
  SosmlState st;
  st.I_hat = I_hat;
  st.Vc_hat = std::move(Vc_hat);
  st.l = prm.l_init;
  return st;
}

double mu(double e1, const SosmlState& st, const SosmlParams& prm) {
  const AdaptiveGains g = gains_at(st.l, prm);
  return g.lambda * std::sqrt(std::abs(e1)) * signum(e1) +
         g.alpha * st.sigma_sign + g.k_lambda * e1 + g.k_alpha * st.sigma_lin;
}

SosmlState observer_step(const SosmlState& st, double I_meas,
                         const ModeVector& m, const ConverterParams& params,
                         const SosmlParams& prm, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("observer step requires dt > 0");
  }
  const int p = params.p;
  if (m.cells() != p || static_cast<int>(st.Vc_hat.size()) != p - 1) {
    throw std::invalid_argument("observer state/mode dimensions do not match p");
  }
  const double L = params.L;
  const double e1 = I_meas - st.I_hat;
  const bool inside = std::abs(e1) <= prm.eps_dz;
  const double correction = mu(e1, st, prm);

  SosmlState next = st;
  double dI = -(params.R / L) * I_meas + (params.E / L) * m.u[p - 1] + correction;
  for (int j = 0; j < p - 1; ++j) {
    dI -= st.Vc_hat[j] / L * m.u[j];
    const double k_j = inside ? -prm.kappa * m.u[j] : 0.0;
    next.Vc_hat[j] += dt * (m.u[j] / params.c[j] * I_meas + k_j * correction);
  }
  next.I_hat += dt * dI;
  next.sigma_sign += signum(e1) * dt;
  next.sigma_lin += e1 * dt;
  if (!inside) {
    next.l = std::min(st.l + prm.k * dt, prm.l_max);
  }
  next.last_mu = correction;
  next.last_e1 = e1;
  next.in_dead_zone = inside;
  return next;
}

double equivalent_injection(std::span<const double> e_V, const ModeVector& m,
                            const ConverterParams& params) {
  if (static_cast<int>(e_V.size()) != m.cells() - 1) {
    throw std::invalid_argument("voltage error size must be p-1");
  }
  double value = 0.0;
  for (std::size_t j = 0; j < e_V.size(); ++j) {
    value -= m.u[j] / params.L * e_V[j];
  }
  return value;
}

}  // namespace flycap
