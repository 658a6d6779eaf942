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

#include "flycap/converter.hpp"

#include <cmath>
#include <stdexcept>

namespace flycap {

void ConverterParams::validate() const {
  if (!(E > 0.0) || !std::isfinite(E)) {
    throw std::invalid_argument("plant.E must be > 0");
  }
  if (!(R > 0.0) || !std::isfinite(R)) {
    throw std::invalid_argument("plant.R must be > 0");
  }
  if (!(L > 0.0) || !std::isfinite(L)) {
    throw std::invalid_argument("plant.L must be > 0");
  }
  if (p < 2) {
    throw std::invalid_argument("plant.p must be >= 2");
  }
  if (static_cast<int>(c.size()) != p - 1) {
    throw std::invalid_argument("plant.c must list p-1 capacitances");
  }
  for (double cj : c) {
    if (!(cj > 0.0) || !std::isfinite(cj)) {
      throw std::invalid_argument("plant.c entries must be > 0");
    }
  }
}

ConverterParams ConverterParams::nominal() { return ConverterParams{}; }

Eigen::VectorXd PlantState::to_vector() const {
  Eigen::VectorXd x(static_cast<Eigen::Index>(Vc.size()) + 1);
  x(0) = I;
  for (std::size_t j = 0; j < Vc.size(); ++j) {
    x(static_cast<Eigen::Index>(j) + 1) = Vc[j];
  }
  return x;
}

PlantState PlantState::from_vector(const Eigen::VectorXd& x, double t) {
  PlantState s;
  s.I = x(0);
  s.Vc.assign(x.data() + 1, x.data() + x.size());
  s.t = t;
  return s;
}

ModeVector derive_inputs(std::span<const int> S) {
  if (S.empty()) {
    throw std::invalid_argument("switch vector must not be empty");
  }
  ModeVector m;
  m.S.assign(S.begin(), S.end());
  for (int s : m.S) {
    if (s != 0 && s != 1) {
      throw std::invalid_argument("switch states must be 0 or 1");
    }
  }
  const std::size_t p = m.S.size();
  m.u.resize(p);
  for (std::size_t j = 0; j + 1 < p; ++j) {
    m.u[j] = m.S[j + 1] - m.S[j];
  }
  m.u[p - 1] = m.S[p - 1];
  return m;
}

ModeVector derive_inputs(std::span<const int> S, const ConverterParams& params) {
  if (static_cast<int>(S.size()) != params.p) {
    throw std::invalid_argument("switch vector length " +
                                std::to_string(S.size()) +
                                " does not match p = " +
                                std::to_string(params.p));
  }
  return derive_inputs(S);
}

std::vector<int> switches_from_inputs(std::span<const int> u) {
  if (u.empty()) {
    throw std::invalid_argument("input vector must not be empty");
  }
  const std::size_t p = u.size();
  std::vector<int> S(p);
  S[p - 1] = u[p - 1];
  for (std::size_t j = p - 1; j-- > 0;) {
    S[j] = S[j + 1] - u[j];
  }
  return S;
}

namespace {

void check_dims(std::size_t n_state, const ModeVector& m,
                const ConverterParams& params) {
  const auto p = static_cast<std::size_t>(params.p);
  if (m.u.size() != p || n_state != p) {
    throw std::invalid_argument("state/mode dimensions do not match p");
  }
}

}  // namespace

Eigen::VectorXd dynamics(const Eigen::VectorXd& x, const ModeVector& m,
                         const ConverterParams& params, double R_actual) {
  check_dims(static_cast<std::size_t>(x.size()), m, params);
  const int p = params.p;
  const double L = params.L;
  Eigen::VectorXd dx(p);
  double dI = -(R_actual / L) * x(0) + (params.E / L) * m.u[p - 1];
  for (int j = 0; j < p - 1; ++j) {
    dI -= x(j + 1) / L * m.u[j];
    dx(j + 1) = x(0) / params.c[j] * m.u[j];
  }
  dx(0) = dI;
  return dx;
}

Eigen::VectorXd dynamics(const PlantState& x, const ModeVector& m,
                         const ConverterParams& params) {
  return dynamics(x.to_vector(), m, params, params.R);
}

SystemMatrices system_matrices(const ModeVector& m,
                               const ConverterParams& params) {
  const int p = params.p;
  check_dims(static_cast<std::size_t>(p), m, params);
  SystemMatrices sm;
  sm.A = Eigen::MatrixXd::Zero(p, p);
  sm.B = Eigen::VectorXd::Zero(p);
  sm.C = Eigen::RowVectorXd::Zero(p);
  sm.A(0, 0) = -params.R / params.L;
  for (int j = 0; j < p - 1; ++j) {
    sm.A(0, j + 1) = -m.u[j] / params.L;
    sm.A(j + 1, 0) = m.u[j] / params.c[j];
  }
  sm.B(0) = params.E / params.L * m.u[p - 1];
  sm.C(0) = 1.0;
  return sm;
}

std::string state_name(int k) {
  return k == 0 ? std::string("I") : "Vc" + std::to_string(k);
}

std::vector<ModeTableRow> mode_table(int p) {
  if (p != 3) {
    throw std::invalid_argument(
        "mode table labels are defined for three-cell converters only");
  }
  std::vector<ModeTableRow> rows;
  for (int index = 0; index < (1 << p); ++index) {
    // Binary order with S1 as the most significant bit.
    std::vector<int> S(p);
    for (int j = 0; j < p; ++j) {
      S[j] = (index >> (p - 1 - j)) & 1;
    }
    ModeTableRow row;
    row.index = index;
    row.mode = derive_inputs(S);
    row.observable.push_back(state_name(0));
    for (int j = 0; j < p - 1; ++j) {
      if (row.mode.u[j] != 0) {
        row.observable.push_back(state_name(j + 1));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace flycap
