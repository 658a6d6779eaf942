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

#ifndef FLYCAP_CONVERTER_HPP_
#define FLYCAP_CONVERTER_HPP_

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace flycap {

/// Physical constants of a p-cell flying-capacitor converter on an RL load.
///
/// `c` holds the p-1 flying capacitances, ordered from the source side.
struct ConverterParams {
  double E = 150.0;   // source voltage [V]
  double R = 131.0;   // load resistance [Ohm]
  double L = 10e-3;   // load inductance [H]
  std::vector<double> c{40e-6, 40e-6};  // flying capacitors [F]
  int p = 3;          // number of commutation cells

  /// Throws std::invalid_argument naming the first violated invariant.
  void validate() const;

  /// Three-cell bench used throughout the examples and bundled configs.
  static ConverterParams nominal();
};

/// Switch states S (one per cell) and the derived inputs u.
///
/// u_j = S_{j+1} - S_j for j < p, u_p = S_p.  Indices are zero-based in code,
/// so u[j] = S[j+1] - S[j] and u[p-1] = S[p-1].
struct ModeVector {
  std::vector<int> S;
  std::vector<int> u;

  int cells() const { return static_cast<int>(S.size()); }
  bool operator==(const ModeVector&) const = default;
};

/// Continuous plant state [I, Vc1, ..., Vc(p-1)] at time t.
struct PlantState {
  double I = 0.0;
  std::vector<double> Vc;
  double t = 0.0;

  Eigen::VectorXd to_vector() const;
  static PlantState from_vector(const Eigen::VectorXd& x, double t = 0.0);
};

/// Affine form x' = A x + B, y = C x for a fixed mode.
struct SystemMatrices {
  Eigen::MatrixXd A;
  Eigen::VectorXd B;
  Eigen::RowVectorXd C;
};

/// Builds the mode vector from switch states; entries must be 0 or 1.
ModeVector derive_inputs(std::span<const int> S);

/// Same, additionally checking the length against `params.p`.
ModeVector derive_inputs(std::span<const int> S, const ConverterParams& params);

/// Recovers S from u by summing backwards from u_p.
std::vector<int> switches_from_inputs(std::span<const int> u);

/// Right-hand side of the instantaneous converter model.
Eigen::VectorXd dynamics(const PlantState& x, const ModeVector& m,
                         const ConverterParams& params);

/// Same with an explicit load resistance (used for load-variation runs).
Eigen::VectorXd dynamics(const Eigen::VectorXd& x, const ModeVector& m,
                         const ConverterParams& params, double R_actual);

SystemMatrices system_matrices(const ModeVector& m,
                               const ConverterParams& params);

/// One row of the three-cell mode table.
struct ModeTableRow {
  int index = 0;
  ModeVector mode;
  std::vector<std::string> observable;  // e.g. {"I", "Vc1"}
};

/// All 2^p switch combinations in binary order with their observable states.
/// Only p = 3 is supported.
std::vector<ModeTableRow> mode_table(int p = 3);

/// Name of state coordinate `k` ("I", "Vc1", ...).
std::string state_name(int k);

}  // namespace flycap

#endif  // FLYCAP_CONVERTER_HPP_
