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

#ifndef FLYCAP_OBSERVABILITY_HPP_
#define FLYCAP_OBSERVABILITY_HPP_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "flycap/converter.hpp"
#include "flycap/switching.hpp"

namespace flycap {

/// Relative singular-value threshold used for numerical rank.
inline constexpr double kRankTolerance = 1e-9;

struct ObservabilityReport {
  Eigen::MatrixXd O;  // rows C, CA, ..., CA^{p-1}
  Eigen::VectorXd singular_values;
  int rank = 0;
  int observable_subspace_dim = 0;
};

/// Classical (frozen-mode) observability of the load-current output.
/// Singular values at or below tol * sigma_max count as zero.
ObservabilityReport observability_matrix(const ModeVector& m,
                                         const ConverterParams& params,
                                         double tol = kRankTolerance);

/// State coordinates reconstructible from the current while `m` is active:
/// the current itself plus Vc_j for every u_j != 0.
std::vector<int> observable_coordinates(const ModeVector& m);

/// Selection of z-coordinates; `rows[r]` is the position in z picked by row r.
struct Projection {
  std::vector<int> rows;

  Eigen::MatrixXd matrix(int z_dim) const;
  /// Positions in z not selected by this projection.
  std::vector<int> complement(int z_dim) const;
};

struct IntervalWitness {
  ModeInterval interval;
  std::vector<int> observable;  // state coordinates
  Projection projection;        // over z positions
};

struct ZObservabilityVerdict {
  bool pass = false;
  int stacked_rank = 0;
  int z_dim = 0;
  std::string reason;  // first violated condition, empty on pass
  std::vector<int> z_coordinates;
  std::vector<IntervalWitness> witnesses;
};

/// Sufficient check for observability of z = x[z_coordinates] along `traj`:
/// each interval contributes a projection onto the z-coordinates observable
/// there, the stacked projections must reach rank dim(z), and every
/// coordinate left out of an interval's projection must have identically
/// zero dynamics on that interval.
///
/// Coordinate 0 (the load current) is measured directly and is rejected.
/// An empty `z_coordinates` means all capacitor voltages.
ZObservabilityVerdict z_observability_check(
    const HybridTimeTrajectory& traj, std::vector<int> z_coordinates,
    const ConverterParams& params);

/// Human-readable report: per-interval mode, observable set, projection rows.
std::string format_verdict(const ZObservabilityVerdict& verdict);

/// Table of S, u, rank(O) and observable set for all modes (p = 3).
std::string format_rank_table(const ConverterParams& params);

}  // namespace flycap

#endif  // FLYCAP_OBSERVABILITY_HPP_
