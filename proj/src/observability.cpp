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

#include "flycap/observability.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace flycap {

ObservabilityReport observability_matrix(const ModeVector& m,
                                         const ConverterParams& params,
                                         double tol) {
  params.validate();
  const SystemMatrices sm = system_matrices(m, params);
  const int p = params.p;

  ObservabilityReport report;
  report.O.resize(p, p);
  Eigen::RowVectorXd row = sm.C;
  for (int k = 0; k < p; ++k) {
    report.O.row(k) = row;
    row = row * sm.A;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(report.O);
  report.singular_values = svd.singularValues();
  const double sigma_max = report.singular_values(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < report.singular_values.size(); ++i) {
    if (report.singular_values(i) > tol * sigma_max) {
      ++rank;
    }
  }
  report.rank = rank;
  report.observable_subspace_dim = rank;
  return report;
}

std::vector<int> observable_coordinates(const ModeVector& m) {
  std::vector<int> coords{0};
  for (int j = 0; j + 1 < m.cells(); ++j) {
    if (m.u[j] != 0) {
      coords.push_back(j + 1);
    }
  }
  return coords;
}

Eigen::MatrixXd Projection::matrix(int z_dim) const {
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), z_dim);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    P(static_cast<Eigen::Index>(r), rows[r]) = 1.0;
  }
  return P;
}

std::vector<int> Projection::complement(int z_dim) const {
  std::vector<int> out;
  for (int k = 0; k < z_dim; ++k) {
    if (std::find(rows.begin(), rows.end(), k) == rows.end()) {
      out.push_back(k);
    }
  }
  return out;
}

ZObservabilityVerdict z_observability_check(
    const HybridTimeTrajectory& traj, std::vector<int> z_coordinates,
    const ConverterParams& params) {
  params.validate();
  if (traj.empty()) {
    throw std::invalid_argument("trajectory must contain at least one interval");
  }
  if (z_coordinates.empty()) {
    for (int k = 1; k < params.p; ++k) z_coordinates.push_back(k);
  }
  for (int k : z_coordinates) {
    if (k == 0) {
      throw std::invalid_argument(
          "z must not contain the load current I: it is measured directly");
    }
    if (k < 0 || k >= params.p) {
      throw std::invalid_argument("z coordinate " + std::to_string(k) +
                                  " is not a state coordinate");
    }
  }
  std::sort(z_coordinates.begin(), z_coordinates.end());
  if (std::adjacent_find(z_coordinates.begin(), z_coordinates.end()) !=
      z_coordinates.end()) {
    throw std::invalid_argument("z coordinates must be distinct");
  }

  ZObservabilityVerdict verdict;
  verdict.z_coordinates = z_coordinates;
  verdict.z_dim = static_cast<int>(z_coordinates.size());
  const int z_dim = verdict.z_dim;

  Eigen::MatrixXd stacked(0, z_dim);
  for (const auto& iv : traj.intervals()) {
    if (iv.mode.cells() != params.p) {
      throw std::invalid_argument("trajectory mode size does not match p");
    }
    IntervalWitness w;
    w.interval = iv;
    w.observable = observable_coordinates(iv.mode);
    for (int pos = 0; pos < z_dim; ++pos) {
      if (std::find(w.observable.begin(), w.observable.end(),
                    z_coordinates[pos]) != w.observable.end()) {
        w.projection.rows.push_back(pos);
      }
    }

    // Coordinates eliminated by the projection must stay constant: their
    // rows of A(u) and B(u) vanish, so the derivative is zero for every x.
    const SystemMatrices sm = system_matrices(iv.mode, params);
    for (int pos : w.projection.complement(z_dim)) {
      const int k = z_coordinates[pos];
      if (!sm.A.row(k).isZero(0.0) || sm.B(k) != 0.0) {
        verdict.reason = "coordinate " + state_name(k) +
                         " is unobservable but not constant on interval [" +
                         std::to_string(iv.t_start) + ", " +
                         std::to_string(iv.t_end) + ")";
        verdict.witnesses.push_back(std::move(w));
        return verdict;
      }
    }

    const Eigen::MatrixXd P = w.projection.matrix(z_dim);
    Eigen::MatrixXd next(stacked.rows() + P.rows(), z_dim);
    next << stacked, P;
    stacked = std::move(next);
    verdict.witnesses.push_back(std::move(w));
  }

  verdict.stacked_rank =
      stacked.rows() == 0
          ? 0
          : static_cast<int>(Eigen::FullPivLU<Eigen::MatrixXd>(stacked).rank());
  if (verdict.stacked_rank < z_dim) {
    verdict.reason = "stacked projections have rank " +
                     std::to_string(verdict.stacked_rank) + " < dim(z) = " +
                     std::to_string(z_dim);
    return verdict;
  }
  verdict.pass = true;
  return verdict;
}

namespace {

std::string join_names(const std::vector<int>& coords) {
  std::string out;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i > 0) out += ",";
    out += state_name(coords[i]);
  }
  return out;
}

std::string bits(const std::vector<int>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(v[i]);
  }
  return out + "]";
}

}  // namespace

std::string format_verdict(const ZObservabilityVerdict& verdict) {
  std::ostringstream os;
  std::vector<int> z = verdict.z_coordinates;
  os << "z = (" << join_names(z) << ")\n";
  for (std::size_t i = 0; i < verdict.witnesses.size(); ++i) {
    const auto& w = verdict.witnesses[i];
    os << "interval " << i << " [" << w.interval.t_start << ", "
       << w.interval.t_end << ") S=" << bits(w.interval.mode.S)
       << " u=" << bits(w.interval.mode.u) << " observable={"
       << join_names(w.observable) << "} P=";
    if (w.projection.rows.empty()) {
      os << "(none)";
    } else {
      const Eigen::MatrixXd P = w.projection.matrix(verdict.z_dim);
      for (Eigen::Index r = 0; r < P.rows(); ++r) {
        os << (r == 0 ? "[" : ";");
        for (Eigen::Index c = 0; c < P.cols(); ++c) {
          os << (c == 0 ? "" : " ") << static_cast<int>(P(r, c));
        }
      }
      os << "]";
    }
    os << '\n';
  }
  os << "stacked rank " << verdict.stacked_rank << " / " << verdict.z_dim
     << '\n';
  os << "verdict: " << (verdict.pass ? "PASS" : "FAIL");
  if (!verdict.pass) {
    os << " (" << verdict.reason << ")";
  }
  os << '\n';
  return os.str();
}

std::string format_rank_table(const ConverterParams& params) {
  std::ostringstream os;
  os << "mode  S        u1  u2  rank(O)  observable\n";
  for (const auto& row : mode_table(params.p)) {
    const auto report = observability_matrix(row.mode, params);
    std::string names;
    for (std::size_t i = 0; i < row.observable.size(); ++i) {
      names += (i ? "," : "") + row.observable[i];
    }
    char line[128];
    std::snprintf(line, sizeof(line), "%-5d %-8s %3d %3d  %7d  %s\n",
                  row.index, bits(row.mode.S).c_str(), row.mode.u[0],
                  row.mode.u[1], report.rank, names.c_str());
    os << line;
  }
  return os.str();
}

}  // namespace flycap
