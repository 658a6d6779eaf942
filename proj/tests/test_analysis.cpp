#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "flycap/analysis.hpp"

using namespace flycap;

TEST(Lyapunov, MatricesForPublishedGains) {
  const LyapunovMatrices m = build_matrices(SosmlParams::published());
  Eigen::Matrix3d P;
  P << 20, 5, -2, 5, 46.25, -2.5, -2, -2.5, 2;
  EXPECT_LE((m.P - 0.5 * P).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_DOUBLE_EQ(m.Q(0, 0), 26.0);
  EXPECT_DOUBLE_EQ(m.Q(1, 1), 256.25);
  EXPECT_DOUBLE_EQ(m.Q(2, 2), 2.25);
  EXPECT_TRUE(is_positive_definite(m.P));
  EXPECT_FALSE(is_positive_definite(m.Omega1));
  EXPECT_TRUE(is_positive_definite(m.Omega2));
}

TEST(Lyapunov, SymmetricGainsGiveLambdaInQ) {
  SosmlParams prm;
  prm.lambda0 = prm.k_lambda0 = 3.0;
  EXPECT_DOUBLE_EQ(build_matrices(prm).Q(2, 2), 3.0);
}

TEST(Condition16, Margins) {
  const Condition16 pub = check_condition16(SosmlParams::published());
  EXPECT_FALSE(pub.pass);
  EXPECT_EQ(pub.lhs, 320.0);
  EXPECT_EQ(pub.rhs, 425.0);
  EXPECT_EQ(pub.margin, -105.0);

  SosmlParams prm;
  prm.lambda0 = 1;
  prm.alpha0 = 1;
  prm.k_lambda0 = 0.1;
  prm.k_alpha0 = 1;
  const Condition16 c = check_condition16(prm);
  EXPECT_TRUE(c.pass);
  EXPECT_NEAR(c.margin, 3.83, 1e-12);

  prm.k_lambda0 = 1e-9;
  EXPECT_NEAR(check_condition16(prm).margin, 4.0, 1e-12);
  EXPECT_TRUE(check_condition16(SosmlParams::certified()).pass);
}

// The condition is exactly the boundary of Omega1 > 0.
TEST(Condition16, MatchesOmega1Definiteness) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> g(0.05, 20.0);
  for (int i = 0; i < 2000; ++i) {
    SosmlParams prm;
    prm.lambda0 = g(rng);
    prm.alpha0 = g(rng);
    prm.k_lambda0 = g(rng);
    prm.k_alpha0 = g(rng) * 10;
    const Condition16 c = check_condition16(prm);
    if (std::abs(c.margin) < 1e-6 * c.lhs) continue;
    const double det = build_matrices(prm).Omega1.determinant();
    EXPECT_EQ(c.pass, det > 0) << i;
  }
}

TEST(Lyapunov, RemainderBoundedByQ) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n(0.0, 10.0);
  const SosmlParams prm = SosmlParams::published();
  const Eigen::Matrix3d Q = build_matrices(prm).Q;
  for (int i = 0; i < 1000; ++i) {
    ZetaState z{n(rng), n(rng), n(rng)};
    const Eigen::Vector3d v = z.vector();
    EXPECT_LE(delta_omega(z, prm), v.dot(Q * v) + 1e-9);
  }
}

TEST(Lyapunov, ValueAlongSamples) {
  const SosmlParams prm;
  const std::vector<SlidingSample> s{{0.0, 1.0, 0.0}, {1e-3, 50.0, -2.0}};
  const auto V = lyapunov_along_trajectory(s, prm);
  EXPECT_EQ(V[0], 0.0);
  EXPECT_GT(V[1], 0.0);
  const ZetaState z = ZetaState::from_error(-4.0, 4.0, 1.0);
  EXPECT_DOUBLE_EQ(z.zeta1, -4.0);
  EXPECT_DOUBLE_EQ(z.zeta2, -16.0);
}

TEST(Lyapunov, Phi1RemovesProportionalTerms) {
  const SosmlParams prm;
  // e1' = -lambda sqrt|e1| sign - k_lambda e1 exactly -> phi1 = 0
  const double e1 = 0.04, l = 9.0;
  const AdaptiveGains gn = gains_at(l, prm);
  const double e1dot = -gn.lambda * std::sqrt(e1) - gn.k_lambda * e1;
  EXPECT_NEAR(phi1_from_error_dynamics(e1dot, e1, l, prm), 0.0, 1e-12);
}

TEST(Pe, DefaultPwmPeriod) {
  const PwmConfig pwm = PwmConfig::defaults(3);
  const double T = pwm.period();
  const auto traj = trajectory_from_pwm(pwm, 0.0, T, 3);
  const PeReport r = pe_check(traj, T, 2.0);
  // Gram = scale T/6 [[4,-2],[-2,4]] -> min eigenvalue scale T / 3
  EXPECT_NEAR(r.min_eigenvalue, 2.0 * T / 3.0, 1e-15);
  EXPECT_LE(r.psi_norm_bound, std::sqrt(2 * 2.0) + 1e-12);
}

TEST(Pe, SlidingWindowWorstCase) {
  const PwmConfig pwm = PwmConfig::defaults(3);
  const double T = pwm.period();
  const auto traj = trajectory_from_pwm(pwm, 0.0, 5 * T, 3);
  // Any window of a full period covers every interval once.
  EXPECT_NEAR(pe_check(traj, T, 1.0).min_eigenvalue, T / 3.0, 1e-15);
  // A window of one interval sees a single rank-one direction.
  EXPECT_NEAR(pe_check(traj, T / 6, 1.0).min_eigenvalue, 0.0, 1e-15);
}

TEST(Pe, InactiveTrajectoryIsZero) {
  const auto traj = HybridTimeTrajectory::from_switches({{0, 0, 0}, {1, 1, 1}}, 1e-4);
  EXPECT_EQ(pe_check(traj, 2e-4, 1.0).min_eigenvalue, 0.0);
  EXPECT_THROW(pe_check(traj, 3e-4, 1.0), std::invalid_argument);
  EXPECT_THROW(pe_check(traj, 0.0, 1.0), std::invalid_argument);
}

TEST(Report, CsvContainsMargin) {
  std::ostringstream os;
  write_gain_report_csv(os, SosmlParams::published());
  EXPECT_NE(os.str().find("condition16_margin,-105"), std::string::npos);
  EXPECT_NE(os.str().find("Omega1_eig1,"), std::string::npos);
}
