#include <gtest/gtest.h>

#include "flycap/luenberger_observer.hpp"

using namespace flycap;

namespace {

ModeVector mode(std::vector<int> S) { return derive_inputs(S); }

}  // namespace

TEST(Luenberger, ExactInitialisationStaysExact) {
  const ConverterParams plant;
  const auto g = LuenbergerGains::preset();
  LuenbergerState st{0.0, {5.0, 10.0}};
  Eigen::VectorXd x(3);
  x << 0.0, 5.0, 10.0;
  const double dt = 5e-6;
  for (int k = 0; k < 400; ++k) {
    const ModeVector m = mode({(k / 7) % 2, (k / 11) % 2, (k / 5) % 2});
    st = luenberger_step(st, x(0), m, plant, g, dt);
    x += dt * dynamics(x, m, plant, plant.R);
    EXPECT_NEAR(st.I_hat, x(0), 1e-9);
    EXPECT_NEAR(st.Vc_hat[0], x(1), 1e-9);
    EXPECT_NEAR(st.Vc_hat[1], x(2), 1e-9);
  }
}

TEST(Luenberger, ZeroInputFreezesVoltages) {
  LuenbergerState st{0.0, {3.0, 4.0}};
  const auto next = luenberger_step(st, 2.0, mode({0, 0, 0}), ConverterParams{},
                                    LuenbergerGains::preset(), 5e-6);
  EXPECT_EQ(next.Vc_hat, st.Vc_hat);
  EXPECT_NE(next.I_hat, st.I_hat);
}

TEST(Certificate, DriftOnlyWithIdentity) {
  const ConverterParams plant;
  LuenbergerGains g;  // all zero
  const auto A = error_matrices(plant, g);
  const Eigen::Matrix3d M = A[0].transpose() + A[0];
  Eigen::Vector3d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(M).eigenvalues();
  EXPECT_NEAR(ev(0), -2 * plant.R / plant.L, 1e-9);
  EXPECT_NEAR(ev(1), 0.0, 1e-12);
  EXPECT_NEAR(ev(2), 0.0, 1e-12);
  const auto cert = certify_gains(g, plant, Eigen::Matrix3d::Identity());
  EXPECT_LE(cert.max_eigenvalue[0], cert.tolerance);
  // Identity does not cancel the 1/L coupling for i = 1, 2.
  EXPECT_FALSE(cert.pass);
}

TEST(Certificate, PresetPasses) {
  const auto cert = certify_gains(LuenbergerGains::preset(), ConverterParams{},
                                  LuenbergerGains::preset_lyapunov());
  EXPECT_TRUE(cert.pass);
  EXPECT_TRUE(cert.P_positive);
}

TEST(Certificate, IndefiniteMatrixFails) {
  const Eigen::Matrix3d P = Eigen::Vector3d(1.0, -1e-3, 1e-3).asDiagonal();
  EXPECT_FALSE(certify_gains(LuenbergerGains::preset(), ConverterParams{}, P).pass);
  Eigen::Matrix3d asym = Eigen::Matrix3d::Identity();
  asym(0, 1) = 0.5;
  EXPECT_THROW(certify_gains(LuenbergerGains::preset(), ConverterParams{}, asym),
               std::invalid_argument);
}

TEST(Search, OrdersByObjective) {
  const ConverterParams plant;
  const auto ranked = search_luenberger_gains(
      plant, {1e3, 1e4}, {10.0, 1000.0, 1e4}, [](const LuenbergerGains& g) -> std::optional<double> {
        return -g.kappa[0] + g.kappa[1];  // favour large gains
      });
  // r = 1e4 gives |kappa| = 1e6 > bound: skipped.
  ASSERT_EQ(ranked.size(), 8u);
  for (const auto& c : ranked) EXPECT_TRUE(c.certificate.pass);
  EXPECT_EQ(ranked.front().gains.kappa[0], 1e4);
  EXPECT_EQ(ranked.front().gains.kappa[1], -1e5);
}

TEST(Gains, Validate) {
  LuenbergerGains g = LuenbergerGains::preset();
  g.kappa[0] = 0;
  EXPECT_THROW(g.validate(), std::invalid_argument);
  EXPECT_THROW(LuenbergerGains::preset().K(4), std::out_of_range);
}
