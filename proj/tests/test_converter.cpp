#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "flycap/converter.hpp"

using namespace flycap;

namespace {

ModeVector mode(std::vector<int> S) { return derive_inputs(S); }

}  // namespace

TEST(Inputs, DifferencesOfAdjacentSwitches) {
  EXPECT_EQ(mode({0, 1, 0}).u, (std::vector<int>{1, -1, 0}));
  EXPECT_EQ(mode({0, 0, 0}).u, (std::vector<int>{0, 0, 0}));
  EXPECT_EQ(mode({1, 0, 1}).u, (std::vector<int>{-1, 1, 1}));
}

TEST(Inputs, RoundTripAllModes) {
  for (int k = 0; k < 8; ++k) {
    std::vector<int> S{(k >> 2) & 1, (k >> 1) & 1, k & 1};
    EXPECT_EQ(switches_from_inputs(mode(S).u), S);
  }
}

TEST(Inputs, RejectsBadSwitchVectors) {
  EXPECT_THROW(mode({0, 2, 1}), std::invalid_argument);
  EXPECT_THROW(mode({}), std::invalid_argument);
  std::vector<int> four{0, 1, 0, 1};
  EXPECT_THROW(derive_inputs(four, ConverterParams::nominal()), std::invalid_argument);
}

TEST(Params, ValidateNamesField) {
  ConverterParams p;
  p.R = -1;
  try {
    p.validate();
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("plant.R"), std::string::npos);
  }
  p = ConverterParams{};
  p.c = {40e-6};
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Dynamics, HandEvaluatedExample) {
  const ConverterParams prm;
  PlantState x{1.0, {5.0, 10.0}, 0.0};
  ModeVector m{{0, 1, 1}, {1, -1, 1}};  // u given directly
  const Eigen::VectorXd dx = dynamics(x, m, prm);
  EXPECT_NEAR(dx(0), -13100.0 + 15000.0 - 500.0 + 1000.0, 1e-9);  // 2400
  EXPECT_NEAR(dx(1), 25000.0, 1e-9);
  EXPECT_NEAR(dx(2), -25000.0, 1e-9);
}

TEST(Dynamics, ZeroInputDecaysCurrentOnly) {
  const ConverterParams prm;
  PlantState x{1.0, {37.0, -4.0}, 0.0};
  const Eigen::VectorXd dx = dynamics(x, mode({0, 0, 0}), prm);
  EXPECT_DOUBLE_EQ(dx(0), -prm.R / prm.L);
  EXPECT_EQ(dx(1), 0.0);
  EXPECT_EQ(dx(2), 0.0);
  const Eigen::VectorXd dx7 = dynamics(x, mode({1, 1, 1}), prm);
  EXPECT_EQ(dx7(1), 0.0);
  EXPECT_EQ(dx7(2), 0.0);
}

TEST(SystemMatrices, HandEvaluatedEntries) {
  const ConverterParams prm;
  ModeVector m{{0, 1, 1}, {1, -1, 1}};
  const SystemMatrices sm = system_matrices(m, prm);
  EXPECT_DOUBLE_EQ(sm.A(0, 0), -13100.0);
  EXPECT_DOUBLE_EQ(sm.A(0, 1), -100.0);
  EXPECT_DOUBLE_EQ(sm.A(1, 0), 25000.0);
  EXPECT_DOUBLE_EQ(sm.B(0), 15000.0);

  const SystemMatrices z = system_matrices(mode({0, 0, 0}), prm);
  Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(3, 3);
  expect(0, 0) = -prm.R / prm.L;
  EXPECT_EQ(z.A, expect);
  EXPECT_EQ(z.B, Eigen::VectorXd::Zero(3));
}

// A(u) x + B(u) must equal the direct right-hand side for arbitrary states.
TEST(SystemMatrices, AffineFormMatchesDynamics) {
  const ConverterParams prm;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> v(-200.0, 200.0);
  std::uniform_int_distribution<int> bit(0, 1);
  for (int i = 0; i < 1000; ++i) {
    const ModeVector m = mode({bit(rng), bit(rng), bit(rng)});
    Eigen::VectorXd x(3);
    x << v(rng), v(rng), v(rng);
    const SystemMatrices sm = system_matrices(m, prm);
    const Eigen::VectorXd lhs = sm.A * x + sm.B;
    const Eigen::VectorXd rhs = dynamics(x, m, prm, prm.R);
    EXPECT_LE((lhs - rhs).norm(), 1e-9 * (1.0 + rhs.norm()));
    EXPECT_EQ(sm.C * x, x(0));
  }
}

TEST(ModeTable, SelectedRows) {
  const auto rows = mode_table(3);
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_EQ(rows[2].mode.S, (std::vector<int>{0, 1, 0}));
  EXPECT_EQ(rows[2].observable, (std::vector<std::string>{"I", "Vc1", "Vc2"}));
  EXPECT_EQ(rows[7].observable, (std::vector<std::string>{"I"}));
  EXPECT_EQ(rows[3].observable, (std::vector<std::string>{"I", "Vc1"}));
  EXPECT_THROW(mode_table(4), std::invalid_argument);
}

TEST(Dynamics, GeneralCellCount) {
  ConverterParams prm;
  prm.p = 4;
  prm.c = {40e-6, 40e-6, 40e-6};
  prm.validate();
  Eigen::VectorXd x(4);
  x << 1.0, 5.0, 10.0, 20.0;
  std::vector<int> S{0, 1, 1, 0};
  const ModeVector m = derive_inputs(S, prm);
  EXPECT_EQ(m.u, (std::vector<int>{1, 0, -1, 0}));
  const Eigen::VectorXd dx = dynamics(x, m, prm, prm.R);
  EXPECT_DOUBLE_EQ(dx(0), -13100.0 - 500.0 + 2000.0);
  EXPECT_DOUBLE_EQ(dx(2), 0.0);
}
