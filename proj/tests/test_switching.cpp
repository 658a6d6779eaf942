#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "flycap/switching.hpp"

using namespace flycap;

TEST(Pwm, ZeroDutyNeverSwitches) {
  PwmConfig cfg = PwmConfig::defaults(3);
  cfg.duty = {0, 0, 0};
  for (double t = 0; t < 1e-3; t += 3.7e-6) {
    EXPECT_EQ(pwm_mode_at(t, cfg, 3).S, (std::vector<int>{0, 0, 0}));
  }
}

// Carrier j is delayed by j/3 of a period.  At t = 0 cell 1 starts its
// on-phase, cell 2 sits at phase 2/3 (off) and cell 3 at 1/3 (on).
TEST(Pwm, StartOfPeriod) {
  EXPECT_EQ(pwm_mode_at(0.0, PwmConfig::defaults(3), 3).S, (std::vector<int>{1, 0, 1}));
}

TEST(Pwm, OnePeriodVisitsAllActiveModes) {
  const PwmConfig cfg = PwmConfig::defaults(3);
  std::set<std::vector<int>> seen;
  for (int k = 0; k < 40; ++k) seen.insert(pwm_mode_at(k * 5e-6, cfg, 3).S);
  const std::set<std::vector<int>> expect{{0, 0, 1}, {0, 1, 0}, {0, 1, 1},
                                          {1, 0, 0}, {1, 0, 1}, {1, 1, 0}};
  EXPECT_EQ(seen, expect);
}

TEST(Pwm, ValidateRejects) {
  PwmConfig cfg = PwmConfig::defaults(3);
  cfg.duty = {0.5, 1.5, 0.5};
  EXPECT_THROW(cfg.validate(3), std::invalid_argument);
  cfg = PwmConfig::defaults(3);
  cfg.f_chop = 0;
  EXPECT_THROW(cfg.validate(3), std::invalid_argument);
  EXPECT_THROW(PwmConfig::defaults(3).validate(4), std::invalid_argument);
}

TEST(Trajectory, ZeroDutySingleInterval) {
  PwmConfig cfg = PwmConfig::defaults(3);
  cfg.duty = {0, 0, 0};
  const auto traj = trajectory_from_pwm(cfg, 0.0, 1e-3, 3);
  ASSERT_EQ(traj.size(), 1u);
  EXPECT_EQ(traj.intervals()[0].mode.S, (std::vector<int>{0, 0, 0}));
}

TEST(Trajectory, SixIntervalsPerPeriod) {
  const PwmConfig cfg = PwmConfig::defaults(3);
  const auto traj = trajectory_from_pwm(cfg, 0.0, cfg.period(), 3);
  ASSERT_EQ(traj.size(), 6u);
  const std::vector<std::vector<int>> order{{1, 0, 1}, {1, 0, 0}, {1, 1, 0},
                                            {0, 1, 0}, {0, 1, 1}, {0, 0, 1}};
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(traj.intervals()[i].mode.S, order[i]);
    EXPECT_NEAR(traj.intervals()[i].duration(), cfg.period() / 6, 1e-15);
  }
}

TEST(Trajectory, ConcatenationIsLocal) {
  const PwmConfig cfg = PwmConfig::defaults(3);
  const double T = cfg.period();
  auto a = trajectory_from_pwm(cfg, 0.0, T, 3);
  a.append(trajectory_from_pwm(cfg, T, 2 * T, 3));
  const auto b = trajectory_from_pwm(cfg, 0.0, 2 * T, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a.intervals()[i].t_start, b.intervals()[i].t_start, 1e-15);
    EXPECT_NEAR(a.intervals()[i].t_end, b.intervals()[i].t_end, 1e-15);
    EXPECT_EQ(a.intervals()[i].mode, b.intervals()[i].mode);
  }
}

// Sampled mode at any interior point agrees with the interval's mode.
TEST(Trajectory, InteriorSamplesMatchPwm) {
  PwmConfig cfg = PwmConfig::defaults(3);
  cfg.duty = {0.3, 0.55, 0.8};
  cfg.phase_shift = 0.21;
  const auto traj = trajectory_from_pwm(cfg, 1e-5, 7e-4, 3);
  for (const auto& iv : traj.intervals()) {
    for (double f : {0.01, 0.5, 0.99}) {
      const double t = iv.t_start + f * iv.duration();
      EXPECT_EQ(pwm_mode_at(t, cfg, 3), iv.mode);
      EXPECT_EQ(traj.mode_at(t), iv.mode);
    }
  }
}

TEST(Trajectory, ValidationAndAppend) {
  const ModeVector m = derive_inputs(std::vector<int>{1, 0, 0});
  EXPECT_THROW(HybridTimeTrajectory({{0.0, 0.0, m}}), std::logic_error);
  EXPECT_THROW(HybridTimeTrajectory({{0.0, 1.0, m}, {1.5, 2.0, m}}), std::logic_error);
  auto t = HybridTimeTrajectory::from_switches({{1, 0, 0}});
  EXPECT_THROW(t.append(HybridTimeTrajectory({{3.0, 4.0, m}})), std::invalid_argument);
  t.append(HybridTimeTrajectory({{1.0, 2.0, m}}));
  EXPECT_EQ(t.size(), 1u);  // merged
  EXPECT_DOUBLE_EQ(t.t_end(), 2.0);
}

TEST(Trajectory, CsvHeader) {
  std::ostringstream os;
  write_trajectory_csv(os, HybridTimeTrajectory::from_switches({{1, 0, 0}, {1, 1, 0}}));
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "t_start,t_end,S1,S2,S3,u1,u2,u3");
}
