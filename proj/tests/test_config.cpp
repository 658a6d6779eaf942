#include <sstream>

#include <gtest/gtest.h>

#include "flycap/config.hpp"

using namespace flycap;

namespace {

ScenarioConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

int error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(Config, DefaultsAndOverrides) {
  const ScenarioConfig cfg = parse(
      "# comment\n"
      "plant.E = 100   # trailing\n"
      "init.Vc = [1, 2]\n"
      "noise.kind = gaussian\n"
      "noise.seed = 17\n"
      "sosml.l_max = inf\n"
      "luenberger.enabled = false\n");
  EXPECT_EQ(cfg.params.E, 100.0);
  EXPECT_EQ(cfg.params.R, 131.0);
  EXPECT_EQ(cfg.x0.Vc, (std::vector<double>{1, 2}));
  EXPECT_EQ(cfg.noise.kind, NoiseKind::kGaussian);
  EXPECT_EQ(cfg.noise.seed, 17u);
  EXPECT_TRUE(std::isinf(cfg.sosml.l_max));
  EXPECT_FALSE(cfg.luenberger.has_value());
}

TEST(Config, Errors) {
  EXPECT_EQ(error_line("plant.E = 1\nplant.Q = 2\n"), 2);
  EXPECT_EQ(error_line("plant.E = 1\nplant.E = 2\n"), 2);
  EXPECT_EQ(error_line("\n\nplant.E 150\n"), 3);
  EXPECT_EQ(error_line("plant.E = abc\n"), 1);
  EXPECT_EQ(error_line("noise.kind = pink\n"), 1);
  EXPECT_EQ(error_line("noise.seed = -3\n"), 1);
  EXPECT_EQ(error_line("sim.dt = 1e-6\nplant.R = -1\n"), 2);
  try {
    parse("plant.R = -1\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("plant.R must be > 0"), std::string::npos);
  }
}

TEST(Config, CellCountDrivesPwmDefaults) {
  const ScenarioConfig cfg = parse(
      "plant.p = 4\nplant.c = 4e-5, 4e-5, 4e-5\ninit.Vc = 5,10,15\n"
      "init.Vchat = 0,0,0\nluenberger.enabled = false\n");
  EXPECT_EQ(cfg.pwm.duty.size(), 4u);
  EXPECT_DOUBLE_EQ(cfg.pwm.phase_shift, 0.25);
}

TEST(Config, BundledFilesLoad) {
  const ScenarioConfig nominal = load_config(FLYCAP_SOURCE_DIR "/configs/nominal.cfg");
  EXPECT_EQ(nominal.noise.kind, NoiseKind::kNone);
  EXPECT_EQ(nominal.sosml.l_max, 20000.0);
  const ScenarioConfig noisy = load_config(FLYCAP_SOURCE_DIR "/configs/noisy_loadstep.cfg");
  EXPECT_EQ(noisy.noise.kind, NoiseKind::kUniform);
  EXPECT_EQ(noisy.load.R_factor, 1.5);
  EXPECT_EQ(noisy.load.t_switch, 0.05);
  EXPECT_THROW(load_config("/nonexistent.cfg"), ConfigError);
}

TEST(ModeList, Parse) {
  std::istringstream ok("[1,0,0];[1,1,0]\n[0, 1, 0]\n");
  const auto traj = parse_mode_list(ok, 3);
  ASSERT_EQ(traj.size(), 3u);
  EXPECT_EQ(traj.intervals()[1].mode.S, (std::vector<int>{1, 1, 0}));
  std::istringstream bad("[1,0];\n");
  EXPECT_THROW(parse_mode_list(bad, 3), ConfigError);
  std::istringstream bad2("1,0,0\n");
  EXPECT_THROW(parse_mode_list(bad2, 3), ConfigError);
  std::istringstream empty("\n");
  EXPECT_THROW(parse_mode_list(empty, 3), ConfigError);
}
