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

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "flycap/analysis.hpp"
#include "flycap/config.hpp"
#include "flycap/observability.hpp"
#include "flycap/sim.hpp"

namespace py = pybind11;
using namespace py::literals;
using namespace flycap;

namespace {

py::array_t<double> column(const std::vector<double>& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

// Time series as a dict of 1-D arrays keyed like the CSV columns.
py::dict series_to_dict(const TimeSeries& ts) {
  const std::size_t n = ts.records.size();
  py::dict out;
  std::vector<double> buf(n);
  auto put = [&](const std::string& key, auto get) {
    for (std::size_t i = 0; i < n; ++i) buf[i] = get(ts.records[i]);
    out[py::str(key)] = column(buf);
  };
  put("t", [](const StepRecord& r) { return r.t; });
  for (int j = 0; j < ts.p; ++j) {
    put("S" + std::to_string(j + 1), [j](const StepRecord& r) { return double(r.mode.S[j]); });
    put("u" + std::to_string(j + 1), [j](const StepRecord& r) { return double(r.mode.u[j]); });
  }
  put("I", [](const StepRecord& r) { return r.I; });
  put("I_meas", [](const StepRecord& r) { return r.I_meas; });
  for (int j = 0; j < ts.p - 1; ++j) {
    put("Vc" + std::to_string(j + 1), [j](const StepRecord& r) { return r.Vc[j]; });
  }
  auto observer = [&](const std::string& tag, auto pick, bool extra) {
    put("Ihat" + tag, [&](const StepRecord& r) { return pick(r).I_hat; });
    put("e1" + tag, [&](const StepRecord& r) { return pick(r).e1; });
    for (int j = 0; j < ts.p - 1; ++j) {
      put("Vc" + std::to_string(j + 1) + "hat" + tag,
          [&](const StepRecord& r) { return pick(r).Vc_hat[j]; });
      put("e" + std::to_string(j + 2) + tag, [&](const StepRecord& r) { return pick(r).e_V[j]; });
    }
    if (extra) {
      put("l" + tag, [&](const StepRecord& r) { return pick(r).l; });
      put("mu" + tag, [&](const StepRecord& r) { return pick(r).mu; });
      put("V_lyap" + tag, [&](const StepRecord& r) { return pick(r).V_lyap; });
    }
  };
  if (ts.has_sosml) {
    observer("_sosml", [](const StepRecord& r) -> const ObserverSample& { return *r.sosml; }, true);
  }
  if (ts.has_luen) {
    observer("_luen", [](const StepRecord& r) -> const ObserverSample& { return *r.luen; }, false);
  }
  return out;
}

py::dict metrics_to_dict(const Metrics& m) {
  py::dict out;
  for (const auto& c : m.channels) {
    py::dict row;
    row["convergence_time"] = c.convergence_time ? py::cast(*c.convergence_time) : py::none();
    row["rmse"] = c.rmse;
    row["max_post_settle"] = c.max_post_settle ? py::cast(*c.max_post_settle) : py::none();
    out[py::str(c.name)] = row;
  }
  return out;
}

ScenarioConfig config_from(const std::string& path, py::object seed) {
  ScenarioConfig cfg = load_config(path);
  if (!seed.is_none()) cfg.noise.seed = seed.cast<std::uint64_t>();
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "flying-capacitor converter model, observers and checks";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalAbort>(m, "NumericalAbort", PyExc_ArithmeticError);

  py::class_<ConverterParams>(m, "ConverterParams")
      .def(py::init<>())
      .def_readwrite("E", &ConverterParams::E)
      .def_readwrite("R", &ConverterParams::R)
      .def_readwrite("L", &ConverterParams::L)
      .def_readwrite("c", &ConverterParams::c)
      .def_readwrite("p", &ConverterParams::p)
      .def("validate", &ConverterParams::validate);

  py::class_<SosmlParams>(m, "SosmlParams")
      .def(py::init<>())
      .def_readwrite("lambda0", &SosmlParams::lambda0)
      .def_readwrite("alpha0", &SosmlParams::alpha0)
      .def_readwrite("k_lambda0", &SosmlParams::k_lambda0)
      .def_readwrite("k_alpha0", &SosmlParams::k_alpha0)
      .def_readwrite("k", &SosmlParams::k)
      .def_readwrite("kappa", &SosmlParams::kappa)
      .def_readwrite("l_init", &SosmlParams::l_init)
      .def_readwrite("eps_dz", &SosmlParams::eps_dz)
      .def_readwrite("l_max", &SosmlParams::l_max)
      .def_static("published", &SosmlParams::published)
      .def_static("certified", &SosmlParams::certified);

  m.def("derive_inputs", [](std::vector<int> S) { return derive_inputs(S).u; }, "S"_a);

  m.def(
      "dynamics",
      [](const Eigen::VectorXd& x, std::vector<int> S, const ConverterParams& prm) {
        return dynamics(x, derive_inputs(S, prm), prm, prm.R);
      },
      "x"_a, "S"_a, "params"_a = ConverterParams{});

  m.def("mode_table", []() {
    py::list rows;
    for (const auto& r : mode_table(3)) {
      rows.append(py::dict("index"_a = r.index, "S"_a = r.mode.S, "u"_a = r.mode.u,
                           "observable"_a = r.observable));
    }
    return rows;
  });

  m.def(
      "observability_rank",
      [](std::vector<int> S, const ConverterParams& prm) {
        return observability_matrix(derive_inputs(S, prm), prm).rank;
      },
      "S"_a, "params"_a = ConverterParams{});

  m.def(
      "z_observable",
      [](const std::vector<std::vector<int>>& modes, std::vector<int> z, const ConverterParams& prm) {
        const auto v = z_observability_check(HybridTimeTrajectory::from_switches(modes), z, prm);
        return py::make_tuple(v.pass, v.stacked_rank, format_verdict(v));
      },
      "modes"_a, "z"_a = std::vector<int>{}, "params"_a = ConverterParams{});

  m.def("check_condition16", [](const SosmlParams& prm) {
    const Condition16 c = check_condition16(prm);
    return py::dict("pass"_a = c.pass, "lhs"_a = c.lhs, "rhs"_a = c.rhs, "margin"_a = c.margin);
  });

  m.def("lyapunov_matrices", [](const SosmlParams& prm) {
    const LyapunovMatrices l = build_matrices(prm);
    return py::dict("P"_a = Eigen::Matrix3d(l.P), "Omega1"_a = Eigen::Matrix3d(l.Omega1),
                    "Omega2"_a = Eigen::Matrix3d(l.Omega2), "Q"_a = Eigen::Matrix3d(l.Q),
                    "gamma1"_a = l.gamma1, "gamma2_per_F"_a = l.gamma2_per_F,
                    "gamma3"_a = l.gamma3, "gamma4"_a = l.gamma4);
  });

  m.def(
      "pe_min_eigenvalue",
      [](double t_end, double window, double scale, std::vector<double> duty, double phase_shift,
         double f_chop) {
        PwmConfig pwm = PwmConfig::defaults(static_cast<int>(duty.size()));
        pwm.duty = duty;
        pwm.phase_shift = phase_shift;
        pwm.f_chop = f_chop;
        const int p = static_cast<int>(duty.size());
        return pe_check(trajectory_from_pwm(pwm, 0.0, t_end, p), window, scale).min_eigenvalue;
      },
      "t_end"_a = 2e-4, "window"_a = 2e-4, "scale"_a = 1.0,
      "duty"_a = std::vector<double>{0.5, 0.5, 0.5}, "phase_shift"_a = 1.0 / 3.0,
      "f_chop"_a = 5000.0);

  m.def(
      "simulate",
      [](const std::string& config, py::object seed) {
        const TimeSeries ts = [&] {
          ScenarioConfig cfg = config_from(config, seed);
          py::gil_scoped_release release;
          return run_scenario(cfg);
        }();
        return py::make_tuple(series_to_dict(ts),
                              metrics_to_dict(metrics(ts, load_config(config).settle_threshold)));
      },
      "config"_a, "seed"_a = py::none(),
      "Run a scenario file; returns (series dict, metrics dict).");

  m.def(
      "compare",
      [](const std::string& config, py::object seed) {
        const Comparison c = compare_observers(config_from(config, seed));
        py::dict rows;
        for (const auto& r : c.rows) rows[py::str(r.observer)] = r.voltage_rmse;
        return py::make_tuple(c.t_from, rows);
      },
      "config"_a, "seed"_a = py::none(),
      "Steady-state voltage RMSE per observer; returns (t_from, {observer: rmse}).");

  m.def(
      "simulate_csv",
      [](const std::string& config) {
        std::ostringstream os;
        write_csv(os, run_scenario(load_config(config)));
        return os.str();
      },
      "config"_a);
}
