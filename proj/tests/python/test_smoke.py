import os
from pathlib import Path

import numpy as np
import pytest

import flycap

ROOT = Path(os.environ.get("FLYCAP_SOURCE_DIR", Path(__file__).resolve().parents[2]))
NOMINAL = str(ROOT / "configs" / "nominal.cfg")
NOISY = str(ROOT / "configs" / "noisy_loadstep.cfg")


def test_inputs_and_dynamics():
    assert flycap.derive_inputs([1, 0, 1]) == [-1, 1, 1]
    dx = flycap.dynamics(np.array([1.0, 5.0, 10.0]), [0, 1, 0])
    # u = (1, -1, 0): no source term
    assert dx[0] == pytest.approx(-13100.0 - 500.0 + 1000.0)
    assert dx[1] == pytest.approx(25000.0)


def test_mode_table_and_ranks():
    rows = flycap.mode_table()
    assert [r["S"] for r in rows][5] == [1, 0, 1]
    assert rows[7]["observable"] == ["I"]
    assert [flycap.observability_rank(r["S"]) for r in rows] == [1, 2, 2, 2, 2, 2, 2, 1]


def test_z_observability():
    ok, rank, text = flycap.z_observable([[1, 0, 0], [1, 1, 0]])
    assert ok and rank == 2 and "PASS" in text
    assert not flycap.z_observable([[0, 0, 0]])[0]


def test_gain_checks():
    c = flycap.check_condition16(flycap.SosmlParams.published())
    assert not c["pass"] and c["margin"] == -105.0
    m = flycap.lyapunov_matrices(flycap.SosmlParams.certified())
    assert np.linalg.eigvalsh(m["Omega1"]).min() > 0
    assert flycap.pe_min_eigenvalue() == pytest.approx(2e-4 / 3)


def test_simulate_nominal():
    series, metrics = flycap.simulate(NOMINAL)
    assert len(series["t"]) == 20001
    assert metrics["e2_sosml"]["convergence_time"] == pytest.approx(0.028658, rel=0.1)
    assert abs(series["e2_sosml"][-1]) < 0.5


def test_compare_and_errors(tmp_path):
    t_from, rows = flycap.compare(NOISY, seed=3)
    assert t_from > 0
    assert rows["sosml"] < rows["luenberger"]
    bad = tmp_path / "bad.cfg"
    bad.write_text("plant.R = -1\n")
    with pytest.raises(flycap.ConfigError, match="plant.R"):
        flycap.simulate(str(bad))
