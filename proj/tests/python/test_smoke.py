import math

import numpy as np
import pytest

import splf


def small_config(**kw):
    c = splf.SimConfig()
    c.d, c.p, c.nu, c.n = 2, 3.0, 1.0, 2
    c.dt, c.T, c.seed = 1e-3, 0.02, 5
    c.set_gaussian_init(1.0, 2.5)
    c.set_power_noise(0.1, 3.0)
    for k, v in kw.items():
        setattr(c, k, v)
    return c


def test_exponents():
    assert splf.critical_exponents(3)["p1"] == (9, 5)
    assert splf.critical_exponents(2)["p2"] is None
    assert splf.critical_exponents(9)["p2"] == (18, 7)
    assert not splf.admissible_existence(2.58, 9)
    assert splf.lam(2.5, 3) == pytest.approx(0.4)
    assert splf.delta(2.0) == 0.5


def test_philox_known_answer():
    assert splf.philox4x32([0, 0, 0, 0], [0, 0]) == [0x6627E8D5, 0xE169C58D, 0xBC57AC4C, 0x9B00DBD8]


def test_normals_are_keyed():
    a = splf.standard_normals(1, 2, 3, 16)
    assert np.array_equal(a, splf.standard_normals(1, 2, 3, 16))
    assert not np.array_equal(a, splf.standard_normals(1, 2, 4, 16))


def test_drift_energy_identity():
    basis = splf.Basis(2, 2)
    assert len(basis) == 24
    assert basis.laplacian_symbol(0) == pytest.approx(4 * math.pi**2 * sum(z * z for z in basis.wave_vector(0)))
    ev = splf.DriftEvaluator(basis, 3.0, 1.0)
    x = 0.3 * np.sin(1.7 * np.arange(len(basis)) + 0.4)
    b, diss, grad_lp = ev.evaluate(x)
    assert float(x @ b) == pytest.approx(-diss, rel=1e-11)
    assert diss == pytest.approx(2286.0633109763612, rel=1e-12)
    with pytest.raises(splf._splf.DimensionError):
        ev.evaluate(np.zeros(3))


def test_simulate_is_deterministic():
    c = small_config()
    a = splf.simulate(c, 0)
    b = splf.simulate(c, 0)
    assert a["coords"].shape == (c.steps() + 1, 24)
    assert np.array_equal(a["coords"], b["coords"])
    assert not a["diverged"]
    div, conj = splf.structural_defects(c, 2)
    assert div < 1e-12 and conj < 1e-12


def test_config_errors():
    c = small_config(p=1.0)
    with pytest.raises(splf._splf.ConfigError):
        c.validate()
    with pytest.raises(splf._splf.ConfigError):
        c.stepper = "rk4"


def test_checks_run():
    c = small_config(n_paths=20, record_every=5)
    rep = splf.energy_check(c)
    assert rep["n_paths"] == 20
    assert rep["tolerance"] > 0
    c = small_config(p=2.0, n_paths=5)
    u = splf.uniqueness_check(c, eps=0.0, calibration_pairs=2)
    assert u["max_exact_separation"] < 1e-12
