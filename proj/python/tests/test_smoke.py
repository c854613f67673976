import numpy as np
import pytest

import regcalc


def test_brownian_quadratic_variation():
    w = regcalc.simulate(regcalc.ProcessSpec.brownian(), steps=4096, seed=3)
    assert w.shape == (4097,)
    s = regcalc.quadratic_variation(w)
    assert len(s["eps"]) == 6
    assert abs(s["extrapolated"] - 1.0) < 0.15


def test_ensemble_matches_single_paths():
    spec = regcalc.ProcessSpec.fbm(0.7)
    block = regcalc.ensemble(spec, steps=64, paths=3, seed=9)
    for i in range(3):
        single = regcalc.simulate(spec, steps=64, seed=regcalc.derive_seed(9, i))
        np.testing.assert_array_equal(block[i], single)


def test_forward_integral_of_brownian_motion():
    w = regcalc.simulate(regcalc.ProcessSpec.brownian(), steps=4096, seed=4)
    s = regcalc.forward_integral(w, w)
    assert s["extrapolated"] == pytest.approx(0.5 * (w[-1] ** 2 - 1.0), abs=0.1)


def test_bad_input_raises():
    with pytest.raises(ValueError):
        regcalc.quadratic_variation(np.zeros(10), ladder=[2, 4])
    with pytest.raises(ValueError):
        regcalc.ProcessSpec.deterministic("cosh")


def test_window_and_ito_checks():
    w = regcalc.simulate(regcalc.ProcessSpec.brownian(), steps=1024, seed=5)
    d = regcalc.window_qv(w, "diag")
    assert d["closed_form_unit_rate"] == pytest.approx(0.5, rel=0.01)
    rep = regcalc.ito_check(w, "x2")
    assert abs(rep["levels"][-1]["residual"]) < 1e-10
    rep = regcalc.banach_ito_check(w, "sqnorm")
    assert len(rep["levels"]) == 6


def test_vanilla_and_replication():
    v = regcalc.VanillaSolution("square", sigma=1.0)
    assert v.value(0.0, 0.5) == pytest.approx(1.25)
    assert v.dx(0.2, 0.5) == pytest.approx(1.0)
    r = regcalc.replicate(v, regcalc.ProcessSpec.brownian(), steps=1024, paths=20, seed=2)
    assert r["residual"].shape == (20,)
    np.testing.assert_allclose(r["residual"], r["h"] - r["G0"] - r["hedge_integral"], atol=1e-12)
    assert r["relative_error"] < 0.2


def test_operator_pairing():
    rng = np.random.default_rng(0)
    xs = [rng.normal(size=4) for _ in range(3)]
    ys = [rng.normal(size=4) for _ in range(3)]
    form = rng.normal(size=(4, 4))
    tu = regcalc.tensor_to_operator(xs, ys)
    direct = sum(x @ form @ y for x, y in zip(xs, ys))
    assert regcalc.pairing_trace(tu, form) == pytest.approx(direct)
    b = regcalc.trace_and_bounds(rng.normal(size=(5, 5)))
    assert b["bound_ok"]


def test_kolmogorov_against_oracle():
    d = regcalc.kolmogorov_ou(dim=8, paths=20000, seed=1)
    assert abs(d["v_hat"] - d["oracle"]) < 5 * d["stderr"]
