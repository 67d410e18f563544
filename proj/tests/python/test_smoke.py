import json
import math

import pytest

import hawkes_heston as hh


def test_default_config_round_trip():
    cfg = hh.default_config()
    assert cfg["model"]["kappa"] == 2.0
    assert cfg["jump_law"] == {"type": "exponential", "rate": 10.0}
    assert hh.c_bounds(cfg) == hh.c_bounds(None)


def test_c_bounds_ordering():
    b = hh.c_bounds()
    assert 0 < b["c_s"] < b["c_l"] <= b["riccati_cap"]
    assert b["c_l"] == pytest.approx(7.7566, abs=1e-4)


def test_solve_odes_zero_exponent():
    sol = hh.solve_odes(0.0, steps=20)
    assert len(sol["t"]) == 21
    assert all(x == 0.0 for x in sol["G"] + sol["H"] + sol["F"])
    assert sol["bound_m0"] == 1.0


def test_solve_odes_terminal_values():
    c = 0.5 * hh.c_bounds()["c_l"]
    sol = hh.solve_odes(c, steps=200)
    assert sol["G"][-1] == sol["H"][-1] == sol["F"][-1] == 0.0
    assert sol["bound_m0"] > 1.0


def test_simulate_shapes_and_determinism():
    a = hh.simulate(3, steps=10, seed=7)
    b = hh.simulate(3, steps=10, seed=7)
    assert a == b
    assert len(a) == 3
    for p in a:
        assert len(p["v"]) == len(p["t"]) == 11
        assert min(p["v"]) > 0
        assert p["log_s"][0] == pytest.approx(math.log(100.0))
        assert len(p["event_times"]) == len(p["marks"])


def test_exp_moment_at_zero():
    (r,) = hh.exp_moment([0.0], 200, steps=20)
    assert r["estimate"] == 1.0
    assert r["pass"]


def test_martingale_and_classification():
    c_l = hh.c_bounds()["c_l"]
    a = 0.3 * math.sqrt(2 * c_l)
    assert hh.classify(a, c_l, -0.5) in ("EMM", "ELMM")
    reports = hh.martingale([a], 2000, steps=20)
    assert len(reports) == 2
    assert all(r["pass"] for r in reports)


def test_invalid_config_raises():
    with pytest.raises(ValueError):
        hh.c_bounds({"model": {"sigma": 1.0}})
    with pytest.raises(ValueError):
        hh.c_bounds({"model": {"kapa": 1.0}})


def test_quick_verify():
    out = hh.verify("quick")
    assert out["passed"]
    assert json.dumps(out) == json.dumps(hh.verify("quick", workers=2))
