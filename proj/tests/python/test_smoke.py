import json
import math

import numpy as np
import pytest

import l1est


def test_best_approx_degree_two():
    s = l1est.best_approx(1)
    assert s["delta"] == pytest.approx(0.125, abs=1e-12)
    assert s["alternation_points"] == pytest.approx([-1.0, -0.5, 0.0, 0.5, 1.0], abs=1e-9)
    assert s["coefficients"] == pytest.approx([0.125, 1.0], abs=1e-12)


def test_hermite_values():
    assert l1est.hermite(3, 2.0) == pytest.approx(2.0)
    assert l1est.hermite_second_moment(2, 1.0) == pytest.approx(7.0)


def test_estimate_on_zeros():
    y = np.zeros(20)
    assert l1est.estimate(y, "bounded", M=1.0, K=1) == pytest.approx(-0.875)
    assert l1est.estimate(y.tolist(), "bounded", M=1.0, K=1, basis="chebyshev") == pytest.approx(-2 / math.pi)


def test_estimate_rejects_bad_input():
    with pytest.raises(ValueError):
        l1est.estimate(np.zeros(20), "bounded")
    with pytest.raises(ValueError):
        l1est.estimate(np.zeros((4, 5)), "bounded", M=1.0)
    with pytest.raises(ValueError):
        l1est.estimate(np.zeros(20), "nonsense")


def test_prior_pair_and_chi_square():
    p = l1est.prior_pair(2)
    assert p["nu0"]["weights"] == pytest.approx([0.125, 0.75, 0.125])
    assert p["nu0"]["atoms"] == pytest.approx([-1.0, 0.0, 1.0])
    assert p["nu1"]["atoms"] == pytest.approx([-0.5, 0.5])
    nu0, nu1 = p["nu0"], p["nu1"]
    i1 = l1est.chi_square(nu0["atoms"], nu0["weights"], nu1["atoms"], nu1["weights"])
    assert i1 == pytest.approx(6.6560083935783117e-4, rel=1e-8)
    i3 = l1est.chi_square(nu0["atoms"], nu0["weights"], nu1["atoms"], nu1["weights"], n=3)
    assert i3 == pytest.approx((1 + i1) ** 3 - 1, rel=1e-12)
    assert i1 <= l1est.chi_square_tail_bound(1.0, 2)


def test_run_config_matches_across_workers():
    config = {
        "seed": 5,
        "scenarios": [
            {"id": "z", "n": 500, "replications": 30, "theta": {"family": "zero"},
             "estimator": {"variant": "bounded", "M": 1.0}},
        ],
    }
    a = l1est.run_config(json.dumps(config), workers=1)
    b = l1est.run_config(json.dumps(config), workers=3)
    assert a == b
    assert a[0]["scenario_id"] == "z"
    assert a[0]["mse"] == pytest.approx(a[0]["bias"] ** 2 + a[0]["variance"], rel=1e-12)


def test_selftest_passes():
    checks = l1est.selftest()
    assert len(checks) == 10
    assert all(ok for _, ok, _ in checks)
