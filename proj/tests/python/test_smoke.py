import math

import numpy as np
import pytest

import tsms


TWO_Y = [1.0, 0.0]
TWO_X = np.array([[0.5, 0.0], [-0.5, 0.0]])


def test_criteria_two_point():
    assert tsms.ms_criterion(TWO_Y, TWO_X, [1.0, 0.0]) == 0.25
    assert tsms.ms_criterion(TWO_Y, TWO_X, [-1.0, 0.0]) == -0.25
    phi = 0.5 * (1.0 + math.erf(0.5 / math.sqrt(2.0)))
    assert tsms.sms_criterion(TWO_Y, TWO_X, [1.0, 0.0], 1.0) == pytest.approx(0.25 * (2 * phi - 1), rel=1e-12)


def test_first_stage_single_point():
    value = tsms.first_stage([1.0], np.array([[0.2, 0.1]]), 1.0, np.array([[0.2, 0.1]]))
    assert value[0] == pytest.approx(0.25, rel=1e-12)


def test_simulate_is_deterministic():
    y1, x1 = tsms.simulate_binary(200, [1.0, 1.0], seed=3)
    y2, x2 = tsms.simulate_binary(200, [1.0, 1.0], seed=3)
    assert y1 == y2
    np.testing.assert_array_equal(x1, x2)
    assert x1.shape == (200, 2)
    assert np.all(np.linalg.norm(x1, axis=1) < 1.0)


def test_estimate_exact_and_grid():
    y, x = tsms.simulate_binary(2000, [1.0, 1.0], seed=5)
    b = tsms.optimal_bandwidth(2, 2000)
    theta0 = np.array([1.0, 1.0]) / math.sqrt(2.0)
    ms = tsms.estimate(y, x, "ms")
    assert ms["method"] == "exact2d"
    two = tsms.estimate(y, x, "tsms", bandwidth=b)
    sms = tsms.estimate(y, x, "sms", bandwidth=b)
    assert sms["method"] == "grid-refine"
    for r in (ms, two, sms):
        assert np.linalg.norm(r["theta"]) == pytest.approx(1.0)
        assert np.dot(r["theta"], theta0) > 0.9
    assert two["value"] == pytest.approx(tsms.tsms_criterion(y, x, two["theta"], b), abs=1e-12)


def test_exact_solver_matches_dense_scan():
    y, x = tsms.simulate_binary(60, [0.3, -1.0], seed=9)
    w = [v - 0.5 for v in y]
    best = tsms.exact_argmax_2d(x, w)
    angles = np.linspace(0.0, 2 * math.pi, 20000, endpoint=False)
    scan = max(np.mean(np.array(w) * (x @ np.array([math.cos(a), math.sin(a)]) >= 0)) for a in angles)
    assert best["value"] >= scan - 1e-15


def test_rates():
    r = tsms.theoretical_rate(5, 2)
    assert r["regime"] == "mid-dim"
    assert r["alpha"] == (4, 11)
    assert r["beta"] == (1, 3)
    assert tsms.optimal_bandwidth(2, 1e5) == pytest.approx(0.1)
    slope, _ = tsms.fit_loglog_slope([250, 500, 1000, 2000], [n ** -0.4 for n in (250, 500, 1000, 2000)])
    assert slope == pytest.approx(-0.4, abs=1e-12)


def test_identity_check():
    y, x = tsms.simulate_binary(20, [1.0, 0.0], seed=2)
    lhs, rhs = tsms.population_identity_check(y, x, 0.3, [0.6, 0.8])
    assert abs(lhs - rhs) < 1e-5


def test_multi_index_estimate():
    y, x = tsms.simulate_multi_index(1000, 2, [1.0, 1.0], seed=4)
    assert x.shape == (1000, 4)
    r = tsms.estimate(y, x, "tsms-mmi", bandwidth=1000 ** -0.125, J=2)
    assert r["value"] <= 0.0
    assert np.dot(r["theta"], [1 / math.sqrt(2), 1 / math.sqrt(2)]) > 0.8


def test_experiment_runs():
    out = tsms.run_experiment(estimator="ms", n_grid=[100, 200, 400, 800], replications=50, seed=1)
    assert len(out["cells"]) == 4
    assert out["slope"] < 0


def test_validation_errors():
    with pytest.raises(ValueError):
        tsms.ms_criterion([1.0], np.array([[1.5, 0.0]]), [1.0, 0.0])
    with pytest.raises(ValueError):
        tsms.estimate(TWO_Y, TWO_X, "bogus")
    with pytest.raises(ValueError):
        tsms.theoretical_rate(3, 3)
