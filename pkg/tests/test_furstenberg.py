"""Skew-product cocycle series: transfer identity, recipe resonances, dynamics."""

import numpy as np
import pytest

from nillab.furstenberg import (coboundary_prefix_residuals, coboundary_residual,
                                furstenberg_point, liouville_recipe,
                                make_default_furstenberg, make_furstenberg,
                                validate_resonances)

GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def fib_coeffs(K):
    fib = [1, 2]
    while len(fib) < K:
        fib.append(fib[-1] + fib[-2])
    return [(fib[k - 1], k) for k in range(1, K + 1)]


def test_coboundary_identity_small_family():
    assert coboundary_residual(GOLDEN, fib_coeffs(10), grid=200) <= 1e-10


def test_coboundary_identity_every_truncation_to_50():
    worst = coboundary_prefix_residuals(GOLDEN, fib_coeffs(50), grid=200)
    assert worst.shape == (50,)
    assert worst.max() <= 1e-10


def test_lambda_zero_freezes_fiber():
    sys = make_furstenberg(GOLDEN, fib_coeffs(5), lam=0.0)
    p = furstenberg_point(sys, 0.2, 0.7)
    q = sys.step(p)
    assert q[1] == p[1]
    assert q[0] == pytest.approx((0.2 + GOLDEN) % 1.0)


def test_empty_coefficients_flagged():
    sys = make_furstenberg(GOLDEN, [], lam=1.0)
    assert any("product rotation" in f for f in sys.flags)
    p = furstenberg_point(sys, 0.0, 0.3)
    assert sys.step(p)[0] == pytest.approx(GOLDEN)
    assert sys.step(p)[1] == pytest.approx(0.3)


def test_step_inverse_and_orbit_consistency():
    sys = make_furstenberg(GOLDEN, fib_coeffs(8), lam=0.7)
    p = furstenberg_point(sys, 0.125, 0.5)
    assert np.max(np.abs(sys.inverse_step(sys.step(p)) - p)) <= 1e-12
    orbit = sys.orbit_block(p, 150)
    q = p
    for _ in range(149):
        q = sys.step(q)
    assert np.max(np.abs(orbit[-1] - q)) <= 1e-10


def test_recipe_resonances_certified():
    alpha, coeffs = liouville_recipe(K=30)
    assert validate_resonances(alpha, coeffs)["ok"]
    # the certified bound really is strong: first-block phases are within
    # 2^-1/n^4 of an integer
    sys = make_default_furstenberg(K=30)
    r1 = min(sys.rotations[0], 1 - sys.rotations[0])
    assert r1 <= 2.0 ** (-1) / (coeffs[0][0] ** 4) / (2 * np.pi)


def test_recipe_rejects_impractical_K():
    with pytest.raises(ValueError):
        liouville_recipe(K=45)


def test_default_recipe_coboundary():
    alpha, coeffs = liouville_recipe(K=30)
    assert coboundary_residual(alpha, coeffs, grid=100) <= 1e-10


def test_exact_phases_beat_float_rounding():
    # float-rounded theta + alpha scrambles frac(n theta) for large n; the
    # exact path must not: evaluate one huge-frequency phase both ways
    alpha, coeffs = liouville_recipe(K=12)
    sys = make_furstenberg(alpha, coeffs)
    theta = 0.37
    p = furstenberg_point(sys, theta, 0.0)
    q = furstenberg_point(sys, (theta + float(alpha)) % 1.0, 0.0)
    exact_next = (p[2:] + sys.rotations) % 1.0
    # the float-constructed point q disagrees for the big frequencies
    assert np.max(np.abs(q[2:] - exact_next)) > 1e-3
    # while the dynamics' phase update is the exact one
    assert np.max(np.abs(sys.step(p)[2:] - exact_next)) <= 1e-12
