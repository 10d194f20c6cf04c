"""Bubble decomposition: orthogonality, projection coefficient, and the
decay order of the perturbation part."""

import numpy as np
import pytest

from bnlab import (
    DomainError,
    FitFailureError,
    Params,
    alpha_n,
    fit_decomposition,
    h1_norm_radial,
    omega_n,
    perturbation_order_fit,
    w_decay_exponent,
)


def test_w_decay_table():
    assert w_decay_exponent(Params(4, 3.0)) == 2.0
    assert w_decay_exponent(Params(4, 2.2)) == 1.0
    assert w_decay_exponent(Params(5, 3.0)) == 3.0
    assert w_decay_exponent(Params(5, 2.1)) == 2.5
    assert w_decay_exponent(Params(3, 5.0)) == 1.0
    assert w_decay_exponent(Params(6, 2.5)) == 4.0
    assert w_decay_exponent(Params(8, 2.1)) == 5.0
    with pytest.raises(DomainError):
        w_decay_exponent(Params(3, 3.0))


def test_h1_norm_known_function():
    # f = 1 - r^2 on the unit ball, N = 3: ||grad f||^2 = 4pi * int 4 r^4 dr
    r = np.linspace(0.0, 1.0, 2001)
    f = 1.0 - r * r
    target = np.sqrt(omega_n(3) * 4.0 / 5.0)
    assert h1_norm_radial(Params(3, 5.0), r, f) == pytest.approx(target, rel=1e-6)


def test_h1_norm_requires_boundary_zero():
    r = np.linspace(0.0, 1.0, 101)
    with pytest.raises(DomainError):
        h1_norm_radial(Params(3, 5.0), r, np.ones_like(r))


def test_decomposition_orthogonality(decs43):
    for d in decs43:
        r1, r2 = d.ortho_residuals
        assert r1 <= 1e-6
        assert r2 <= 1e-6


def test_alpha_converges(p43, decs43):
    alphas = np.array([d.alpha for d in decs43])
    errs = np.abs(alphas - alpha_n(p43.N)) / alpha_n(p43.N)
    assert errs[-1] < 1e-4
    assert errs[-1] < errs[0]


def test_lambda_tracks_height(p43, sweep43, decs43):
    """lam / mu^{2/(N-2)} approaches a constant as the solution concentrates."""
    _, sols = sweep43
    ratios = np.array([
        d.lam / s.mu ** (2.0 / (p43.N - 2.0)) for d, s in zip(decs43, sols)
    ])
    assert np.all(ratios > 0)
    tail = ratios[-5:]
    assert np.max(tail) - np.min(tail) < 1e-3 * np.mean(tail)


def test_w_norm_shrinks(decs43):
    w = np.array([d.w_h1_norm for d in decs43])
    assert w[-1] < w[0]
    assert w[-1] < 1e-6


def test_order_fit_requires_enough_points(p43, decs43):
    with pytest.raises(FitFailureError):
        perturbation_order_fit(p43, decs43[:4])


def test_order_fit_slope(p43, decs43):
    fit = perturbation_order_fit(p43, decs43)
    # the table order is an upper bound on ||w||, so the fitted slope may be
    # steeper (more negative) but not shallower
    assert fit.slope_estimate <= fit.slope_target + 0.3
