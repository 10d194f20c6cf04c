"""Bubble evaluation, harmonic correction, and projection properties."""

import numpy as np
import pytest

from bnlab import DomainError, Params, alpha_n, omega_n
from bnlab.bubbles import (
    Bubble,
    bubble_derivatives,
    eval_bubble,
    eval_normalized,
    harmonic_correction,
    harmonic_correction_exact,
    kernel_eval,
    projected_bubble,
)
from bnlab.green import BallGreen, regular_part


def _radial_laplacian(f, r, h=1e-5):
    return (f(r + h) - 2.0 * f(r) + f(r - h)) / h**2


def test_bubble_values():
    b = Bubble(4, 2.0, np.zeros(4))
    assert eval_bubble(b, np.zeros(4)) == pytest.approx(2.0, rel=1e-14)
    x = np.array([0.5, 0.0, 0.0, 0.0])
    assert eval_bubble(b, x) == pytest.approx(1.0, rel=1e-14)  # 2/(1+4*0.25)


def test_bubble_validation():
    with pytest.raises(DomainError):
        Bubble(2, 1.0, np.zeros(2))
    with pytest.raises(DomainError):
        Bubble(4, -1.0, np.zeros(4))


def test_normalized_bubble_solves_equation():
    """-u'' - (N-1)/r u' = u^{2*-1} for the height-1 profile."""
    for N in (3, 4, 5, 7):
        p = Params(N, 2.0 + 1e-9) if N > 4 else Params(N, 3.0)
        r, h = 1.3, 1e-5

        def f(s):
            return eval_normalized(N, np.concatenate(([s], np.zeros(N - 1))))

        lap = _radial_laplacian(f, r, h) + (N - 1) / r * (f(r + h) - f(r - h)) / (2 * h)
        rhs = -f(r) ** (2.0 * N / (N - 2.0) - 1.0)
        assert lap == pytest.approx(rhs, rel=1e-5)


def test_bubble_derivatives_match_finite_differences():
    b = Bubble(5, 3.0, np.array([0.1, 0.0, 0.0, 0.0, 0.0]))
    x = np.array([0.4, 0.2, 0.0, 0.0, 0.0])
    dlam, dcen = bubble_derivatives(b, x)
    h = 1e-6
    fd_lam = (
        eval_bubble(Bubble(5, 3.0 + h, b.center), x)
        - eval_bubble(Bubble(5, 3.0 - h, b.center), x)
    ) / (2 * h)
    assert dlam == pytest.approx(fd_lam, rel=1e-8)
    e0 = np.zeros(5)
    e0[0] = h
    fd_c = (
        eval_bubble(Bubble(5, 3.0, b.center + e0), x)
        - eval_bubble(Bubble(5, 3.0, b.center - e0), x)
    ) / (2 * h)
    assert dcen[0] == pytest.approx(fd_c, rel=1e-7)


def test_kernel_solves_linearized_equation():
    """The radial kernel satisfies -Delta z = (2*-1) U^{2*-2} z."""
    N = 5
    two_star = 2.0 * N / (N - 2.0)
    r, h = 0.8, 1e-4

    def z(s):
        return kernel_eval(N, 0, np.concatenate(([s], np.zeros(N - 1))))

    def u(s):
        return eval_normalized(N, np.concatenate(([s], np.zeros(N - 1))))

    lap = _radial_laplacian(z, r, h) + (N - 1) / r * (z(r + h) - z(r - h)) / (2 * h)
    rhs = -(two_star - 1.0) * u(r) ** (two_star - 2.0) * z(r)
    assert lap == pytest.approx(rhs, rel=1e-5)


def test_harmonic_correction_quadrature_vs_exact():
    # the two-angle reduction is spectrally accurate for N = 3, 4; for odd
    # N >= 5 a half-integer power appears and convergence is only algebraic
    cases = [
        (Bubble(3, 4.0, np.array([0.3, 0.1, 0.0])), np.array([0.2, -0.4, 0.1]), 1e-12),
        (Bubble(4, 2.0, np.zeros(4)), np.array([0.5, 0.0, 0.0, 0.0]), 1e-12),
        (Bubble(5, 7.0, np.array([0.0, 0.2, 0.0, 0.0, 0.0])), np.zeros(5), 1e-5),
    ]
    for b, x, tol in cases:
        hq = harmonic_correction(b, 1.0, x)
        hx = harmonic_correction_exact(b, 1.0, x)
        assert hq == pytest.approx(hx, rel=tol)


def test_harmonic_correction_centered_is_constant():
    b = Bubble(4, 10.0, np.zeros(4))
    pts = [np.array([r, 0.0, 0.0, 0.0]) for r in (0.0, 0.3, 0.9)]
    vals = [harmonic_correction_exact(b, 1.0, x) for x in pts]
    target = (10.0 / (1.0 + 100.0)) ** 1.0
    for v in vals:
        assert v == pytest.approx(target, rel=1e-12)


def test_harmonic_correction_is_harmonic():
    """Five-point Laplacian of the correction vanishes inside the ball."""
    b = Bubble(3, 2.0, np.array([0.2, 0.0, 0.0]))
    x0 = np.array([0.1, 0.3, -0.2])
    h = 1e-3
    lap = -2.0 * 3 * harmonic_correction_exact(b, 1.0, x0)
    for i in range(3):
        e = np.zeros(3)
        e[i] = h
        lap += harmonic_correction_exact(b, 1.0, x0 + e)
        lap += harmonic_correction_exact(b, 1.0, x0 - e)
    assert abs(lap / h**2) < 1e-4


def test_projected_bubble_vanishes_on_boundary():
    b = Bubble(4, 5.0, np.array([0.2, 0.0, 0.0, 0.0]))
    x = np.array([0.0, 1.0, 0.0, 0.0])
    assert abs(projected_bubble(b, 1.0, x)) < 1e-8


def test_projection_robin_limit_order():
    """lam^{(N-2)/2} psi -> (N-2) omega_N H(0,x) at rate O(lam^{-2})."""
    N = 4
    g = BallGreen(N)
    x = np.array([0.5, 0.0, 0.0, 0.0])
    target = (N - 2.0) * omega_n(N) * regular_part(g, np.zeros(N), x)
    errs = []
    for lam in (10.0, 100.0, 1000.0):
        val = lam ** ((N - 2.0) / 2.0) * harmonic_correction_exact(
            Bubble(N, lam, np.zeros(N)), 1.0, x
        )
        errs.append(abs(val - target) / target)
    assert errs[1] < errs[0] and errs[2] < errs[1]
    # each decade in lam should buy about two decades of accuracy
    assert errs[1] / errs[0] < 0.04
    assert errs[2] / errs[1] < 0.04


def test_alpha_n_matches_normalized_height():
    # U_normalized = alpha_N^{-1} * lam^{(N-2)/2}-scaled bubble at lam = 1/k
    for N in (3, 4, 5):
        k = np.sqrt(N * (N - 2.0))
        b = Bubble(N, 1.0, np.zeros(N))
        x = np.concatenate(([1.7], np.zeros(N - 1)))
        u_norm = eval_normalized(N, x * k)
        assert alpha_n(N) * u_norm == pytest.approx(
            alpha_n(N) * eval_bubble(b, x), rel=1e-12
        )
