"""Closed-form constants of the blow-up analysis and their quadrature oracles.

All constants are expressed through the Gamma function, evaluated by a
Lanczos approximation (g=7, 9 coefficients).  Each Gamma-based formula has an
independent radial-quadrature cross-check exposed alongside it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .quadrature import improper_radial

__all__ = [
    "Params",
    "ConstantSet",
    "gamma_fn",
    "omega_n",
    "c_nq",
    "c_nq_quadrature",
    "alpha_n",
    "alpha_nq",
    "sobolev_sn2",
    "sobolev_sn2_exact",
    "sobolev_sn2_from_mass",
    "constant_set",
]

_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma_fn(x: float) -> float:
    """Gamma(x) for x > 0 via the Lanczos approximation."""
    if not x > 0.0:
        raise DomainError(f"gamma_fn requires x > 0, got {x}")
    if x < 0.5:
        # reflection keeps the Lanczos series in its accurate range
        return math.pi / (math.sin(math.pi * x) * gamma_fn(1.0 - x))
    z = x - 1.0
    acc = _LANCZOS_COEFFS[0]
    for i, c in enumerate(_LANCZOS_COEFFS[1:], start=1):
        acc += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * acc


def omega_n(N: int) -> float:
    """Surface area of the unit sphere S^{N-1} in R^N: 2 pi^{N/2} / Gamma(N/2)."""
    if N < 2:
        raise DomainError(f"omega_n requires N >= 2, got {N}")
    return 2.0 * math.pi ** (N / 2.0) / gamma_fn(N / 2.0)


@dataclass(frozen=True)
class Params:
    """Dimension N and subcritical exponent q of the perturbed critical problem."""

    N: int
    q: float

    def __post_init__(self):
        if self.N < 3:
            raise DomainError(f"dimension must satisfy N >= 3, got {self.N}")
        if not self.q > 0:
            raise DomainError(f"exponent q must be positive, got {self.q}")

    @property
    def two_star(self) -> float:
        return 2.0 * self.N / (self.N - 2.0)

    @property
    def q_lower(self) -> float:
        return max(2.0, 4.0 / (self.N - 2.0))

    @property
    def regime_ok(self) -> bool:
        return self.q_lower < self.q < self.two_star

    def require_regime(self) -> None:
        if not self.regime_ok:
            raise DomainError(
                f"(N={self.N}, q={self.q}) outside the admissible regime "
                f"q in ({self.q_lower}, {self.two_star})"
            )


@dataclass(frozen=True)
class ConstantSet:
    alpha_N: float
    omega_N: float
    C_Nq: float
    alpha_Nq: float
    sobolev_SN2: float


def alpha_n(N: int) -> float:
    """(N(N-2))^{(N-2)/4}, the height normalization of the standard bubble."""
    if N < 3:
        raise DomainError(f"alpha_n requires N >= 3, got {N}")
    return (N * (N - 2.0)) ** ((N - 2.0) / 4.0)


def c_nq(p: Params) -> float:
    """Gamma(N/2) Gamma((N-2)q/2 - N/2) / (2 Gamma((N-2)q/2))."""
    N, q = p.N, p.q
    a = (N - 2.0) * q / 2.0
    if a - N / 2.0 <= 0.0:
        raise DomainError(
            f"integral diverges: need q > N/(N-2), got q={q} at N={N}"
        )
    return gamma_fn(N / 2.0) * gamma_fn(a - N / 2.0) / (2.0 * gamma_fn(a))


def c_nq_quadrature(p: Params, n: int = 512) -> float:
    """Oracle for c_nq: int_0^inf r^{N-1} (1+r^2)^{-(N-2)q/2} dr by quadrature."""
    N, q = p.N, p.q
    a = (N - 2.0) * q / 2.0
    if a - N / 2.0 <= 0.0:
        raise DomainError(
            f"integral diverges: need q > N/(N-2), got q={q} at N={N}"
        )
    return improper_radial(lambda r: r ** (N - 1) * (1.0 + r * r) ** (-a), n=n)


def alpha_nq(p: Params) -> float:
    """Limit constant of the product eps * ||u||_inf^{q+2-2*}.

    (2q/(2*-q)) * (alpha_N^{2*} omega_N / N^2)
        * Gamma((N-2)q/2) / (Gamma(N/2) Gamma((N-2)q/2 - N/2))
    """
    p.require_regime()
    N, q = p.N, p.q
    a = (N - 2.0) * q / 2.0
    aN = alpha_n(N)
    return (
        (2.0 * q / (p.two_star - q))
        * (aN ** p.two_star * omega_n(N) / N**2)
        * gamma_fn(a)
        / (gamma_fn(N / 2.0) * gamma_fn(a - N / 2.0))
    )


def _grad_sq_unnormalized_bubble(N: int, n: int = 512) -> float:
    # U_{1,0}(r) = (1+r^2)^{-(N-2)/2 / ...}: profile (1/(1+r^2))^{(N-2)/2},
    # U' = -(N-2) r (1+r^2)^{-N/2}
    def f(r):
        up = -(N - 2.0) * r * (1.0 + r * r) ** (-N / 2.0)
        return up * up * r ** (N - 1)

    return omega_n(N) * improper_radial(f, n=n)


def sobolev_sn2_exact(N: int) -> float:
    """S^{N/2} in closed form: alpha_N^{2*} omega_N Gamma(N/2)^2 / (2 Gamma(N)).

    The radial mass integral of the un-normalized bubble is the q = 2* case
    of the c_nq Beta integral.
    """
    if N < 3:
        raise DomainError(f"sobolev_sn2_exact requires N >= 3, got {N}")
    two_star = 2.0 * N / (N - 2.0)
    return (
        alpha_n(N) ** two_star
        * omega_n(N)
        * gamma_fn(N / 2.0) ** 2
        / (2.0 * gamma_fn(float(N)))
    )


def sobolev_sn2(N: int, n: int = 512) -> float:
    """S^{N/2} = alpha_N^2 * int |grad U_{1,0}|^2 by radial quadrature."""
    if N < 3:
        raise DomainError(f"sobolev_sn2 requires N >= 3, got {N}")
    return alpha_n(N) ** 2 * _grad_sq_unnormalized_bubble(N, n=n)


def sobolev_sn2_from_mass(N: int, n: int = 512) -> float:
    """Second oracle: S^{N/2} = alpha_N^{2*} * int U_{1,0}^{2*}."""
    if N < 3:
        raise DomainError(f"sobolev_sn2_from_mass requires N >= 3, got {N}")
    two_star = 2.0 * N / (N - 2.0)

    def f(r):
        u = (1.0 / (1.0 + r * r)) ** ((N - 2.0) / 2.0)
        return u**two_star * r ** (N - 1)

    return alpha_n(N) ** two_star * omega_n(N) * improper_radial(f, n=n)


def constant_set(p: Params) -> ConstantSet:
    p.require_regime()
    return ConstantSet(
        alpha_N=alpha_n(p.N),
        omega_N=omega_n(p.N),
        C_Nq=c_nq(p),
        alpha_Nq=alpha_nq(p),
        sobolev_SN2=sobolev_sn2(p.N),
    )
