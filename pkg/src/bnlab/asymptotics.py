"""Continuation sweeps in the shooting parameter and quantitative checks of
the blow-up asymptotics: rate limit, energy-deficit exponent, profile
convergence, uniform upper bound, boundary Green-function limit, and the
three-dimensional solution fold.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bubbles import eval_normalized
from .constants import Params, alpha_n, alpha_nq, omega_n, sobolev_sn2_exact
from .errors import DomainError, FitFailureError
from .green import BallGreen, green
from .solver import RadialSolution, scale_to_unit_ball, shoot

__all__ = [
    "SweepRecord",
    "FitReport",
    "default_grid",
    "sweep",
    "sweep_with_solutions",
    "blowup_rate_fit",
    "deficit_rate_fit",
    "profile_distance",
    "upper_bound_check",
    "boundary_green_limit",
    "branch_map",
    "blowup_target",
]

SWEEP_FIELDS = (
    "eps_tilde",
    "eps",
    "mu",
    "R_tilde",
    "S_eps",
    "blowup_product",
    "deficit",
    "profile_dist",
    "upper_bound_ratio",
    "nehari_residual",
    "pohozaev_residual",
)


@dataclass
class SweepRecord:
    """One continuation point with all scalar diagnostics."""

    eps_tilde: float
    eps: float
    mu: float
    R_tilde: float
    S_eps: float
    blowup_product: float  # eps * mu^{q+2-2*}
    deficit: float  # S^{N/2}/N - S_eps
    profile_dist: float  # sup |u_tilde - U| on [0, 10]
    upper_bound_ratio: float  # sup u_tilde / U on [0, R_tilde]
    nehari_residual: float
    pohozaev_residual: float


@dataclass
class FitReport:
    """Outcome of a limit or rate fit against its closed-form target."""

    limit_estimate: float
    target: float
    rel_error: float
    slope_estimate: float = float("nan")
    slope_target: float = float("nan")
    details: dict = field(default_factory=dict)


def default_grid(n: int = 25, lo: float = 1e-8, hi: float = 1e-2) -> np.ndarray:
    """Log-uniform eps_tilde grid, decreasing from hi to lo."""
    return np.logspace(np.log10(hi), np.log10(lo), n)


def blowup_target(p: Params) -> float:
    """alpha_{N,q} * R(0) on the unit ball: the limit of eps*mu^{q+2-2*}."""
    g = BallGreen(p.N)
    from .green import robin

    return alpha_nq(p) * robin(g, np.zeros(p.N))


def _solve_one(args):
    p, et, r_max = args
    s = shoot(p, et, r_max)
    if s.first_zero is None:
        return None
    return scale_to_unit_ball(p, s)


def _record(p: Params, sol: RadialSolution, sn2: float) -> SweepRecord:
    power = p.q + 2.0 - p.two_star
    return SweepRecord(
        eps_tilde=sol.eps_tilde,
        eps=sol.eps,
        mu=sol.mu,
        R_tilde=sol.R_tilde,
        S_eps=sol.energy,
        blowup_product=sol.eps * sol.mu**power,
        deficit=sn2 / p.N - sol.energy,
        profile_dist=profile_distance(p, sol),
        upper_bound_ratio=upper_bound_check(p, sol),
        nehari_residual=sol.nehari_residual,
        pohozaev_residual=sol.pohozaev_residual,
    )


def sweep_with_solutions(p: Params, eps_tilde_grid=None, jobs: int = 1):
    """Run the continuation and return (records, solutions), grid-ordered.

    Failures at individual grid points (no first zero within the span) are
    skipped, not fatal.
    """
    p.require_regime()
    grid = default_grid() if eps_tilde_grid is None else np.asarray(
        eps_tilde_grid, dtype=float
    )
    if np.any(grid <= 0) or np.any(np.diff(grid) >= 0):
        raise DomainError("eps_tilde grid must be positive, strictly decreasing")
    from .solver import _estimate_r_max

    tasks = [(p, float(et), _estimate_r_max(p, float(et))) for et in grid]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            sols = list(pool.map(_solve_one, tasks))
    else:
        sols = [_solve_one(t) for t in tasks]
    sn2 = sobolev_sn2_exact(p.N)
    records, kept = [], []
    for sol in sols:
        if sol is None:
            continue
        records.append(_record(p, sol, sn2))
        kept.append(sol)
    return records, kept


def sweep(p: Params, eps_tilde_grid=None, jobs: int = 1):
    """Continuation records only; see sweep_with_solutions."""
    return sweep_with_solutions(p, eps_tilde_grid, jobs=jobs)[0]


def _aitken(x0: float, x1: float, x2: float) -> float:
    d1, d2 = x1 - x0, x2 - x1
    denom = d2 - d1
    if denom == 0.0:
        return x2
    return x2 - d2 * d2 / denom


def blowup_rate_fit(p: Params, records) -> FitReport:
    """Extrapolate the tail of blowup_product and compare with the target.

    On a log-uniform grid the leading correction decays geometrically in the
    record index, so Aitken's delta-squared applied to the last three values
    removes it; stability is gauged by re-extrapolating without the last
    point.
    """
    if len(records) < 6:
        raise FitFailureError("blow-up fit needs at least 6 records")
    eps = np.array([r.eps for r in records])
    if eps[0] / eps[-1] < 1e3:
        raise FitFailureError("blow-up fit needs at least 3 decades of eps")
    prod = [r.blowup_product for r in records]
    est = _aitken(*prod[-3:])
    est_dropped = _aitken(*prod[-4:-1])
    target = blowup_target(p)
    stable = abs(est - est_dropped) <= 0.01 * abs(est)
    return FitReport(
        limit_estimate=est,
        target=target,
        rel_error=abs(est - target) / target,
        details={
            "tail_raw": prod[-1],
            "estimate_dropping_last": est_dropped,
            "stable_to_1pct": bool(stable),
        },
    )


def deficit_rate_fit(p: Params, records) -> FitReport:
    """Least-squares slope of log(deficit) vs log(eps) over the tail half.

    The target exponent is (2N-4)/((N-2)q - 4).
    """
    if len(records) < 6:
        raise FitFailureError("deficit fit needs at least 6 records")
    eps = np.array([r.eps for r in records])
    deficit = np.array([r.deficit for r in records])
    keep = deficit > 1e-13
    eps, deficit = eps[keep], deficit[keep]
    tail = len(eps) // 2
    x, y = np.log(eps[tail:]), np.log(deficit[tail:])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = np.sum((y - y.mean()) ** 2)
    r2 = 1.0 - np.sum(resid**2) / ss_tot if ss_tot > 0 else 1.0
    target = (2.0 * p.N - 4.0) / ((p.N - 2.0) * p.q - 4.0)
    return FitReport(
        limit_estimate=float(np.exp(intercept)),
        target=target,
        rel_error=abs(slope - target) / target,
        slope_estimate=float(slope),
        slope_target=target,
        details={"r_squared": float(r2), "prefactor": float(np.exp(intercept))},
    )


def profile_distance(p: Params, sol: RadialSolution, grid=None) -> float:
    """sup over the fixed grid of |u_tilde(s) - U(s)|, U the normalized bubble.

    u_tilde is the height-1 rescaling of the solution,
    v(x) = mu^{-1} u(x mu^{-(2*-2)/2}), restricted to radii.
    """
    s = np.linspace(0.0, 10.0, 512) if grid is None else np.asarray(grid)
    s = s[s <= sol.R_tilde]
    u, _ = sol.shoot_result.eval(s)
    k = p.N * (p.N - 2.0)
    U = (k / (k + s * s)) ** ((p.N - 2.0) / 2.0)
    return float(np.max(np.abs(u - U)))


def upper_bound_check(p: Params, sol: RadialSolution, n_pts: int = 2048) -> float:
    """sup of u_eps over the sharp bubble bound with constant 1.

    In scaled variables the ratio is u_tilde(s)/U(s) on [0, R_tilde]; the
    bound saturates at the origin by construction.
    """
    Rt = sol.R_tilde
    s = np.concatenate(([0.0], np.geomspace(1e-3, Rt, n_pts)))
    u, _ = sol.shoot_result.eval(s)
    k = p.N * (p.N - 2.0)
    U = (k / (k + s * s)) ** ((p.N - 2.0) / 2.0)
    return float(np.max(u / U))


def boundary_green_limit(p: Params, solutions, band=(0.7, 0.95),
                         n_pts: int = 64) -> FitReport:
    """Deviation of mu * u_eps from its Green-function limit on a radius band.

    The limit away from the concentration point is
    (1/N) alpha_N^{2*} omega_N G(x, 0); the deviation per solution is the
    sup over the band relative to the sup of the limit function.
    """
    N = p.N
    r = np.linspace(band[0], band[1], n_pts)
    g = BallGreen(N)
    coeff = alpha_n(N) ** p.two_star * omega_n(N) / N
    x = np.zeros(N)
    target = np.array([coeff * green(g, _radial_point(N, ri), x) for ri in r])
    scale = np.max(np.abs(target))
    devs = []
    for sol in solutions:
        u, _ = sol.eval_unit(r)
        devs.append(float(np.max(np.abs(sol.mu * u - target)) / scale))
    devs = np.array(devs)
    return FitReport(
        limit_estimate=float(devs[-1]),
        target=0.0,
        rel_error=float(devs[-1]),
        details={"deviations": devs, "decreasing": bool(np.all(np.diff(devs) < 0))},
    )


def _radial_point(N: int, r: float) -> np.ndarray:
    x = np.zeros(N)
    x[0] = r
    return x


def branch_map(p: Params, eps_tilde_grid=None) -> dict:
    """Tabulate eps as a function of mu across the shooting parameter.

    For N = 3 and q in (2, 4] the map is non-monotone: eps attains an
    interior minimum eps0, above which two solution heights coexist.
    """
    grid = (
        np.logspace(1.0, -4.0, 51)
        if eps_tilde_grid is None
        else np.asarray(eps_tilde_grid, dtype=float)
    )
    from .solver import _estimate_r_max

    mu, eps, ets = [], [], []
    for et in grid:
        s = shoot(p, float(et), _estimate_r_max(p, float(et)))
        if s.first_zero is None:
            continue
        sol = scale_to_unit_ball(p, s)
        ets.append(float(et))
        mu.append(sol.mu)
        eps.append(sol.eps)
    mu = np.array(mu)
    eps = np.array(eps)
    order = np.argsort(mu)
    mu, eps = mu[order], eps[order]
    ets = np.array(ets)[order]
    i0 = int(np.argmin(eps))
    has_fold = 0 < i0 < len(eps) - 1
    return {
        "mu": mu,
        "eps": eps,
        "eps_tilde": ets,
        "eps0": float(eps[i0]),
        "mu_at_eps0": float(mu[i0]),
        "has_fold": bool(has_fold),
    }
