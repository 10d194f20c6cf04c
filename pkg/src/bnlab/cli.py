"""Command-line surface: solve, sweep, verify, decompose, spectrum,
constants, branch-map.  All outputs are deterministic CSV/JSON for
downstream plotting; numbers carry 17 significant digits.

Exit codes: 0 success, 1 verification failure, 2 invalid configuration,
3 unreachable target parameter, 4 internal numerical failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import constants as cst
from .constants import Params
from .errors import (
    BnlabError,
    DomainError,
    FitFailureError,
    IntegrationFailureError,
    UnreachableEpsError,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_BAD_CONFIG = 2
EXIT_UNREACHABLE = 3
EXIT_NUMERICAL = 4

SCHEMA_VERSION = "1"

PROFILE_HEADER = "r,u,du"
SWEEP_HEADER = (
    "eps_tilde,eps,mu,R_tilde,S_eps,blowup_product,deficit,"
    "profile_dist,upper_bound_ratio,nehari_residual,pohozaev_residual"
)


def _fmt(x, digits: int = 17) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if x is None:
        return "null"
    v = float(x)
    if np.isnan(v):
        return '"nan"'
    if np.isinf(v):
        return '"inf"' if v > 0 else '"-inf"'
    return format(v, f".{digits}g")


def _json(obj, digits: int = 17) -> str:
    """Minimal deterministic JSON emitter with fixed-significance floats."""
    if isinstance(obj, dict):
        items = ",".join(
            f'"{k}":{_json(v, digits)}' for k, v in obj.items()
        )
        return "{" + items + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ",".join(_json(v, digits) for v in obj) + "]"
    if isinstance(obj, str):
        return f'"{obj}"'
    return _fmt(obj, digits)


def _emit(text: str, path) -> None:
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _params(args) -> Params:
    p = Params(args.n, args.q)
    if not p.regime_ok:
        raise DomainError(
            f"(N={p.N}, q={p.q}) outside the admissible regime: "
            f"need q in ({p.q_lower}, {p.two_star})"
        )
    return p


# ---------------------------------------------------------------- commands


def cmd_constants(args) -> int:
    p = _params(args)
    from .asymptotics import blowup_target

    c = cst.constant_set(p)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "n": p.N,
        "q": p.q,
        "alpha_n": c.alpha_N,
        "omega_n": c.omega_N,
        "c_nq": c.C_Nq,
        "alpha_nq": c.alpha_Nq,
        "s_n2": cst.sobolev_sn2_exact(p.N),
        "blowup_target": blowup_target(p),
    }
    _emit(_json(doc, digits=15) + "\n", args.output)
    return EXIT_OK


def _solution_doc(p: Params, sol) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "n": p.N,
        "q": p.q,
        "eps": sol.eps,
        "eps_tilde": sol.eps_tilde,
        "mu": sol.mu,
        "r_tilde": sol.R_tilde,
        "energy": sol.energy,
        "grad_sq": sol.grad_sq,
        "l2star_norm": sol.l2star_norm,
        "lq_norm_q": sol.lq_norm_q,
        "nehari_residual": sol.nehari_residual,
        "pohozaev_residual": sol.pohozaev_residual,
        "du_at_boundary": sol.du_at_boundary,
    }


def _solve_solution(p: Params, args):
    from .solver import _estimate_r_max, scale_to_unit_ball, shoot, solve_for_eps

    if (args.eps is None) == (args.eps_tilde is None):
        raise DomainError("exactly one of --eps / --eps-tilde is required")
    if args.eps is not None:
        return solve_for_eps(p, args.eps)
    et = args.eps_tilde
    if et <= 0:
        raise DomainError(f"eps_tilde must be positive, got {et}")
    s = shoot(p, et, _estimate_r_max(p, et))
    if s.first_zero is None:
        raise UnreachableEpsError(
            f"no first zero for eps_tilde={et}; no ball solution there"
        )
    return scale_to_unit_ball(p, s)


def cmd_solve(args) -> int:
    p = _params(args)
    sol = _solve_solution(p, args)
    rows = [PROFILE_HEADER]
    rows += [
        f"{_fmt(r)},{_fmt(u)},{_fmt(du)}"
        for r, u, du in zip(sol.profile_r, sol.profile_u, sol.profile_du)
    ]
    _emit("\n".join(rows) + "\n", args.profile)
    _emit(_json(_solution_doc(p, sol)) + "\n", args.output)
    return EXIT_OK


def cmd_sweep(args) -> int:
    from . import asymptotics as asy
    from .decomposition import fit_decomposition, perturbation_order_fit

    p = _params(args)
    grid = np.logspace(
        np.log10(args.eps_tilde_max), np.log10(args.eps_tilde_min), args.points
    )
    if args.points < 6:
        raise DomainError("sweep needs at least 6 grid points")
    records, sols = asy.sweep_with_solutions(p, grid, jobs=args.jobs)
    if len(records) < 0.8 * args.points:
        raise IntegrationFailureError(
            f"only {len(records)}/{args.points} sweep points converged"
        )
    lines = [SWEEP_HEADER]
    for r in records:
        lines.append(",".join(
            _fmt(getattr(r, f)) for f in asy.SWEEP_FIELDS
        ))
    _emit("\n".join(lines) + "\n", args.records)

    def fit_doc(f):
        return {
            "limit_estimate": f.limit_estimate,
            "target": f.target,
            "rel_error": f.rel_error,
            "slope_estimate": f.slope_estimate,
            "slope_target": f.slope_target,
        }

    doc = {
        "schema_version": SCHEMA_VERSION,
        "n": p.N,
        "q": p.q,
        "points_requested": args.points,
        "points_converged": len(records),
        "blowup_fit": fit_doc(asy.blowup_rate_fit(p, records)),
        "deficit_fit": fit_doc(asy.deficit_rate_fit(p, records)),
    }
    green = asy.boundary_green_limit(p, sols)
    doc["boundary_green_deviations"] = list(green.details["deviations"])
    doc["boundary_green_decreasing"] = green.details["decreasing"]
    if not args.skip_decomposition:
        decs = [fit_decomposition(p, s) for s in sols]
        dfit = perturbation_order_fit(p, decs)
        doc["decomposition_fit"] = fit_doc(dfit)
        doc["alpha_final"] = decs[-1].alpha
    if not args.skip_spectrum:
        from .linearization import nondegeneracy_certificate

        certs = []
        idx = np.unique(np.linspace(0, len(sols) - 1, args.spectrum_points)
                        .astype(int))
        for i in idx:
            ok, rep = nondegeneracy_certificate(
                p, sols[i], ell_max=args.ell_max
            )
            certs.append({
                "eps": records[i].eps,
                "nondegenerate": ok,
                "min_abs": rep["min_abs_overall"],
            })
        doc["nondegeneracy"] = certs
    _emit(_json(doc) + "\n", args.output)
    return EXIT_OK


def cmd_decompose(args) -> int:
    from .decomposition import fit_decomposition

    p = _params(args)
    sol = _solve_solution(p, args)
    d = fit_decomposition(p, sol)
    doc = _solution_doc(p, sol)
    doc.update({
        "alpha": d.alpha,
        "alpha_target": cst.alpha_n(p.N),
        "lambda": d.lam,
        "lambda_scaled": d.lam_scaled,
        "w_h1_norm": d.w_h1_norm,
        "ortho_residual_pu": d.ortho_residuals[0],
        "ortho_residual_dlam_pu": d.ortho_residuals[1],
    })
    _emit(_json(doc) + "\n", args.output)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    from .linearization import (
        build_mode_operator,
        eigenvalues_near_zero,
        nondegeneracy_certificate,
    )

    p = _params(args)
    sol = _solve_solution(p, args)
    modes = []
    for ell in range(args.ell_max + 1):
        op = build_mode_operator(p, sol, ell,
                                 potential_scale=args.potential_scale)
        below, above, m0 = eigenvalues_near_zero(op)
        modes.append({
            "ell": ell,
            "n_negative": m0,
            "nearest_below_zero": below,
            "nearest_above_zero": above,
            "min_abs": min(abs(above), abs(below)) if below is not None
            else abs(above),
        })
    ok = all(m["min_abs"] >= args.tol for m in modes)
    doc = _solution_doc(p, sol)
    doc.update({
        "potential_scale": args.potential_scale,
        "tol": args.tol,
        "nondegenerate": ok,
        "modes": modes,
    })
    _emit(_json(doc) + "\n", args.output)
    return EXIT_OK


def cmd_branch_map(args) -> int:
    from .asymptotics import branch_map

    p = Params(args.n, args.q)
    # the fold study deliberately admits the N=3, q in (2,4] cell that the
    # blow-up regime gate excludes
    if not (p.regime_ok or (p.N == 3 and 2.0 < p.q <= 4.0)):
        raise DomainError(
            f"(N={p.N}, q={p.q}) not admissible for the branch map"
        )
    bm = branch_map(p)
    lines = ["mu,eps,eps_tilde"]
    for m, e, t in zip(bm["mu"], bm["eps"], bm["eps_tilde"]):
        lines.append(f"{_fmt(m)},{_fmt(e)},{_fmt(t)}")
    _emit("\n".join(lines) + "\n", args.records)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "n": p.N,
        "q": p.q,
        "eps0": bm["eps0"],
        "mu_at_eps0": bm["mu_at_eps0"],
        "has_fold": bm["has_fold"],
    }
    _emit(_json(doc) + "\n", args.output)
    return EXIT_OK


# ----------------------------------------------------------------- verify


def _verify_checks(green_scale: float):
    """Full identity suite; yields (name, residual, threshold) triples."""
    import math

    from .bubbles import (
        Bubble,
        eval_bubble,
        eval_normalized,
        harmonic_correction,
        harmonic_correction_exact,
    )
    from .green import (
        BallGreen,
        greens_representation_residual,
        regular_part,
        robin,
        surface_identity_suite,
    )
    from .solver import scale_to_unit_ball, shoot

    # gamma function: recurrence and two exact values
    x = 3.7
    yield (
        "gamma_recurrence",
        abs(cst.gamma_fn(x + 1.0) - x * cst.gamma_fn(x)) / cst.gamma_fn(x + 1.0),
        1e-12,
    )
    yield ("gamma_half", abs(cst.gamma_fn(0.5) - math.sqrt(math.pi)), 1e-12)
    yield ("gamma_five", abs(cst.gamma_fn(5.0) - 24.0), 1e-10)
    yield ("omega_3", abs(cst.omega_n(3) - 4.0 * math.pi), 1e-12)

    for (N, q) in ((4, 3.0), (5, 3.0), (3, 5.0)):
        p = Params(N, q)
        yield (
            f"c_nq_quadrature_n{N}_q{q:g}",
            abs(cst.c_nq(p) - cst.c_nq_quadrature(p)) / cst.c_nq(p),
            1e-8,
        )
    for N in (3, 4, 5):
        s_exact = cst.sobolev_sn2_exact(N)
        yield (
            f"sobolev_gradient_oracle_n{N}",
            abs(cst.sobolev_sn2(N) - s_exact) / s_exact,
            1e-8,
        )
        yield (
            f"sobolev_mass_oracle_n{N}",
            abs(cst.sobolev_sn2_from_mass(N) - s_exact) / s_exact,
            1e-8,
        )

    for N in (3, 4, 5):
        g = BallGreen(N, constant_scale=green_scale)
        y = np.zeros(N)
        y[0] = 0.4
        suite = surface_identity_suite(g, y)
        for name, entry in suite.items():
            yield (f"{name}_n{N}", entry["residual"], 1e-6)
        x = np.zeros(N)
        x[-1] = 0.3
        yield (
            f"representation_n{N}",
            greens_representation_residual(g, x),
            1e-6,
        )
        # exact ball Robin value at the center: R^{2-N}/((N-2) omega_N)
        rb = 1.0 / ((N - 2.0) * cst.omega_n(N))
        yield (
            f"robin_center_n{N}",
            abs(robin(g, np.zeros(N)) - rb) / rb,
            1e-12,
        )

    # normalized bubble solves its equation at a sample point (radial form)
    N = 5
    r = 0.9
    h = 1e-5
    u0 = eval_normalized(N, [r, 0, 0, 0, 0])
    up = eval_normalized(N, [r + h, 0, 0, 0, 0])
    um = eval_normalized(N, [r - h, 0, 0, 0, 0])
    lap = (up - 2 * u0 + um) / h**2 + (N - 1) / r * (up - um) / (2 * h)
    p = Params(N, 3.0)
    yield (
        "bubble_pde_residual",
        abs(lap + u0 ** (p.two_star - 1.0)) / abs(lap),
        1e-5,
    )

    # harmonic correction: quadrature vs exact image form, off-center
    b = Bubble(3, 5.0, np.array([0.3, 0.0, 0.0]))
    xq = np.array([0.0, 0.5, 0.0])
    hc = harmonic_correction(b, 1.0, xq)
    hx = harmonic_correction_exact(b, 1.0, xq)
    yield ("harmonic_correction_oracle", abs(hc - hx) / abs(hx), 1e-8)

    # projection limit: lam^{(N-2)/2} psi -> (N-2) omega_N H(0, x)
    N = 4
    g = BallGreen(N, constant_scale=green_scale)
    xh = np.array([0.5, 0.0, 0.0, 0.0])
    target = (N - 2.0) * cst.omega_n(N) * regular_part(g, np.zeros(N), xh)
    lam = 1000.0
    bb = Bubble(N, lam)
    val = lam ** ((N - 2.0) / 2.0) * harmonic_correction_exact(bb, 1.0, xh)
    yield ("projection_robin_limit", abs(val - target) / target, 1e-4)

    # solver identity gates at a moderate parameter
    p = Params(4, 3.0)
    sol = scale_to_unit_ball(p, shoot(p, 1e-3, 1e4))
    yield ("solver_nehari", sol.nehari_residual, 1e-6)
    yield ("solver_pohozaev", sol.pohozaev_residual, 1e-6)
    yield (
        "solver_energy_below_limit",
        max(0.0, sol.energy - cst.sobolev_sn2_exact(4) / 4.0),
        1e-12,
    )


def cmd_verify(args) -> int:
    checks = []
    all_ok = True
    for name, residual, threshold in _verify_checks(args.fault_green_scale):
        ok = residual <= threshold
        all_ok = all_ok and ok
        checks.append({
            "name": name,
            "residual": residual,
            "threshold": threshold,
            "pass": bool(ok),
        })
    doc = {
        "schema_version": SCHEMA_VERSION,
        "n_checks": len(checks),
        "all_pass": all_ok,
        "checks": checks,
    }
    _emit(_json(doc) + "\n", args.output)
    return EXIT_OK if all_ok else EXIT_VERIFY_FAILED


# ------------------------------------------------------------------ parser


def _add_common(sp, with_eps=False):
    sp.add_argument("--n", type=int, required=True, help="space dimension N")
    sp.add_argument("--q", type=float, required=True,
                    help="subcritical exponent q")
    sp.add_argument("--output", default=None,
                    help="JSON output path (stdout when omitted)")
    if with_eps:
        sp.add_argument("--eps", type=float, default=None,
                        help="target perturbation strength")
        sp.add_argument("--eps-tilde", type=float, default=None,
                        help="shooting parameter (alternative to --eps)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="bnlab",
        description="Numerical laboratory for the critically perturbed "
        "Lane-Emden problem on the unit ball.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("constants", help="closed-form constants as JSON")
    _add_common(sp)
    sp.set_defaults(fn=cmd_constants)

    sp = sub.add_parser("solve", help="one radial solution: profile + JSON")
    _add_common(sp, with_eps=True)
    sp.add_argument("--profile", default=None,
                    help="CSV profile path (stdout when omitted)")
    sp.set_defaults(fn=cmd_solve)

    sp = sub.add_parser("sweep", help="continuation sweep: CSV + fits JSON")
    _add_common(sp)
    sp.add_argument("--points", type=int, default=25)
    sp.add_argument("--eps-tilde-min", type=float, default=1e-8)
    sp.add_argument("--eps-tilde-max", type=float, default=1e-2)
    sp.add_argument("--records", default=None,
                    help="CSV records path (stdout when omitted)")
    sp.add_argument("--jobs", type=int, default=1,
                    help="parallel workers for sweep points")
    sp.add_argument("--skip-decomposition", action="store_true")
    sp.add_argument("--skip-spectrum", action="store_true")
    sp.add_argument("--spectrum-points", type=int, default=3,
                    help="sweep points receiving a nondegeneracy certificate")
    sp.add_argument("--ell-max", type=int, default=4)
    sp.set_defaults(fn=cmd_sweep)

    sp = sub.add_parser("verify", help="identity suite; exit 1 on failure")
    sp.add_argument("--output", default=None)
    sp.add_argument("--fault-green-scale", type=float, default=1.0,
                    help="fault injection: scales the Green constant")
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("decompose", help="bubble decomposition of a solution")
    _add_common(sp, with_eps=True)
    sp.set_defaults(fn=cmd_decompose)

    sp = sub.add_parser("spectrum", help="mode eigenvalues nearest zero")
    _add_common(sp, with_eps=True)
    sp.add_argument("--ell-max", type=int, default=4)
    sp.add_argument("--tol", type=float, default=1e-3)
    sp.add_argument("--potential-scale", type=float, default=1.0)
    sp.set_defaults(fn=cmd_spectrum)

    sp = sub.add_parser("branch-map", help="mu vs eps fold structure")
    _add_common(sp)
    sp.add_argument("--records", default=None)
    sp.set_defaults(fn=cmd_branch_map)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except DomainError as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except UnreachableEpsError as exc:
        print(f"error: unreachable target: {exc}", file=sys.stderr)
        return EXIT_UNREACHABLE
    except (IntegrationFailureError, FitFailureError, BnlabError) as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
