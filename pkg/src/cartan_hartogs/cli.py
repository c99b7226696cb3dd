"""Command-line front end: ``cartan-hartogs <command> [options]``.

Every command prints a JSON :class:`VerificationReport`.  Exit status is 0
when all gated checks pass, 1 when one fails and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from typing import Optional, Sequence

import numpy as np

from . import szego, tyz
from .calculus import (
    Stencil,
    boundary_density_A,
    boundary_density_cofactor,
    boundary_density_printed_sign,
    det_identity_residual,
)
from .domains import DomainSpec, make_domain, norm_unchecked, sample_interior
from .errors import CartanHartogsError, InvalidKindError
from .hartogs import (
    HartogsParams,
    HartogsPoint,
    boundary_constant,
    sample_boundary,
    volume_density,
    volume_density_factored,
)
from .quadrature import disk_polar_rule, exact_sum, integrate
from .reports import Check, VerificationReport

DEFAULT_TOL = {
    "det_identity_deviation": 1e-4,
    "rank1_constant": 1e-4,
    "boundary_density_deviation": 1e-4,
    "disk_density_unit": 1e-5,
    "cofactor_agreement": 1e-8,
    "volume_factorization": 1e-5,
    "interpolation_residual": 1e-8,
    "leading_coefficient": 1e-8,
    "oracle_ratio": 1e-2,
    "mc_oracle_stderr": 3.0,
    "series_closed_agreement": 1e-6,
    "log_coefficient": 1e-6,
    "boundary_limit": 1e-4,
    "planted_log_recovery": 1e-6,
    "ratio_spread": 2e-2,
    "ratio_unit": 2e-2,
    "fourier_orthogonality": 3.0,
}


class UsageError(Exception):
    pass


# -- argument parsing ------------------------------------------------------------------


def _tol_pair(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return name, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance {value!r} is not a number") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def parse_point(values: Sequence[float], n_coords: int) -> np.ndarray:
    """``re,im`` pairs per coordinate, or ``n_coords`` reals taken as real parts."""
    values = list(values)
    if len(values) == 2 * n_coords:
        return np.array(values[0::2]) + 1j * np.array(values[1::2])
    if len(values) == n_coords:
        return np.array(values, dtype=complex)
    raise UsageError(f"--point needs {n_coords} reals or {2 * n_coords} re,im values, got {len(values)}")


def _add_common(p: argparse.ArgumentParser, *, base=True, samples: Optional[int] = None):
    if base:
        p.add_argument("--base", required=True, help="domain kind, e.g. typeI:1,2")
        p.add_argument("--mu", type=float, default=1.0)
    if samples is not None:
        p.add_argument("--samples", type=int, default=samples)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fd-step", type=float, default=1e-3)
    p.add_argument("--richardson", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.add_argument("--tol", type=_tol_pair, action="append", default=[], metavar="NAME=VALUE")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cartan-hartogs", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="invariants of a classical domain")
    p.add_argument("kind")
    _add_common(p, base=False)

    p = sub.add_parser("verify-metric", help="det(g) N^genus is constant")
    _add_common(p, samples=100)

    p = sub.add_parser("verify-volume-form", help="boundary density and volume factorisation")
    _add_common(p, samples=100)
    p.add_argument("--d0", type=int, default=1)

    p = sub.add_parser("tyz", help="Kempf distortion and its polynomial expansion")
    _add_common(p, samples=40000)
    p.add_argument("--d0", type=int, default=1)
    p.add_argument("--m", type=_int_list, default=None)
    p.add_argument("--point", type=_float_list, default=None)
    p.add_argument("--quad", choices=["radial", "mc"], default=None,
                   help="also compute the orthonormal-basis oracle")
    p.add_argument("--degree-cutoff", type=int, default=20)

    p = sub.add_parser("szego", help="Szego kernel: series, closed form, log term")
    _add_common(p)
    p.add_argument("--d0", type=int, default=1)
    p.add_argument("--point", type=_float_list, default=None)
    p.add_argument("--m-cutoff", type=int, default=200)
    p.add_argument("--degree-cutoff", type=int, default=None)
    p.add_argument("--radial-grid", type=_float_list, default=None)

    p = sub.add_parser("logterm-scan", help="log-term fit along random radial families")
    _add_common(p, samples=5)
    p.add_argument("--degree-cutoff", type=int, default=None)

    p = sub.add_parser("isometry", help="hat map norm ratios on the boundary")
    _add_common(p, samples=100000)
    p.add_argument("--m", type=_int_list, default=[3, 4, 5])
    p.add_argument("--sections", type=_int_list, default=[0, 1, 2],
                   help="powers k of the sections z_1^k")
    return parser


# -- commands ------------------------------------------------------------------------------


def _stencil(args) -> Stencil:
    try:
        return Stencil(step=args.fd_step, richardson=args.richardson)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _base(args) -> DomainSpec:
    return make_domain(args.base)


def _params(args) -> HartogsParams:
    return HartogsParams(_base(args), args.mu, getattr(args, "d0", 1))


def _echo(args) -> dict:
    skip = {"out", "tol", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def cmd_catalog(args, report: VerificationReport, tol: dict) -> None:
    spec = make_domain(args.kind)
    r, a, b = spec.r, spec.a, spec.b
    report.diagnostics.update(name=spec.name, r=r, a=a, b=b, genus=spec.genus, dim=spec.dim)
    report.add(Check("genus_identity", spec.genus, 2 + a * (r - 1) + b, 0.0))
    report.add(Check("dim_identity", spec.dim, r + a * r * (r - 1) // 2 + r * b, 0.0))


def cmd_verify_metric(args, report, tol):
    spec = _base(args)
    samples = sample_interior(spec, args.samples, args.seed, min_norm=0.1)
    mean, dev = det_identity_residual(spec, args.mu, samples, _stencil(args))
    report.diagnostics.update(constant=mean)
    report.add(Check("det_identity_deviation", dev, 0.0, tol["det_identity_deviation"]))
    if spec.is_ball:
        report.add(Check("rank1_constant", mean, (args.mu / spec.genus) ** spec.dim,
                         tol["rank1_constant"], relative=True))


def cmd_verify_volume_form(args, report, tol):
    params = _params(args)
    spec, mu, d = params.base, params.mu, params.base.dim
    stencil = _stencil(args)
    z = sample_interior(spec, args.samples, args.seed, min_norm=0.1).points
    a_det = boundary_density_A(spec, mu, z, stencil)
    scaled = a_det * norm_unchecked(spec, z) ** (spec.genus - mu * (d + 1))
    mean = exact_sum(scaled) / len(scaled)
    report.add(Check("boundary_density_deviation", float(np.max(np.abs(scaled / mean - 1.0))), 0.0,
                     tol["boundary_density_deviation"]))
    if spec.dim == 1 and mu == 1.0:
        report.add(Check("disk_density_unit", float(np.max(np.abs(a_det - 1.0))), 0.0, tol["disk_density_unit"]))
    a_cof = boundary_density_cofactor(spec, mu, z, stencil)
    report.add(Check("cofactor_agreement", float(np.max(np.abs(a_cof / a_det - 1.0))), 0.0,
                     tol["cofactor_agreement"]))
    few = z[: min(len(z), 10)]
    w = np.sqrt(0.3 * norm_unchecked(spec, few) ** mu / params.d0)[:, None] * np.ones(params.d0)
    direct = np.array([volume_density(params, HartogsPoint(zi, wi), stencil) for zi, wi in zip(few, w)])
    factored = volume_density_factored(params, few, w, stencil=stencil)
    report.add(Check("volume_factorization", float(np.max(np.abs(direct / factored - 1.0))), 0.0,
                     tol["volume_factorization"]))
    const = boundary_constant(params, z, stencil) if params.d0 == 1 else None
    report.diagnostics.update(
        density_constant=mean,
        printed_sign_deviation=float(np.max(np.abs(boundary_density_printed_sign(spec, mu, z, stencil) / a_det - 1.0))),
    )
    if const is not None:
        report.diagnostics.update(boundary_constant=const.measured, closed_form_constant=const.printed,
                                  constant_ratio=const.discrepancy)


def _point(args, params: HartogsParams) -> HartogsPoint:
    if args.point is None:
        return HartogsPoint(np.zeros(params.base.dim), np.zeros(params.d0))
    coords = parse_point(args.point, params.dim)
    return HartogsPoint(coords[: params.base.dim], coords[params.base.dim:])


def cmd_tyz(args, report, tol):
    params = _params(args)
    v = _point(args, params)
    dist = tyz.tyz_coefficients(params, v)
    m_values = args.m if args.m else [dist.m_grid[0]]
    values = {str(m): tyz.kempf_distortion(params, m, v) for m in m_values}
    report.diagnostics.update(dist.to_dict())
    report.diagnostics["value"] = values
    report.add(Check("interpolation_residual", dist.interpolation_residual, 0.0, tol["interpolation_residual"]))
    report.add(Check("leading_coefficient", dist.coefficients[0], 1.0, tol["leading_coefficient"]))
    if args.quad == "radial":
        oracle = {}
        for m in m_values:
            o = tyz.rawnsley_oracle(params, m, v, degree_cutoff=args.degree_cutoff, stencil=_stencil(args))
            oracle[str(m)] = o
            report.add(Check(f"oracle_ratio_m{m}", values[str(m)] / o, 1.0, tol["oracle_ratio"], relative=True))
        report.diagnostics["oracle"] = oracle
    elif args.quad == "mc":
        if np.any(v.coords != 0):
            raise UsageError("the Monte Carlo oracle is evaluated at the origin only")
        quad = sample_interior(params.base, args.samples, args.seed)
        oracle = {}
        for m in m_values:
            o, err = tyz.rawnsley_origin_mc(params, m, quad, _stencil(args))
            oracle[str(m)] = {"value": o, "stderr": err, "ratio": values[str(m)] / o}
            check = report.add(Check(f"mc_oracle_stderr_m{m}", abs(values[str(m)] - o) / err, 0.0,
                                     tol["mc_oracle_stderr"], gated=False))
            if not check.passed:
                report.checks[-1]["note"] = "closed form and Monte Carlo oracle disagree beyond tolerance"
        report.diagnostics["oracle"] = oracle


def _b_coefficients(args, params, stencil):
    return szego.default_b_coefficients(params, degree_cutoff=args.degree_cutoff, seed=args.seed, stencil=stencil)


def cmd_szego(args, report, tol):
    params = _params(args)
    if params.d0 != 1:
        raise UsageError("the Szego kernel is computed for d0 = 1")
    stencil = _stencil(args)
    d = params.base.dim
    if args.point is None:
        z = np.zeros(d)
        v = HartogsPoint(z, [math.sqrt(0.7)])
    else:
        v = _point(args, params)
    b = _b_coefficients(args, params, stencil)
    closed = szego.szego_closed(params, v, b)
    out = {"b": list(b), "closed": closed}
    try:
        series, tail = szego.szego_series(params, v, b, args.m_cutoff)
        out.update(series=series, tail=tail)
        report.add(Check("series_closed_agreement", abs(series - closed) / abs(closed), 0.0,
                         tol["series_closed_agreement"]))
    except CartanHartogsError as exc:
        out.update(series=None, tail=None, series_error=str(exc))
    fit = szego.log_term_fit(params, v.z, b, args.radial_grid)
    grid = args.radial_grid or szego.default_radial_grid(float(norm_unchecked(params.base, v.z)) ** params.mu)
    t_min = float(np.min(grid))
    out["logterm"] = {"a": fit.a_estimate, "b": fit.b_estimate, "residual": fit.residual}
    report.add(Check("log_coefficient", fit.log_ratio(t_min, d + 1), 0.0, tol["log_coefficient"]))
    limits, target = szego.boundary_limit(params, v.z, b)
    out["boundary_limit"] = {"values": list(limits), "expected": target}
    report.add(Check("boundary_limit", float(np.max(np.abs(limits / target - 1.0))), 0.0, tol["boundary_limit"]))
    report.diagnostics.update(out)


def cmd_logterm_scan(args, report, tol):
    params = HartogsParams(_base(args), args.mu, 1)
    stencil = _stencil(args)
    d = params.base.dim
    b = _b_coefficients(args, params, stencil)
    zs = sample_interior(params.base, args.samples, args.seed, min_norm=0.1).points
    families = []
    worst_ratio, worst_limit = 0.0, 0.0
    for z in zs:
        n_mu = float(norm_unchecked(params.base, z)) ** params.mu
        grid = szego.default_radial_grid(n_mu)
        fit = szego.log_term_fit(params, z, b, grid)
        minimal = szego.log_term_fit(params, z, b, grid, ladder=False)
        limits, target = szego.boundary_limit(params, z, b)
        ratio = fit.log_ratio(float(grid[0]), d + 1)
        limit_dev = float(np.max(np.abs(limits / target - 1.0)))
        worst_ratio, worst_limit = max(worst_ratio, ratio), max(worst_limit, limit_dev)
        families.append({"z": [[c.real, c.imag] for c in z], "a": fit.a_estimate, "b": fit.b_estimate,
                         "residual": fit.residual, "log_ratio": ratio, "minimal_basis_b": minimal.b_estimate,
                         "limit_deviation": limit_dev})
    report.diagnostics.update(b=list(b), families=families)
    report.add(Check("log_coefficient", worst_ratio, 0.0, tol["log_coefficient"]))
    report.add(Check("boundary_limit", worst_limit, 0.0, tol["boundary_limit"]))
    t = szego.default_radial_grid(1.0)
    planted = szego.fit_log_term(t, t ** -(d + 1) + 0.1 * np.log(t), d + 1)
    report.add(Check("planted_log_recovery", planted.b_estimate, 0.1, tol["planted_log_recovery"]))


def cmd_isometry(args, report, tol):
    params = HartogsParams(_base(args), args.mu, 1)
    spec, mu = params.base, params.mu
    stencil = _stencil(args)
    bs = sample_boundary(params, args.samples, args.seed, stencil)
    if spec.dim == 1:
        base_quad = disk_polar_rule(spec, 80, 16)
    else:
        base_quad = sample_interior(spec, args.samples, args.seed + 1)
    ratios = []
    for m in args.m:
        for k in args.sections:
            r, err = szego.isometry_ratio(spec, mu, m, lambda z, k=k: z[..., 0] ** k, bs, base_quad, stencil)
            ratios.append({"m": m, "k": k, "ratio": r, "stderr": err})
    values = np.array([x["ratio"] for x in ratios])
    spread = float(np.max(values) / np.min(values) - 1.0)
    report.add(Check("ratio_spread", spread, 0.0, tol["ratio_spread"]))
    if spec.dim == 1:
        report.add(Check("ratio_unit", float(np.mean(values)), 1.0, tol["ratio_unit"]))
    # different Fourier modes are orthogonal on the boundary
    m0 = args.m[0]
    prod = szego.hat_values(spec, mu, m0, lambda z: np.ones(z.shape[:-1]), bs) * np.conj(
        szego.hat_values(spec, mu, m0 + 1, lambda z: np.ones(z.shape[:-1]), bs))
    ip, ip_err = integrate(prod, bs.as_sample_set())
    report.add(Check("fourier_orthogonality", abs(ip) / ip_err, 0.0, tol["fourier_orthogonality"]))
    report.diagnostics.update(ratios=ratios, fourier_inner_product=ip, fourier_stderr=ip_err)


COMMANDS = {
    "catalog": cmd_catalog,
    "verify-metric": cmd_verify_metric,
    "verify-volume-form": cmd_verify_volume_form,
    "tyz": cmd_tyz,
    "szego": cmd_szego,
    "logterm-scan": cmd_logterm_scan,
    "isometry": cmd_isometry,
}


def run_command(argv: Optional[Sequence[str]] = None) -> VerificationReport:
    """Parse ``argv`` and run the command; usage errors raise ``SystemExit(2)``."""
    parser = build_parser()
    args = parser.parse_args(argv)
    tol = dict(DEFAULT_TOL)
    for name, value in args.tol:
        if name not in tol:
            parser.error(f"unknown tolerance {name!r}; known: {', '.join(sorted(tol))}")
        tol[name] = value
    report = VerificationReport(command=args.command, params=_echo(args), seed=args.seed)
    start = time.perf_counter()
    try:
        COMMANDS[args.command](args, report, tol)
    except InvalidKindError as exc:
        parser.error(f"invalid kind: {exc}")
    except (UsageError, CartanHartogsError) as exc:
        parser.error(str(exc))
    report.runtime_ms = int(round((time.perf_counter() - start) * 1000))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(report.to_json() + "\n")
    else:
        sys.stdout.write(report.to_json() + "\n")
    return report


def main(argv: Optional[Sequence[str]] = None) -> int:
    report = run_command(argv)
    if not report.passed:
        print("failed checks: " + ", ".join(report.failed_checks), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
