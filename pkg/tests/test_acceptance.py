"""Acceptance criteria, one test per criterion.

Each criterion function returns ``(passed, detail)``; the pytest wrappers
assert on it and a summary line per criterion is printed at the end of the
session.  ``python tests/test_acceptance.py`` prints the same lines.
"""

import math
import time

import numpy as np
import pytest
from scipy.special import gamma

from cartan_hartogs.calculus import boundary_density_A, det_identity_residual
from cartan_hartogs.domains import TypeI, TypeII, TypeIII, TypeIV, make_domain, norm_unchecked, sample_interior
from cartan_hartogs.gram import MonomialBasis
from cartan_hartogs.hartogs import HartogsParams, HartogsPoint, sample_boundary
from cartan_hartogs.quadrature import disk_polar_rule
from cartan_hartogs.szego import (
    base_gram,
    boundary_limit,
    epsilon_base,
    fit_b_coefficients,
    fit_log_term,
    isometry_ratio,
    log_term_fit,
    szego_closed,
    szego_series,
)
from cartan_hartogs.tyz import admissible_grid, kempf_distortion, kempf_distortion_zw, rawnsley_oracle, rawnsley_origin_mc, tyz_coefficients

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []

CONFIGS = ["typeI:1,1", "typeI:1,2", "typeI:2,2", "typeII:2", "typeIV:3"]
MUS = [0.5, 1.0, 2.0]


def _record(number, passed, detail, elapsed, limit):
    in_time = elapsed < limit
    ok = passed and in_time
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail} ({elapsed:.1f}s, limit {limit:g}s)"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def _run(number, fn, limit):
    start = time.perf_counter()
    passed, detail = fn()
    return _record(number, passed, detail, time.perf_counter() - start, limit)


# -- criteria -----------------------------------------------------------------------------


def criterion_1():
    kinds = [TypeI(p, q) for p in range(1, 11) for q in range(p, 11) if p * q <= 10]
    kinds += [TypeII(n) for n in range(2, 5)] + [TypeIII(n) for n in (4, 5)] + [TypeIV(n) for n in range(3, 11)]
    bad = []
    for kind in kinds:
        s = make_domain(kind)
        if s.genus != 2 + s.a * (s.r - 1) + s.b or s.dim != s.r + s.a * s.r * (s.r - 1) // 2 + s.r * s.b:
            bad.append(str(kind))
    return not bad, f"{len(kinds)} kinds with dim <= 10, identity failures: {bad or 'none'}"


def criterion_2_z_independence():
    worst = 0.0
    for kind in CONFIGS:
        spec = make_domain(kind)
        samples = sample_interior(spec, 100, 0, min_norm=0.1)
        for mu in MUS:
            worst = max(worst, det_identity_residual(spec, mu, samples)[1])
    return worst < 1e-4, f"max relative deviation of det(g) N^genus = {worst:.2e} (< 1e-4)"


def criterion_2_rank1_constant():
    parts, ok = [], True
    for kind in ("typeI:1,1", "typeI:1,2"):
        spec = make_domain(kind)
        samples = sample_interior(spec, 100, 0, min_norm=0.1)
        for mu in MUS:
            mean, _ = det_identity_residual(spec, mu, samples)
            target = (mu / spec.genus) ** spec.dim
            rel = abs(mean / target - 1)
            ok &= rel < 1e-4
            if rel >= 1e-4:
                parts.append(f"{kind} mu={mu}: {mean:.6g} vs (mu/genus)^d={target:.6g}")
    return ok, "rank-1 constant equals (mu/genus)^d" if ok else "; ".join(parts)


def criterion_3():
    worst = 0.0
    for kind in CONFIGS:
        spec = make_domain(kind)
        z = sample_interior(spec, 100, 1, min_norm=0.1).points
        for mu in MUS:
            scaled = boundary_density_A(spec, mu, z) * norm_unchecked(spec, z) ** (spec.genus - mu * (spec.dim + 1))
            worst = max(worst, float(np.max(np.abs(scaled / scaled.mean() - 1))))
    disk = make_domain("typeI:1,1")
    unit = float(np.max(np.abs(boundary_density_A(disk, 1.0, sample_interior(disk, 100, 2).points) - 1)))
    return worst < 1e-4 and unit < 1e-5, f"A N^(genus-mu(d+1)) deviation {worst:.2e}; disk |A-1| {unit:.2e}"


def criterion_4():
    p = HartogsParams(make_domain("typeI:1,1"), 1.0, 1)
    points = [HartogsPoint([0], [0]), HartogsPoint([0.3 + 0.2j], [0.4]), HartogsPoint([-0.5j], [0.3 - 0.3j])]
    exact, worst = True, 0.0
    for m in (5, 6, 8):
        for v in points:
            t = kempf_distortion(p, m, v)
            exact &= t == (m - 1) * (m - 2)
            worst = max(worst, abs(t / rawnsley_oracle(p, m, v, degree_cutoff=20) - 1))
    return exact and worst < 0.01, f"closed form exact: {exact}; max |T/oracle - 1| = {worst:.2e} (< 1e-2)"


def criterion_5():
    worst_res, worst_a0, n = 0.0, 0.0, 0
    for kind in CONFIGS:
        spec = make_domain(kind)
        z = sample_interior(spec, 1, 3, min_norm=0.3).points[0]
        for mu in MUS:
            for d0 in (1, 2):
                p = HartogsParams(spec, mu, d0)
                w = 0.4 * math.sqrt(norm_unchecked(spec, z) ** mu / d0) * np.ones(d0)
                for v in (HartogsPoint(np.zeros(spec.dim), np.zeros(d0)), HartogsPoint(z, w)):
                    rep = tyz_coefficients(p, v)
                    worst_res = max(worst_res, rep.interpolation_residual)
                    worst_a0 = max(worst_a0, abs(rep.coefficients[0] - 1))
                    n += 1
    ok = worst_res < 1e-8 and worst_a0 < 1e-8
    return ok, f"{n} fits: max held-out residual {worst_res:.1e}, max |a0 - 1| {worst_a0:.1e}"


def criterion_6():
    worst = 0.0
    for kind in ("typeI:1,1", "typeI:1,2", "typeI:1,3"):
        spec = make_domain(kind)
        z = sample_interior(spec, 100, 4).points
        rng = np.random.default_rng(5)
        for d0 in (1, 2):
            p = HartogsParams(spec, 1.0, d0)
            frac = rng.random((100, 1)) * 0.95
            direction = rng.normal(size=(100, d0)) + 1j * rng.normal(size=(100, d0))
            direction /= np.linalg.norm(direction, axis=1, keepdims=True)
            w = np.sqrt(frac * norm_unchecked(spec, z)[:, None]) * direction
            for m in admissible_grid(p, 3):
                t = kempf_distortion_zw(p, m, z, w)
                worst = max(worst, float(np.max(np.abs(t / t[0] - 1))))
    return worst < 1e-10, f"max relative variation of T_m over 100 points: {worst:.1e} (< 1e-10)"


def criterion_7():
    disk = make_domain("typeI:1,1")
    z = np.array([[0.0], [0.3], [0.5j], [-0.4 + 0.4j], [0.7]])
    basis = MonomialBasis.up_to(1, 40)
    per_point = []
    for m in (2, 3):
        eps = epsilon_base(disk, 1.0, m, z, base_gram(disk, 1.0, m, basis), basis)
        per_point.append(eps)
    b1 = per_point[1] - per_point[0]  # eps(m) = b0 + b1 (m + 1)
    b0 = per_point[0] - 3 * b1
    spread = max(np.ptp(b0), np.ptp(b1))
    b = fit_b_coefficients(disk, 1.0, z, degree_cutoff=40, tol=1e-6)
    err = float(np.max(np.abs(b - [-2, 1])))
    return err < 1e-6 and spread < 1e-6, f"b = ({b[0]:.9f}, {b[1]:.9f}); error {err:.1e}; cross-z spread {spread:.1e}"


def _ball_b(spec, mu):
    d = spec.dim
    return fit_b_coefficients(spec, mu, np.array([[0.05] * d, [0.1j] * d]), degree_cutoff=30)


def criterion_8():
    rng = np.random.default_rng(8)
    worst, n = 0.0, 0
    for kind in ("typeI:1,1", "typeI:1,2"):
        spec = make_domain(kind)
        for mu in (1.0, 2.0):
            p = HartogsParams(spec, mu)
            b = _ball_b(spec, mu)
            z = sample_interior(spec, 10, int(mu * 10) + spec.dim).points
            x = rng.uniform(0.0, 0.8, size=10)
            for zi, xi in zip(z, x):
                n_mu = float(norm_unchecked(spec, zi)) ** mu
                v = HartogsPoint(zi, [math.sqrt(xi * n_mu) * np.exp(2j * np.pi * rng.random())])
                series, _ = szego_series(p, v, b, m_cutoff=400)
                closed = szego_closed(p, v, b)
                worst = max(worst, abs(series - closed) / abs(closed))
                n += 1
    return worst < 1e-6, f"{n} points, max |series - closed| / |closed| = {worst:.1e} (< 1e-6)"


def criterion_9():
    worst_ratio, worst_limit = 0.0, 0.0
    for kind in ("typeI:1,1", "typeI:1,2"):
        spec = make_domain(kind)
        for mu in MUS:
            p = HartogsParams(spec, mu)
            b = _ball_b(spec, mu)
            for z in sample_interior(spec, 5, 9, min_norm=0.1).points:
                n_mu = float(norm_unchecked(spec, z)) ** mu
                fit = log_term_fit(p, z, b)
                worst_ratio = max(worst_ratio, fit.log_ratio(1e-3 * n_mu, spec.dim + 1))
                values, target = boundary_limit(p, z, b)
                worst_limit = max(worst_limit, float(np.max(np.abs(values / target - 1))))
    t = np.geomspace(1e-3, 1e-1, 8)
    planted = fit_log_term(t, t**-2 + 0.1 * np.log(t), 2)
    planted_err = abs(planted.b_estimate - 0.1)
    ok = worst_ratio < 1e-6 and planted_err < 1e-6 and worst_limit < 1e-4
    return ok, (f"max |b|/(a t_min^-(d+1)) = {worst_ratio:.1e}; planted log error {planted_err:.1e}; "
                f"boundary limit deviation {worst_limit:.1e}")


def criterion_10():
    disk = make_domain("typeI:1,1")
    p = HartogsParams(disk, 1.0)
    bs = sample_boundary(p, 100_000, 10)
    quad = disk_polar_rule(disk, 80, 16)
    ratios = []
    for m in (3, 4, 5):
        for k in (0, 1, 2):
            ratios.append(isometry_ratio(disk, 1.0, m, lambda z, k=k: z[..., 0] ** k, bs, quad))
    values = np.array([r for r, _ in ratios])
    errs = np.array([e for _, e in ratios])
    spread = float(values.max() / values.min() - 1)
    sigma = float(np.max(np.abs(values[:, None] - values[None, :]) / np.hypot(errs[:, None], errs[None, :])))
    return spread < 0.02, f"9 ratios in [{values.min():.4f}, {values.max():.4f}], spread {spread:.2%}, max pairwise {sigma:.1f} stderr"


def criterion_11():
    p = HartogsParams(make_domain("typeI:2,2"), 1.0, 1)
    quad = sample_interior(p.base, 40_000, 11)
    v = HartogsPoint(np.zeros(4), [0])
    parts, flagged = [], []
    for m in (6, 7, 8):
        closed = kempf_distortion(p, m, v)
        oracle, err = rawnsley_origin_mc(p, m, quad)
        z = abs(closed - oracle) / err
        parts.append(f"m={m}: ratio {closed / oracle:.4f} +- {closed * err / oracle**2:.4f}")
        if z > 3:
            flagged.append(m)
    flag = f"DISAGREEMENT beyond 3 stderr at m={flagged}" if flagged else "agreement within 3 stderr"
    # reported, not gated: the criterion is met when the comparison is produced and flagged correctly
    return True, "; ".join(parts) + f"; {flag}"


# -- pytest wrappers -------------------------------------------------------------------------

pytestmark = pytest.mark.acceptance


def test_criterion_1_catalog_identities():
    assert _run(1, criterion_1, 1.0)


def test_criterion_2_det_identity_z_independence():
    assert _run("2 (z-independence)", criterion_2_z_independence, 30.0)


def test_criterion_2_det_identity_rank1_constant():
    assert _run("2 (rank-1 constant)", criterion_2_rank1_constant, 30.0)


def test_criterion_3_boundary_density():
    assert _run(3, criterion_3, 30.0)


def test_criterion_4_tyz_closed_form_vs_oracle():
    assert _run(4, criterion_4, 60.0)


def test_criterion_5_tyz_finiteness():
    assert _run(5, criterion_5, 10.0)


def test_criterion_6_homogeneity():
    assert _run(6, criterion_6, 5.0)


def test_criterion_7_b_fit():
    assert _run(7, criterion_7, 5.0)


def test_criterion_8_szego_series_vs_closed():
    assert _run(8, criterion_8, 60.0)


def test_criterion_9_log_term_vanishing():
    assert _run(9, criterion_9, 30.0)


def test_criterion_10_hat_isometry():
    assert _run(10, criterion_10, 60.0)


def test_criterion_11_rank2_crosscheck_reported():
    assert _run(11, criterion_11, 120.0)


if __name__ == "__main__":
    for number, fn, limit in [
        (1, criterion_1, 1.0), ("2 (z-independence)", criterion_2_z_independence, 30.0),
        ("2 (rank-1 constant)", criterion_2_rank1_constant, 30.0), (3, criterion_3, 30.0),
        (4, criterion_4, 60.0), (5, criterion_5, 10.0), (6, criterion_6, 5.0), (7, criterion_7, 5.0),
        (8, criterion_8, 60.0), (9, criterion_9, 30.0), (10, criterion_10, 60.0), (11, criterion_11, 120.0),
    ]:
        _run(number, fn, limit)
