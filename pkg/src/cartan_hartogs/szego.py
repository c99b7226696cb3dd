"""Hardy space and Szego kernel of the disk bundle ``M^1_Omega(mu)``.

The kernel is assembled from the weighted Bergman spaces of the base:
``eps(m) = N^(mu m) sum_j |s_j^m|^2`` is a polynomial of degree ``d`` in
``m``, written in the binomial basis ``sum_l b_l C(m+l, l)``, and

    S(z, w) = 2^-d N^-(mu(d+1)) sum_m x^m eps(m),    x = |w|^2 / N^mu
            = 2^-d N^-(mu(d+1)) sum_l b_l (1 - x)^-(l+1).

All measures are normalised (base by ``pi^d``, boundary by ``2 pi^(d+1)``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .calculus import DEFAULT_STENCIL, Stencil, boundary_density_A
from .domains import DomainSpec, norm_unchecked, sample_interior
from .errors import (
    BoundaryError,
    GridError,
    NearBoundaryError,
    OutsideDomainError,
    PreconditionError,
    UnsupportedError,
    ZDependenceError,
)
from .gram import GramFactor, MonomialBasis, orthonormalize
from .hartogs import BoundarySamples, HartogsParams, HartogsPoint, rho
from .quadrature import SampleSet, ball_moment_factor, exact_sum, integrate, jacobi_rule


def _check_margin(spec: DomainSpec, mu: float, m: int) -> None:
    if not m > (spec.genus - 1) / mu:
        raise PreconditionError(
            f"m={m} must exceed (genus-1)/mu={(spec.genus - 1) / mu:.4g} for the weight to be integrable"
        )


def base_density(spec: DomainSpec, mu: float, z, stencil: Stencil = DEFAULT_STENCIL) -> np.ndarray:
    """Density of ``omega_Omega^d / d!`` against Lebesgue measure, ``2^d det g``.

    Evaluated as ``A(z) N^(-mu(d+1))``: ``-ddbar log F`` is the rank-one
    updated Hessian of ``F = N^mu``, so only derivatives of the polynomial
    ``F`` are needed and the step can shrink safely near the boundary.
    """
    return boundary_density_A(spec, mu, z, stencil) * norm_unchecked(spec, z) ** (-mu * (spec.dim + 1))


def _radial_bracket(spec: DomainSpec, mu: float, radius_sq: np.ndarray, stencil: Stencil) -> np.ndarray:
    z = np.zeros((len(radius_sq), spec.dim), dtype=complex)
    z[:, 0] = np.sqrt(radius_sq)
    return base_density(spec, mu, z, stencil) * (1.0 - radius_sq) ** spec.genus


def base_gram(spec: DomainSpec, mu: float, m: int, basis: MonomialBasis,
              quad: Optional[SampleSet] = None, stencil: Stencil = DEFAULT_STENCIL) -> GramFactor:
    """Orthonormalise monomials in ``H^2_m``: ``∫ N^(mu m) |s|^2 omega^d/d! / pi^d``.

    Ball bases without ``quad`` use the exact radial path (diagonal Gram,
    Gauss-Jacobi in ``|z|^2`` with the density bracket ``2^d det g N^genus``
    measured at the nodes).  Otherwise ``quad`` is a Monte Carlo sample set.
    """
    _check_margin(spec, mu, m)
    if quad is None:
        if not spec.is_ball:
            raise UnsupportedError("exact radial Gram needs a ball base; pass a Monte Carlo quad")
        d = spec.dim
        exponent = mu * m - spec.genus
        diag = np.empty(len(basis))
        cache: dict[int, float] = {}
        for i, alpha in enumerate(basis.exponents):
            k = sum(alpha)
            if k not in cache:
                t, w = jacobi_rule(k // 2 + d // 2 + 2, exponent)
                cache[k] = float(np.dot(w, t ** (k + d - 1) * _radial_bracket(spec, mu, t, stencil)))
            diag[i] = ball_moment_factor(d, alpha) * cache[k]
        return orthonormalize(np.diag(diag))
    z = quad.points
    weight = quad.weights * norm_unchecked(spec, z) ** (mu * m) * base_density(spec, mu, z, stencil) / math.pi**spec.dim
    phi = basis.evaluate(z)
    gram = (phi.T * weight) @ np.conj(phi)
    return orthonormalize(gram)


def epsilon_base(spec: DomainSpec, mu: float, m: int, z, gram: GramFactor, basis: MonomialBasis):
    """``N(z)^(mu m) sum_j |s_j^m(z)|^2`` for an orthonormal basis of ``H^2_m``."""
    z = np.asarray(z, dtype=complex)
    value = norm_unchecked(spec, z) ** (mu * m) * gram.quadratic_form(basis.evaluate(z))
    return float(value) if np.ndim(value) == 0 else value


def margin_grid(spec: DomainSpec, mu: float, count: int, start: int = 1) -> list[int]:
    m = max(start, math.floor((spec.genus - 1) / mu) + 1)
    return list(range(m, m + count))


def binomial_matrix(m_grid: Sequence[int], degree: int) -> np.ndarray:
    return np.array([[math.comb(m + l, l) for l in range(degree + 1)] for m in m_grid], dtype=float)


def fit_b_coefficients(spec: DomainSpec, mu: float, z_samples, m_grid: Optional[Sequence[int]] = None,
                       degree_cutoff: int = 30, quad: Optional[SampleSet] = None,
                       stencil: Stencil = DEFAULT_STENCIL, tol: float = 1e-3) -> np.ndarray:
    """Fit ``eps(m) = sum_l b_l C(m+l, l)`` at each base point; return the mean.

    Raises :class:`ZDependenceError` if the per-point fits disagree by more
    than ``tol`` relative to ``max |b_l|``.
    """
    d = spec.dim
    if m_grid is None:
        # Monte Carlo weights N^(mu(m-d-1)) A stay bounded from m = d+1 on
        m_grid = margin_grid(spec, mu, d + 1, start=1 if quad is None else d + 1)
    m_grid = list(m_grid)
    if len(m_grid) != d + 1 or len(set(m_grid)) != len(m_grid):
        raise GridError(f"need {d + 1} distinct m values, got {m_grid}")
    basis = MonomialBasis.up_to(d, degree_cutoff)
    z_samples = np.atleast_2d(np.asarray(z_samples, dtype=complex))
    eps = np.array([
        epsilon_base(spec, mu, m, z_samples, base_gram(spec, mu, m, basis, quad, stencil), basis)
        for m in m_grid
    ])  # (len(m_grid), n_points)
    b_each = np.linalg.solve(binomial_matrix(m_grid, d), eps).T
    b = np.array([exact_sum(col) for col in b_each.T]) / len(b_each)
    spread = float(np.max(np.abs(b_each - b))) / float(np.max(np.abs(b)))
    if spread > tol:
        raise ZDependenceError(f"b_l vary across base points by {spread:.2e} (degree cutoff too low or Monte Carlo Gram too noisy)")
    return b


def default_b_coefficients(params: HartogsParams, degree_cutoff: Optional[int] = None, seed: int = 0,
                           samples: int = 20000, stencil: Stencil = DEFAULT_STENCIL,
                           tol: float = 1e-3) -> np.ndarray:
    """``b_l`` fitted at four base points near the origin.

    Ball bases use the exact radial Gram (cutoff 30); other bases a Monte
    Carlo Gram with ``samples`` nodes (cutoff 4).
    """
    spec = params.base
    rng = np.random.default_rng(seed)
    z = 0.15 * rng.random((4, spec.dim)) * np.exp(2j * np.pi * rng.random((4, spec.dim)))
    if degree_cutoff is None:
        degree_cutoff = 30 if spec.is_ball else 4
    quad = None if spec.is_ball else sample_interior(spec, samples, seed)
    return fit_b_coefficients(spec, params.mu, z, degree_cutoff=degree_cutoff, quad=quad,
                              stencil=stencil, tol=tol)


# -- hat map and isometry --------------------------------------------------------


def hat_map_value(spec: DomainSpec, mu: float, m: int, s: Callable, v: HartogsPoint,
                  tol: float = 1e-10) -> complex:
    """``2^(-d/2) N^(-mu(d+1)/2) w^m s(z)`` at a point of the smooth boundary."""
    if len(v.w) != 1:
        raise UnsupportedError("the hat map is defined for d0 = 1")
    n_mu = norm_unchecked(spec, v.z) ** mu
    if not n_mu > 0 or abs(n_mu - abs(v.w[0]) ** 2) > tol * n_mu:
        raise BoundaryError("point is not on the smooth boundary |w|^2 = N^mu")
    d = spec.dim
    return complex(2.0 ** (-d / 2) * n_mu ** (-(d + 1) / 2) * v.w[0] ** m * s(v.z))


def hat_values(spec: DomainSpec, mu: float, m: int, s: Callable, samples: BoundarySamples) -> np.ndarray:
    """Vectorised hat map on boundary samples."""
    d = spec.dim
    n_mu = norm_unchecked(spec, samples.z) ** mu
    return 2.0 ** (-d / 2) * n_mu ** (-(d + 1) / 2) * samples.w[:, 0] ** m * s(samples.z)


def isometry_ratio(spec: DomainSpec, mu: float, m: int, s: Callable, boundary_samples: BoundarySamples,
                   base_quad: SampleSet, stencil: Stencil = DEFAULT_STENCIL) -> tuple[float, float]:
    """Boundary norm of the lifted section over its base norm, with stderr.

    The boundary measure is the sampled contact volume divided by
    ``2 pi^(d+1)``; the base measure is ``N^(mu m) omega^d/d! / pi^d``.
    """
    _check_margin(spec, mu, m)
    d = spec.dim
    lifted = np.abs(hat_values(spec, mu, m, s, boundary_samples)) ** 2 / (2.0 * math.pi ** (d + 1))
    top, top_err = integrate(lifted, boundary_samples.as_sample_set())
    z = base_quad.points
    base_vals = norm_unchecked(spec, z) ** (mu * m) * np.abs(s(z)) ** 2 * base_density(spec, mu, z, stencil) / math.pi**d
    bottom, bottom_err = integrate(base_vals, base_quad)
    ratio = top / bottom
    return ratio, ratio * math.hypot(top_err / top, bottom_err / bottom)


# -- Szego kernel ------------------------------------------------------------------


@dataclass
class SzegoEvaluation:
    point: HartogsPoint
    series_value: float
    closed_value: float
    m_cutoff: int
    degree_cutoff: int
    tail_estimate: float

    @property
    def relative_gap(self) -> float:
        return abs(self.series_value - self.closed_value) / abs(self.closed_value)


def _ratio_x(params: HartogsParams, v: HartogsPoint) -> tuple[float, float]:
    if params.d0 != 1:
        raise UnsupportedError("the Szego kernel is computed for the disk bundle (d0 = 1)")
    r = rho(params, v)
    if r <= 0.0:
        raise OutsideDomainError("point is not inside the disk bundle")
    n_mu = float(norm_unchecked(params.base, v.z)) ** params.mu
    return float(np.sum(np.abs(v.w) ** 2)) / n_mu, n_mu


def epsilon_polynomial(b: Sequence[float], m) -> np.ndarray:
    m = np.asarray(m)
    return sum(bl * _binom_shift(m, l) for l, bl in enumerate(b))


def _binom_shift(m, l: int):
    out = np.ones_like(np.asarray(m, dtype=float))
    for i in range(1, l + 1):
        out = out * (np.asarray(m, dtype=float) + i) / i
    return out


def szego_series(params: HartogsParams, v: HartogsPoint, b: Sequence[float], m_cutoff: int = 200,
                 tol: float = 1e-8) -> tuple[float, float]:
    """Partial sum over ``m = 0..m_cutoff`` and its tail estimate.

    The tail is the geometric remainder after the last term; it must fall
    below ``tol`` times the sum of absolute terms (the sum itself can pass
    through zero), otherwise :class:`NearBoundaryError` is raised.
    """
    x, n_mu = _ratio_x(params, v)
    d = params.base.dim
    ms = np.arange(m_cutoff + 3)
    eps = epsilon_polynomial(b, ms)
    terms = x ** ms[: m_cutoff + 1] * eps[: m_cutoff + 1]
    prefactor = 2.0**-d * n_mu ** -(d + 1)
    partial = math.fsum(terms.tolist())
    scale = math.fsum(np.abs(terms).tolist())
    nxt = abs(x ** (m_cutoff + 1) * eps[m_cutoff + 1])
    q = x * abs(eps[m_cutoff + 2] / eps[m_cutoff + 1]) if eps[m_cutoff + 1] != 0 else x
    tail = nxt / (1.0 - q) if q < 1.0 else math.inf
    if tail > tol * scale:
        raise NearBoundaryError(f"tail {tail:.2e} exceeds {tol:.0e} of the series scale at x={x:.4f}")
    return prefactor * partial, prefactor * tail


def szego_closed(params: HartogsParams, v: HartogsPoint, b: Sequence[float]) -> float:
    x, n_mu = _ratio_x(params, v)
    return closed_form_from_x(params.base.dim, n_mu, x, b)


def closed_form_from_x(d: int, n_mu, x, b: Sequence[float]):
    """``2^-d N^-(mu(d+1)) sum_l b_l (1-x)^-(l+1)`` (vectorised in ``x``)."""
    one_minus = 1.0 - np.asarray(x, dtype=float)
    total = sum(bl * one_minus ** -(l + 1) for l, bl in enumerate(b))
    return 2.0**-d * np.asarray(n_mu) ** -(d + 1) * total


def szego_evaluate(params: HartogsParams, v: HartogsPoint, b: Optional[Sequence[float]] = None,
                   m_cutoff: int = 200, degree_cutoff: int = 30) -> SzegoEvaluation:
    if b is None:
        b = default_b_coefficients(params, degree_cutoff)
    series, tail = szego_series(params, v, b, m_cutoff)
    return SzegoEvaluation(v, series, szego_closed(params, v, b), m_cutoff, degree_cutoff, tail)


# -- log-term detector ---------------------------------------------------------------


@dataclass(frozen=True)
class LogTermFit:
    a_estimate: float
    b_estimate: float
    residual: float
    coefficients: tuple = ()

    def log_ratio(self, t_min: float, pole_order: int) -> float:
        """``|b| / (a t_min^-pole_order)``: size of the log part relative to the singular part."""
        return abs(self.b_estimate) / abs(self.a_estimate * t_min**-pole_order)


def fit_log_term(t, values, pole_order: int, ladder: bool = True) -> LogTermFit:
    """Least squares ``S(t) = a t^-p + [t^-(p-1) .. t^-1] + b log t + c``.

    With ``ladder`` the lower poles are included, which a smooth numerator
    ``a(v)`` produces; without it the basis is just ``(t^-p, log t, 1)``.
    Columns are scaled to unit max-norm before solving.
    """
    t = np.asarray(t, dtype=float)
    values = np.asarray(values, dtype=float)
    if len(t) < 6 or len(set(t.tolist())) != len(t):
        raise GridError("need at least 6 distinct radial nodes")
    powers = list(range(pole_order, 0, -1)) if ladder else [pole_order]
    cols = [t**-p for p in powers] + [np.log(t), np.ones_like(t)]
    mat = np.stack(cols, axis=1)
    scale = np.max(np.abs(mat), axis=0)
    coef, _, rank, _ = np.linalg.lstsq(mat / scale, values, rcond=None)
    if rank < mat.shape[1]:
        raise GridError("radial grid too clustered for the log-term fit")
    coef = coef / scale
    fitted = mat @ coef
    residual = float(np.max(np.abs(fitted - values)) / np.max(np.abs(values)))
    log_index = len(powers)
    return LogTermFit(float(coef[0]), float(coef[log_index]), residual, tuple(float(c) for c in coef))


def default_radial_grid(n_mu: float, nodes: int = 8) -> np.ndarray:
    return np.geomspace(1e-3, 1e-1, nodes) * n_mu


def radial_family(params: HartogsParams, z, t_values, phase: float = 0.0) -> list[HartogsPoint]:
    """Points ``(z, w_t)`` with ``rho = t``."""
    n_mu = float(norm_unchecked(params.base, z)) ** params.mu
    out = []
    for t in t_values:
        if not 0.0 < t <= n_mu:
            raise GridError(f"rho value {t} outside (0, N^mu={n_mu}]")
        out.append(HartogsPoint(z, [math.sqrt(n_mu - t) * np.exp(1j * phase)]))
    return out


def log_term_fit(params: HartogsParams, z, b: Sequence[float], radial_grid=None,
                 ladder: bool = True) -> LogTermFit:
    """Fit the Fefferman form to ``S`` along ``rho = t``; near the boundary
    the closed form is always used."""
    z = np.asarray(z, dtype=complex)
    n_mu = float(norm_unchecked(params.base, z)) ** params.mu
    t = default_radial_grid(n_mu) if radial_grid is None else np.asarray(radial_grid, dtype=float)
    values = [szego_closed(params, v, b) for v in radial_family(params, z, t)]
    return fit_log_term(t, values, params.base.dim + 1, ladder=ladder)


def boundary_limit(params: HartogsParams, z, b: Sequence[float], radii: Sequence[float] = (1e-6, 1e-7, 1e-8, 1e-9, 1e-10)):
    """``rho^(d+1) S`` at points approaching the smooth boundary, and ``2^-d b_d``."""
    z = np.asarray(z, dtype=complex)
    n_mu = float(norm_unchecked(params.base, z)) ** params.mu
    d = params.base.dim
    t = np.asarray(radii) * n_mu
    values = np.array([szego_closed(params, v, b) for v in radial_family(params, z, t)]) * t ** (d + 1)
    return values, 2.0**-d * b[-1]
