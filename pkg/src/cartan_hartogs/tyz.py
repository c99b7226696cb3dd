"""Finite TYZ expansion of the Kempf distortion function on Cartan-Hartogs domains.

``T_m`` is evaluated from the closed Gamma-ratio formula and, independently,
from an orthonormalised monomial basis of the weighted Bergman space
(the Rawnsley route).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .calculus import DEFAULT_STENCIL, Stencil, boundary_density_A
from .domains import DomainSpec, norm_unchecked
from .errors import GridError, HypothesisViolationError, OutsideDomainError, PoleError, UnsupportedError
from .gram import MonomialBasis, orthonormalize
from .hartogs import HartogsParams, HartogsPoint, rho, rho_zw
from .quadrature import SampleSet, ball_moment_factor, integrate, jacobi_rule

_INT_TOL = 1e-9


def _nonpositive_integer(x: float) -> bool:
    return x <= 0 and abs(x - round(x)) < _INT_TOL


def _gamma_sign(x: float) -> float:
    if x > 0:
        return 1.0
    # reflection formula: sign alternates between consecutive poles
    return -1.0 if (-math.floor(x)) % 2 else 1.0


def gamma_ratio(x: float, y: float) -> float:
    """``Gamma(x) / Gamma(y)``.

    When ``x - y`` is an integer the ratio is the finite (rising or
    falling) product, which is exact and cancels coincident poles.
    """
    diff = x - y
    n = round(diff)
    if abs(diff - n) < _INT_TOL * max(1.0, abs(diff)):
        if n >= 0:
            return math.prod(y + i for i in range(n))
        denom = math.prod(x + i for i in range(-n))
        if denom == 0:
            raise PoleError(f"Gamma({x}) has an uncancelled pole")
        return 1.0 / denom
    if _nonpositive_integer(x):
        raise PoleError(f"Gamma({x}) has an uncancelled pole")
    if _nonpositive_integer(y):
        return 0.0
    return _gamma_sign(x) * _gamma_sign(y) * math.exp(math.lgamma(x) - math.lgamma(y))


def x_tilde(spec: DomainSpec, mu: float, s: float) -> float:
    r"""Product of Gamma ratios

    .. math::
        \prod_{l=1}^{r} \frac{\Gamma(\mu s - \gamma + 2 - (l+1)a/2 + b + ra)}
                            {\Gamma(\mu s - \gamma + 1 + (l-1)a/2)}
    """
    r, a, b, g = spec.r, spec.a, spec.b, spec.genus
    value = 1.0
    for l in range(1, r + 1):
        num = mu * s - g + 2 - (l + 1) * a / 2 + b + r * a
        den = mu * s - g + 1 + (l - 1) * a / 2
        try:
            value *= gamma_ratio(num, den)
        except PoleError as exc:
            raise PoleError(f"x_tilde pole at l={l}: {exc}") from exc
    return value


def dk_x_tilde(spec: DomainSpec, mu: float, d: int, k: int) -> float:
    """k-th backward difference ``sum_j C(k,j) (-1)^j x_tilde(d - j)``."""
    if not 0 <= k <= d:
        raise ValueError(f"k must lie in [0, {d}], got {k}")
    return sum(math.comb(k, j) * (-1) ** j * x_tilde(spec, mu, d - j) for j in range(k + 1))


def admissible(params: HartogsParams, m: int) -> bool:
    base = params.base
    return m > params.dim and m > (base.genus - 1) / params.mu


def admissible_grid(params: HartogsParams, count: int, start: Optional[int] = None) -> list[int]:
    m = start if start is not None else 1
    out = []
    while len(out) < count:
        if admissible(params, m):
            out.append(m)
        m += 1
    return out


def distortion_weights(params: HartogsParams, m: int) -> np.ndarray:
    """Coefficients ``c_k`` with ``T_m = sum_k c_k (1 - |w|^2/N^mu)^(d-k)``."""
    if not admissible(params, m):
        raise HypothesisViolationError(
            f"m={m} must exceed max(d+d0={params.dim}, (genus-1)/mu={(params.base.genus - 1) / params.mu:.4g})"
        )
    base, mu, d0 = params.base, params.mu, params.d0
    d = base.dim
    return np.array([
        dk_x_tilde(base, mu, d, k) / math.factorial(k) * gamma_ratio(m - d + k, m - d - d0)
        for k in range(d + 1)
    ]) / mu**d


def kempf_distortion_zw(params: HartogsParams, m: int, z, w) -> np.ndarray:
    """Vectorised closed-form distortion (no membership check on ``z``)."""
    c = distortion_weights(params, m)
    d = params.base.dim
    x = np.sum(np.abs(np.asarray(w)) ** 2, axis=-1) / norm_unchecked(params.base, z) ** params.mu
    one_minus = 1.0 - np.asarray(x)
    return sum(c[k] * one_minus ** (d - k) for k in range(d + 1))


def kempf_distortion(params: HartogsParams, m: int, v: HartogsPoint) -> float:
    if rho(params, v) <= 0.0:
        raise OutsideDomainError("point is not inside the Cartan-Hartogs domain")
    return float(kempf_distortion_zw(params, m, v.z, v.w))


# -- interpolation --------------------------------------------------------------


def _newton_monomial(nodes: Sequence[int], values: Sequence[Fraction]) -> list[Fraction]:
    """Exact interpolating polynomial, coefficients in ascending powers."""
    n = len(nodes)
    coef = list(values)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (nodes[i] - nodes[i - j])
    poly = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # poly = poly * (m - nodes[i]) + coef[i]
        shifted = [Fraction(0)] + poly[:-1]
        poly = [shifted[k] - nodes[i] * poly[k] for k in range(n)]
        poly[0] += coef[i]
    return poly


def _poly_eval(poly: Sequence[Fraction], m: int) -> Fraction:
    acc = Fraction(0)
    for c in reversed(poly):
        acc = acc * m + c
    return acc


@dataclass
class DistortionReport:
    params: HartogsParams
    m_grid: list[int]
    point: HartogsPoint
    values: list[float]
    coefficients: list[float]
    interpolation_residual: float
    check_grid: list[int] = field(default_factory=list)
    check_values: list[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "params": {"base": self.params.base.name, "mu": self.params.mu, "d0": self.params.d0},
            "point": _point_dict(self.point),
            "m_grid": list(self.m_grid),
            "values": list(self.values),
            "coefficients": list(self.coefficients),
            "check_grid": list(self.check_grid),
            "check_values": list(self.check_values),
            "residual": self.interpolation_residual,
        }


def _point_dict(v: HartogsPoint) -> dict:
    return {
        "z": [[float(c.real), float(c.imag)] for c in v.z],
        "w": [[float(c.real), float(c.imag)] for c in v.w],
    }


def tyz_coefficients(params: HartogsParams, v: HartogsPoint, m_grid: Optional[Sequence[int]] = None,
                     check_grid: Optional[Sequence[int]] = None) -> DistortionReport:
    """Interpolate ``m -> T_m(v)`` by a polynomial of degree ``d + d0``.

    Interpolation is carried out exactly on the (binary) floating-point
    values, so the held-out residual measures only how far ``T_m`` is from
    a polynomial.  ``coefficients[j]`` multiplies ``m^(d+d0-j)``.
    """
    degree = params.dim
    if m_grid is None:
        m_grid = admissible_grid(params, degree + 1)
    m_grid = [int(m) for m in m_grid]
    if len(m_grid) != degree + 1 or len(set(m_grid)) != len(m_grid):
        raise GridError(f"need {degree + 1} distinct nodes, got {m_grid}")
    if check_grid is None:
        check_grid = admissible_grid(params, 3, start=max(m_grid) + 1)
    check_grid = [int(m) for m in check_grid]
    values = [kempf_distortion(params, m, v) for m in m_grid]
    poly = _newton_monomial(m_grid, [Fraction(x) for x in values])
    check_values = [kempf_distortion(params, m, v) for m in check_grid]
    residual = 0.0
    for m, t in zip(check_grid, check_values):
        residual = max(residual, float(abs(_poly_eval(poly, m) - Fraction(t)) / abs(Fraction(t))))
    return DistortionReport(
        params=params,
        m_grid=m_grid,
        point=v,
        values=values,
        coefficients=[float(c) for c in reversed(poly)],
        interpolation_residual=residual,
        check_grid=check_grid,
        check_values=check_values,
    )


# -- Rawnsley oracle --------------------------------------------------------------


def _radial_z(spec: DomainSpec, radius_sq: np.ndarray) -> np.ndarray:
    z = np.zeros((len(radius_sq), spec.dim), dtype=complex)
    z[:, 0] = np.sqrt(radius_sq)
    return z


def _density_bracket(params: HartogsParams, radius_sq: np.ndarray, stencil: Stencil) -> np.ndarray:
    """``A(z) N(z)^(genus - mu(d+1))`` at radial points of a ball base."""
    base = params.base
    z = _radial_z(base, radius_sq)
    a_vals = boundary_density_A(base, params.mu, z, stencil)
    return a_vals * (1.0 - radius_sq) ** (base.genus - params.mu * (base.dim + 1))


def _fiber_beta(params: HartogsParams, m: int, fiber_degree: int) -> float:
    """``∫_0^1 u^(|beta|+d0-1) (1-u)^(m-n-1) du`` by a Jacobi rule."""
    exponent = m - params.dim - 1
    t, w = jacobi_rule(fiber_degree // 2 + params.d0 // 2 + 1, exponent)
    return float(np.dot(w, t ** (fiber_degree + params.d0 - 1)))


def _split_basis(params: HartogsParams, basis: MonomialBasis):
    arr = basis.array
    d = params.base.dim
    return arr[:, :d], arr[:, d:]


def _radial_gram_diagonal(params: HartogsParams, m: int, basis: MonomialBasis, stencil: Stencil) -> np.ndarray:
    """Exact normalised norms ``∫ rho^m |z^a w^b|^2 dV / pi^n`` over a ball base.

    Angular integration is done analytically (monomials are orthogonal),
    the fiber integral is a Beta integral, and the base radial integral
    uses a Gauss-Jacobi rule absorbing the non-polynomial power of
    ``1 - |z|^2``.  The density bracket ``A N^(genus - mu(d+1))`` is
    measured by finite differences at the radial nodes.
    """
    base, mu, d0 = params.base, params.mu, params.d0
    d, n = base.dim, params.dim
    za, wb = _split_basis(params, basis)
    out = np.empty(len(basis))
    cache: dict[tuple[int, int], float] = {}
    for i, (alpha, beta) in enumerate(zip(za, wb)):
        ka, kb = int(alpha.sum()), int(beta.sum())
        key = (ka, kb)
        if key not in cache:
            exponent = mu * (kb + d0 + m - n - 1) + mu * (d + 1) - base.genus
            t, w = jacobi_rule(ka // 2 + d // 2 + 2, exponent)
            bracket = _density_bracket(params, t, stencil)
            radial = float(np.dot(w, t ** (ka + d - 1) * bracket))
            cache[key] = radial * _fiber_beta(params, m, kb)
        out[i] = ball_moment_factor(d, alpha) * ball_moment_factor(d0, beta) * cache[key]
    return out


def _mc_gram(params: HartogsParams, m: int, basis: MonomialBasis, quad: SampleSet,
             stencil: Stencil, a_values: Optional[np.ndarray] = None) -> np.ndarray:
    """Gram matrix from Monte Carlo base nodes and exact fiber integrals.

    Fiber monomials with different exponents are orthogonal, so the matrix
    is block diagonal in ``beta``.
    """
    base, mu, d0 = params.base, params.mu, params.d0
    d, n = base.dim, params.dim
    z = quad.points
    if a_values is None:
        a_values = boundary_density_A(base, mu, z, stencil)
    f = norm_unchecked(base, z) ** mu
    za, wb = _split_basis(params, basis)
    zbasis = MonomialBasis(tuple(tuple(int(x) for x in row) for row in za))
    phi = zbasis.evaluate(z)
    gram = np.zeros((len(basis), len(basis)), dtype=complex)
    beta_keys = [tuple(b) for b in wb]
    for key in sorted(set(beta_keys)):
        idx = [i for i, b in enumerate(beta_keys) if b == key]
        kb = sum(key)
        radial = quad.weights * a_values * f ** (kb + d0 + m - n - 1)
        block = (phi[:, idx].T * radial) @ np.conj(phi[:, idx])
        factor = ball_moment_factor(d0, key) * _fiber_beta(params, m, kb) / math.pi**d
        gram[np.ix_(idx, idx)] = factor * block
    return gram


def rawnsley_oracle(params: HartogsParams, m: int, v: HartogsPoint, degree_cutoff: int = 20,
                    quad: Optional[SampleSet] = None, stencil: Stencil = DEFAULT_STENCIL) -> float:
    """Kempf distortion from an orthonormalised monomial basis.

    ``T_m(v) = rho(v)^m  phi(v)^* G^{-1} phi(v)`` with ``G`` the Gram
    matrix of the monomials ``z^alpha w^beta`` (total degree up to
    ``degree_cutoff``) under ``∫ rho^m f gbar omega^n/n! / pi^n``.

    Without ``quad`` the base must be a ball and the exact radial path is
    used; with ``quad`` (a sample set over the base) the base integral is
    Monte Carlo.
    """
    if m <= params.dim:
        raise HypothesisViolationError(f"m={m} must exceed d+d0={params.dim} for integrability")
    basis = MonomialBasis.up_to(params.dim, degree_cutoff)
    if quad is None:
        if not params.base.is_ball:
            raise UnsupportedError("exact radial Gram needs a ball base; pass a Monte Carlo quad")
        gram = np.diag(_radial_gram_diagonal(params, m, basis, stencil))
    else:
        gram = _mc_gram(params, m, basis, quad, stencil)
    factor = orthonormalize(gram)
    phi = basis.evaluate(v.coords)
    return float(rho(params, v) ** m * factor.quadratic_form(phi))


def rawnsley_origin_mc(params: HartogsParams, m: int, quad: SampleSet,
                       stencil: Stencil = DEFAULT_STENCIL) -> tuple[float, float]:
    """Monte Carlo ``T_m(0) = 1 / ||1||^2`` with its standard error.

    Only the constant monomial is nonzero at the origin, so no truncation
    is involved; the error is purely Monte Carlo.
    """
    base, mu, d0 = params.base, params.mu, params.d0
    n = params.dim
    a_values = boundary_density_A(base, mu, quad.points, stencil)
    f = norm_unchecked(base, quad.points) ** mu
    factor = _fiber_beta(params, m, 0) / math.factorial(d0 - 1) / math.pi**base.dim
    norm1, err = integrate(a_values * f ** (d0 + m - n - 1) * factor, quad)
    value = 1.0 / norm1
    return value, value * err / norm1
