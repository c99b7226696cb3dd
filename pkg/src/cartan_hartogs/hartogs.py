"""Cartan-Hartogs domains ``{(z, w) in Omega x C^d0 : |w|^2 < N(z)^mu}``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .calculus import DEFAULT_STENCIL, Stencil, boundary_density_A, complex_hessian_log
from .domains import DomainSpec, contains, norm_unchecked, sample_interior
from .errors import OutsideDomainError, PreconditionError, UnsupportedError
from .quadrature import SampleSet, exact_sum


@dataclass(frozen=True)
class HartogsParams:
    base: DomainSpec
    mu: float
    d0: int = 1

    def __post_init__(self):
        if not self.mu > 0:
            raise PreconditionError(f"mu must be positive, got {self.mu}")
        if not isinstance(self.d0, int) or self.d0 < 1:
            raise PreconditionError(f"d0 must be a positive integer, got {self.d0}")

    @property
    def dim(self) -> int:
        return self.base.dim + self.d0


@dataclass(frozen=True, eq=False)
class HartogsPoint:
    z: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "z", np.atleast_1d(np.asarray(self.z, dtype=complex)))
        object.__setattr__(self, "w", np.atleast_1d(np.asarray(self.w, dtype=complex)))

    @property
    def coords(self) -> np.ndarray:
        return np.concatenate([self.z, self.w])

    def rotated(self, phase: complex) -> "HartogsPoint":
        """The circle action ``(z, w) -> (z, lambda w)``."""
        return HartogsPoint(self.z, phase * self.w)


def split_coords(params: HartogsParams, coords: np.ndarray) -> HartogsPoint:
    coords = np.asarray(coords, dtype=complex)
    d = params.base.dim
    if coords.shape[-1] != params.dim:
        raise ValueError(f"expected {params.dim} coordinates, got {coords.shape[-1]}")
    return HartogsPoint(coords[:d], coords[d:])


def rho_zw(params: HartogsParams, z, w) -> np.ndarray:
    """Vectorised defining function ``N(z)^mu - |w|^2`` (no membership check)."""
    w = np.asarray(w, dtype=complex)
    return norm_unchecked(params.base, z) ** params.mu - np.sum(np.abs(w) ** 2, axis=-1)


def rho(params: HartogsParams, v: HartogsPoint) -> float:
    if not contains(params.base, v.z):
        raise OutsideDomainError(f"z is outside the base domain {params.base.name}")
    return float(rho_zw(params, v.z, v.w))


def hermitian_weight(params: HartogsParams, m: int, v: HartogsPoint) -> float:
    """``h_m = rho^m``: the m-th tensor power of the line-bundle metric."""
    value = rho(params, v)
    if value <= 0.0:
        raise OutsideDomainError("point is not inside the Cartan-Hartogs domain")
    return value**m


def _log_potential(params: HartogsParams):
    d = params.base.dim

    def f(x):
        return rho_zw(params, x[..., :d], x[..., d:])

    return f


def metric_hartogs(params: HartogsParams, v: HartogsPoint, stencil: Stencil = DEFAULT_STENCIL) -> np.ndarray:
    """``-1/2 ddbar log rho`` over all ``d + d0`` coordinates."""
    if rho(params, v) <= 0.0:
        raise OutsideDomainError("point is not inside the Cartan-Hartogs domain")
    return -0.5 * complex_hessian_log(_log_potential(params), v.coords, stencil)


def volume_density(params: HartogsParams, v: HartogsPoint, stencil: Stencil = DEFAULT_STENCIL) -> float:
    """Density of ``omega^n / n!`` against Lebesgue measure, ``det(-ddbar log rho)``."""
    g = metric_hartogs(params, v, stencil)
    return float(np.real(np.linalg.det(g))) * 2.0**params.dim


def volume_density_factored(params: HartogsParams, z, w, a_values=None,
                            stencil: Stencil = DEFAULT_STENCIL) -> np.ndarray:
    """Same density through the factorisation ``A(z) / rho^(d+d0+1)``.

    Only base derivatives are needed, so this is the cheap route for
    batches; ``a_values`` may be passed in when ``A(z)`` is already known.
    """
    if a_values is None:
        a_values = boundary_density_A(params.base, params.mu, z, stencil)
    return a_values / rho_zw(params, z, w) ** (params.dim + 1)


@dataclass(frozen=True, eq=False)
class BoundarySamples:
    """Points of the smooth boundary part ``|w|^2 = N^mu`` (``d0 = 1``).

    ``weights`` integrate against ``alpha ^ (d alpha)^d`` written as
    ``kappa(z) dtheta_w ^ dλ(z)``, ``kappa = 2^d A(z)``.
    """

    params: HartogsParams
    z: np.ndarray
    theta: np.ndarray
    weights: np.ndarray
    kappa: np.ndarray
    seed: Optional[int] = None
    trials: Optional[int] = None

    def __len__(self) -> int:
        return len(self.theta)

    @property
    def w(self) -> np.ndarray:
        radius = norm_unchecked(self.params.base, self.z) ** (self.params.mu / 2.0)
        return (radius * np.exp(1j * self.theta))[:, None]

    def as_sample_set(self) -> SampleSet:
        coords = np.concatenate([self.z, self.w], axis=1)
        return SampleSet(points=coords, weights=self.weights, seed=self.seed, trials=self.trials)


def sample_boundary(params: HartogsParams, count: int, seed: int,
                    stencil: Stencil = DEFAULT_STENCIL, min_norm: float = 0.0) -> BoundarySamples:
    """Sample the smooth boundary with the contact volume form as weight.

    ``z`` comes from the interior sampler, ``theta_w`` is uniform; the
    density ``kappa(z) = 2^d A(z)`` is measured from derivatives of
    ``N^mu`` rather than taken from a closed-form constant.
    """
    if params.d0 != 1:
        raise UnsupportedError("boundary sampling is implemented for d0 = 1 only")
    base = sample_interior(params.base, count, seed, min_norm=min_norm)
    rng = np.random.default_rng([seed, 1])
    theta = rng.random(count) * (2.0 * np.pi)
    kappa = 2.0**params.base.dim * boundary_density_A(params.base, params.mu, base.points, stencil)
    weights = base.weights * (2.0 * np.pi) * kappa
    return BoundarySamples(params, base.points, theta, weights, kappa, seed=seed, trials=base.trials)


@dataclass(frozen=True)
class BoundaryConstant:
    measured: float
    deviation: float
    printed: float

    @property
    def discrepancy(self) -> float:
        return self.measured / self.printed


def boundary_constant(params: HartogsParams, z, stencil: Stencil = DEFAULT_STENCIL) -> BoundaryConstant:
    """``kappa(z) N^(genus - mu(d+1))`` over a batch of base points.

    Returns its mean, max relative deviation, and the closed-form value
    ``(2 mu / genus)^d`` for comparison.
    """
    base = params.base
    d = base.dim
    kappa = 2.0**d * boundary_density_A(base, params.mu, z, stencil)
    scaled = kappa * norm_unchecked(base, z) ** (base.genus - params.mu * (d + 1))
    mean = exact_sum(scaled) / len(scaled)
    return BoundaryConstant(
        measured=mean,
        deviation=float(np.max(np.abs(scaled / mean - 1.0))),
        printed=(2.0 * params.mu / base.genus) ** d,
    )


def fiber_ball_volume(d0: int, radius_sq) -> np.ndarray:
    """Lebesgue volume of ``{|w|^2 < radius_sq}`` in ``C^d0``."""
    return math.pi**d0 * np.asarray(radius_sq) ** d0 / math.factorial(d0)
