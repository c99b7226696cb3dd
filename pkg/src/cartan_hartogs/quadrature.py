"""Seeded sample sets, deterministic integration and exact radial rules."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.special import roots_jacobi

from .errors import IntegrandError, UnsupportedError


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Weighted nodes.

    ``trials`` is the number of proposals behind a rejection sample (used
    for the standard error); it is ``None`` for deterministic rules, whose
    standard error is reported as zero.  ``variance_hint`` is the squared
    relative standard error of the total measure.
    """

    points: np.ndarray
    weights: np.ndarray
    seed: Optional[int] = None
    variance_hint: float = 0.0
    trials: Optional[int] = None

    def __post_init__(self):
        if len(self.points) != len(self.weights):
            raise ValueError("points and weights differ in length")
        if not np.all(np.isfinite(self.weights)) or np.any(self.weights <= 0):
            raise ValueError("weights must be finite and positive")

    def __len__(self) -> int:
        return len(self.weights)


def exact_sum(values: np.ndarray) -> complex | float:
    """Correctly rounded sum; the result does not depend on element order."""
    values = np.asarray(values).ravel()
    if np.iscomplexobj(values):
        return complex(math.fsum(values.real.tolist()), math.fsum(values.imag.tolist()))
    return math.fsum(values.tolist())


def integrate(f: Callable[[np.ndarray], np.ndarray] | np.ndarray, samples: SampleSet):
    """Return ``(value, stderr)`` for ``sum_i w_i f(x_i)``.

    ``f`` is either a vectorised callable on ``samples.points`` or the
    precomputed node values.  For rejection samples the standard error
    treats each of the ``trials`` proposals as one draw (rejected ones
    contribute zero), so it also covers the acceptance-ratio noise.
    """
    values = f(samples.points) if callable(f) else f
    values = np.asarray(values)
    if values.shape[0] != len(samples):
        raise IntegrandError(f"integrand gave {values.shape[0]} values for {len(samples)} nodes")
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        raise IntegrandError(f"non-finite integrand value at node {int(bad[0])}")
    terms = samples.weights * values
    value = exact_sum(terms)
    if samples.trials is None:
        return value, 0.0
    n = samples.trials
    second = math.fsum((n * np.abs(terms) ** 2).tolist())
    var = max(second - abs(value) ** 2, 0.0) / n
    return value, math.sqrt(var)


def jacobi_rule(n_nodes: int, weight_exponent: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Gauss rule on ``[0, 1]`` for the weight ``(1 - t)**weight_exponent``.

    Exact for polynomials of degree ``2 * n_nodes - 1`` against that weight;
    ``weight_exponent = 0`` is Gauss-Legendre.
    """
    if weight_exponent <= -1.0:
        raise ValueError("weight exponent must exceed -1")
    x, w = roots_jacobi(n_nodes, weight_exponent, 0.0)
    t = 0.5 * (1.0 + x)
    return t, w * 0.5 ** (weight_exponent + 1.0)


def radial_rule(spec, degree: int, weight_exponent: float = 0.0) -> SampleSet:
    """Radial rule in ``t = |z|^2`` on ``[0, 1]`` for a rank-one (ball) base.

    Exact for polynomial integrands in ``t`` of degree ``<= degree`` times
    ``(1 - t)**weight_exponent``.  Angular integrals are left to the
    caller; on a ball the monomials are orthogonal so only ``t`` remains.
    """
    if getattr(spec, "r", None) != 1:
        raise UnsupportedError(f"radial rule needs a rank-one base, got {spec}")
    n_nodes = max(degree // 2 + 1, 1)
    t, w = jacobi_rule(n_nodes, weight_exponent)
    return SampleSet(points=t.reshape(-1, 1), weights=w)


def disk_polar_rule(spec, degree: int, n_angles: int) -> SampleSet:
    """Product rule on the unit disk, Lebesgue measure.

    Gauss-Legendre in ``t = |z|^2`` times the equispaced angle rule; exact
    for ``t``-polynomials up to ``degree`` times trigonometric polynomials
    of frequency below ``n_angles``.
    """
    if getattr(spec, "r", None) != 1 or getattr(spec, "dim", None) != 1:
        raise UnsupportedError("polar rule implemented for the disk only")
    radial = radial_rule(spec, degree)
    t = radial.points[:, 0]
    theta = 2.0 * np.pi * np.arange(n_angles) / n_angles
    z = np.sqrt(t)[:, None] * np.exp(1j * theta)[None, :]
    # dλ = (1/2) dt dθ
    w = (np.pi / n_angles) * np.repeat(radial.weights[:, None], n_angles, axis=1)
    return SampleSet(points=z.reshape(-1, 1), weights=w.ravel())


def ball_moment_factor(dim: int, alpha) -> float:
    """``alpha! / (|alpha| + dim - 1)!``.

    For radial ``g``:  ``∫_{C^dim} g(|z|^2) |z^alpha|^2 dλ
    = pi^dim * factor * ∫_0^∞ R^(|alpha|+dim-1) g(R) dR``.
    """
    alpha = tuple(int(a) for a in alpha)
    num = math.prod(math.factorial(a) for a in alpha)
    return num / math.factorial(sum(alpha) + dim - 1)
