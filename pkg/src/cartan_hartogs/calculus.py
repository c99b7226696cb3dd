"""Finite-difference complex calculus on the base domain.

Wirtinger derivatives are assembled from real central differences in the
coordinates ``x = [Re z, Im z]``:

    d/dz_j          = (d/dx_j - i d/dy_j) / 2
    d^2/dz_j dzbar_k = (f_{x_j x_k} + f_{y_j y_k} + i (f_{x_j y_k} - f_{y_j x_k})) / 4

with one optional level of Richardson extrapolation (``h`` and ``h/2``).
All functions accept a single point ``(n,)`` or a batch ``(B, n)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .domains import DomainSpec, norm_unchecked
from .errors import ConventionError, DomainViolationError, PreconditionError
from .quadrature import SampleSet, exact_sum

_CHUNK_POINTS = 2_000_000


@dataclass(frozen=True)
class Stencil:
    step: float = 1e-3
    richardson: bool = True

    def __post_init__(self):
        if not (1e-6 <= self.step <= 1e-1):
            raise ValueError(f"finite-difference step {self.step} outside [1e-6, 1e-1]")


DEFAULT_STENCIL = Stencil()


def _offsets(n_real: int) -> tuple[np.ndarray, dict]:
    """Unit offsets for value, gradient and full Hessian stencils."""
    rows = [np.zeros(n_real)]
    index = {"0": 0}
    eye = np.eye(n_real)
    for a in range(n_real):
        for s in (1, -1):
            index[(a, s)] = len(rows)
            rows.append(s * eye[a])
    for a in range(n_real):
        for b in range(a + 1, n_real):
            for sa in (1, -1):
                for sb in (1, -1):
                    index[(a, b, sa, sb)] = len(rows)
                    rows.append(sa * eye[a] + sb * eye[b])
    return np.array(rows), index


def _real_derivatives(g: Callable, z: np.ndarray, h, positive: bool):
    """Value, real gradient and real Hessian of ``g`` at a batch of points.

    ``h`` is a scalar or one step per point.
    """
    batch, n = z.shape
    n_real = 2 * n
    offsets, index = _offsets(n_real)
    unit = offsets[:, :n] + 1j * offsets[:, n:]  # (K, n)
    h = np.broadcast_to(np.asarray(h, dtype=float), (batch,))
    k = len(unit)
    per_chunk = max(1, _CHUNK_POINTS // k)
    values = np.empty((batch, k))
    for start in range(0, batch, per_chunk):
        stop = start + per_chunk
        block = z[start:stop, None, :] + h[start:stop, None, None] * unit[None, :, :]
        values[start:stop] = g(block)
    if positive and not np.all(values > 0.0):
        raise DomainViolationError("function is nonpositive at a stencil node")
    f0 = values[:, 0]
    grad = np.empty((batch, n_real))
    hess = np.empty((batch, n_real, n_real))
    for a in range(n_real):
        fp, fm = values[:, index[(a, 1)]], values[:, index[(a, -1)]]
        grad[:, a] = (fp - fm) / (2.0 * h)
        hess[:, a, a] = (fp - 2.0 * f0 + fm) / h**2
    for a in range(n_real):
        for b in range(a + 1, n_real):
            mixed = (
                values[:, index[(a, b, 1, 1)]]
                - values[:, index[(a, b, 1, -1)]]
                - values[:, index[(a, b, -1, 1)]]
                + values[:, index[(a, b, -1, -1)]]
            ) / (4.0 * h**2)
            hess[:, a, b] = mixed
            hess[:, b, a] = mixed
    return f0, grad, hess


def _to_wirtinger(grad: np.ndarray, hess: np.ndarray, n: int):
    dz = 0.5 * (grad[:, :n] - 1j * grad[:, n:])
    xx = hess[:, :n, :n]
    yy = hess[:, n:, n:]
    xy = hess[:, :n, n:]
    yx = hess[:, n:, :n]
    ddbar = 0.25 * (xx + yy + 1j * (xy - yx))
    return dz, ddbar


def wirtinger(g: Callable, z, stencil: Stencil = DEFAULT_STENCIL, positive: bool = False,
              step=None):
    """Return ``(g(z), dg/dz_j, d^2 g/dz_j dzbar_k)`` by finite differences.

    ``g`` must be vectorised: it maps complex arrays ``(..., n)`` to real
    arrays ``(...)``.  With ``positive`` set, a nonpositive value at any
    stencil node raises :class:`DomainViolationError`.  ``step`` overrides
    ``stencil.step``, possibly with one value per point.
    """
    z = np.asarray(z, dtype=complex)
    single = z.ndim == 1
    zb = z[None, :] if single else z
    n = zb.shape[-1]
    h = stencil.step if step is None else np.asarray(step, dtype=float).reshape(-1)
    f0, grad, hess = _real_derivatives(g, zb, h, positive)
    if stencil.richardson:
        _, grad2, hess2 = _real_derivatives(g, zb, h / 2.0, positive)
        grad = grad2 + (grad2 - grad) / 3.0
        hess = hess2 + (hess2 - hess) / 3.0
    dz, ddbar = _to_wirtinger(grad, hess, n)
    ddbar = 0.5 * (ddbar + np.conj(np.swapaxes(ddbar, -1, -2)))
    if single:
        return f0[0], dz[0], ddbar[0]
    return f0, dz, ddbar


def complex_hessian(f: Callable, z, stencil: Stencil = DEFAULT_STENCIL) -> np.ndarray:
    """Matrix ``d^2 f / dz_j dzbar_k`` (Hermitian-symmetrised)."""
    return wirtinger(f, z, stencil)[2]


def complex_hessian_log(f: Callable, z, stencil: Stencil = DEFAULT_STENCIL, step=None) -> np.ndarray:
    """Matrix ``d^2 log f / dz_j dzbar_k`` for a positive function ``f``."""

    def log_f(x):
        vals = f(x)
        if not np.all(vals > 0.0):
            raise DomainViolationError("f <= 0 at a stencil node")
        return np.log(vals)

    return wirtinger(log_f, z, stencil, step=step)[2]


def _potential(spec: DomainSpec, mu: float) -> Callable:
    return lambda x: norm_unchecked(spec, x) ** mu


def _check_mu(mu: float) -> None:
    if not mu > 0:
        raise PreconditionError(f"mu must be positive, got {mu}")


def metric_base(spec: DomainSpec, mu: float, z, stencil: Stencil = DEFAULT_STENCIL) -> np.ndarray:
    """``g = -1/2 * ddbar log N^mu`` on the base domain.

    The factor ``-1/2`` is the normalisation under which
    ``det(g) N^genus`` equals ``(mu/genus)^dim`` on the unit disk.
    """
    _check_mu(mu)
    g = -0.5 * complex_hessian_log(_potential(spec, mu), z, stencil)
    lowest = np.linalg.eigvalsh(g)[..., 0]
    if np.any(lowest <= 0.0):
        raise ConventionError(f"metric not positive definite on {spec.name} (min eigenvalue {np.min(lowest):.3e})")
    return g


def det_identity_values(spec: DomainSpec, mu: float, z, stencil: Stencil = DEFAULT_STENCIL) -> np.ndarray:
    """``det(g(z)) * N(z)^genus`` at each point of a batch."""
    g = metric_base(spec, mu, z, stencil)
    det = np.real(np.linalg.det(g))
    return det * norm_unchecked(spec, z) ** spec.genus


def det_identity_residual(spec: DomainSpec, mu: float, samples: SampleSet | np.ndarray,
                          stencil: Stencil = DEFAULT_STENCIL) -> tuple[float, float]:
    """Mean of ``det(g) N^genus`` over the samples and its max relative deviation."""
    _check_mu(mu)
    points = samples.points if isinstance(samples, SampleSet) else np.asarray(samples)
    c = det_identity_values(spec, mu, points, stencil)
    mean = exact_sum(c) / len(c)
    return mean, float(np.max(np.abs(c / mean - 1.0)))


# below this generic norm the step shrinks in proportion, keeping the
# stencil inside the domain for Monte Carlo nodes close to the boundary
_FULL_STEP_NORM = 0.1


def adaptive_step(spec: DomainSpec, z, stencil: Stencil) -> np.ndarray:
    n = norm_unchecked(spec, z)
    return stencil.step * np.clip(np.asarray(n) / _FULL_STEP_NORM, 0.0, 1.0)


def _norm_derivatives(spec: DomainSpec, mu: float, z, stencil: Stencil):
    _check_mu(mu)
    step = adaptive_step(spec, z, stencil)
    return wirtinger(_potential(spec, mu), z, stencil, positive=True, step=step)


def boundary_density_A(spec: DomainSpec, mu: float, z, stencil: Stencil = DEFAULT_STENCIL):
    """Boundary volume density ``A(z) = N^{mu(d+1)} det(G)``.

    ``G_jk = (F_j F_kbar - F_jkbar F) / F^2`` with ``F = N^mu``, i.e. the
    rank-one-updated form of ``-ddbar log F``; derivatives of ``F`` itself
    are taken by finite differences.
    """
    f, dz, ddbar = _norm_derivatives(spec, mu, z, stencil)
    f_arr = np.asarray(f)[..., None, None]
    outer = dz[..., :, None] * np.conj(dz)[..., None, :]
    g = (outer - ddbar * f_arr) / f_arr**2
    d = spec.dim
    return np.real(np.asarray(f) ** (d + 1) * np.linalg.det(g))


def _cofactor_expansion(f, dz, ddbar, sign: float):
    neg = -ddbar
    d = neg.shape[-1]
    total = f * np.linalg.det(neg)
    for j in range(d):
        for k in range(d):
            minor = np.delete(np.delete(neg, j, axis=-2), k, axis=-1)
            minor_det = np.linalg.det(minor) if d > 1 else np.ones(neg.shape[:-2])
            total = total + sign * (-1) ** (j + k) * dz[..., j] * np.conj(dz[..., k]) * minor_det
    return np.real(total)


def boundary_density_cofactor(spec: DomainSpec, mu: float, z, stencil: Stencil = DEFAULT_STENCIL):
    """Same quantity as :func:`boundary_density_A`, by explicit cofactor expansion

    ``A = F det(-F_jkbar) + sum_jk (-1)^(j+k) F_j F_kbar det(-F_pqbar)_(j,k)``
    (matrix determinant lemma).
    """
    f, dz, ddbar = _norm_derivatives(spec, mu, z, stencil)
    return _cofactor_expansion(np.asarray(f), dz, ddbar, +1.0)


def boundary_density_printed_sign(spec: DomainSpec, mu: float, z, stencil: Stencil = DEFAULT_STENCIL):
    """Cofactor expansion with a minus sign on the adjugate sum.

    Kept as a diagnostic only: on the disk it gives ``1 - 2|z|^2`` where the
    determinant chain gives 1.
    """
    f, dz, ddbar = _norm_derivatives(spec, mu, z, stencil)
    return _cofactor_expansion(np.asarray(f), dz, ddbar, -1.0)
