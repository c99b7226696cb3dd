"""Classical bounded symmetric domains (types I-IV).

Points of a domain are complex vectors of length ``dim``.  Matrix domains
are flattened row-major: the full ``p x q`` matrix for type I, the upper
triangle (diagonal included, each off-diagonal entry once) for type II and
the strict upper triangle for type III.  Every routine here accepts either
a single point of shape ``(dim,)`` or a batch of shape ``(..., dim)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import (
    ConsistencyError,
    InvalidKindError,
    NonpositiveNormError,
    SamplingError,
    ShapeError,
)
from .quadrature import SampleSet

_CLOSURE_TOL = 1e-12


@dataclass(frozen=True)
class TypeI:
    """``p x q`` complex matrices with ``I - Z Z^*`` positive definite."""

    p: int
    q: int

    def __post_init__(self):
        if not (isinstance(self.p, int) and isinstance(self.q, int)):
            raise InvalidKindError("typeI parameters must be integers")
        if self.p < 1 or self.q < self.p:
            raise InvalidKindError(f"typeI needs 1 <= p <= q, got p={self.p}, q={self.q}")

    def __str__(self):
        return f"typeI:{self.p},{self.q}"


@dataclass(frozen=True)
class TypeII:
    """Symmetric ``n x n`` complex matrices."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise InvalidKindError(f"typeII needs n >= 2, got {self.n}")

    def __str__(self):
        return f"typeII:{self.n}"


@dataclass(frozen=True)
class TypeIII:
    """Skew-symmetric ``n x n`` complex matrices."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 4:
            raise InvalidKindError(f"typeIII needs n >= 4, got {self.n}")

    def __str__(self):
        return f"typeIII:{self.n}"


@dataclass(frozen=True)
class TypeIV:
    """The Lie ball in C^n."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 3:
            raise InvalidKindError(f"typeIV needs n >= 3, got {self.n}")

    def __str__(self):
        return f"typeIV:{self.n}"


DomainKind = Union[TypeI, TypeII, TypeIII, TypeIV]


@dataclass(frozen=True)
class DomainSpec:
    kind: DomainKind
    r: int
    a: int
    b: int
    genus: int
    dim: int

    @property
    def name(self) -> str:
        return str(self.kind)

    @property
    def is_ball(self) -> bool:
        """Rank one classical domains are exactly the unit balls ``typeI:1,q``."""
        return self.r == 1


_KIND_RE = re.compile(r"^type(I|II|III|IV):(\d+)(?:,(\d+))?$")


def parse_kind(text: str) -> DomainKind:
    """Parse ``typeI:p,q``, ``typeII:n``, ``typeIII:n`` or ``typeIV:n``."""
    match = _KIND_RE.match(text.strip())
    if match is None:
        raise InvalidKindError(f"cannot parse domain kind {text!r}")
    roman, first, second = match.groups()
    first = int(first)
    if roman == "I":
        if second is None:
            raise InvalidKindError("typeI needs two parameters, e.g. typeI:1,2")
        return TypeI(first, int(second))
    if second is not None:
        raise InvalidKindError(f"type{roman} takes a single parameter")
    return {"II": TypeII, "III": TypeIII, "IV": TypeIV}[roman](first)


def _table(kind: DomainKind) -> tuple[int, int, int]:
    if isinstance(kind, TypeI):
        return kind.p, 2, kind.q - kind.p
    if isinstance(kind, TypeII):
        return kind.n, 1, 0
    if isinstance(kind, TypeIII):
        return kind.n // 2, 4, 0 if kind.n % 2 == 0 else 2
    if isinstance(kind, TypeIV):
        return 2, kind.n - 2, 0
    raise InvalidKindError(f"unknown domain kind {kind!r}")


def _direct_invariants(kind: DomainKind) -> tuple[int, int]:
    if isinstance(kind, TypeI):
        return kind.p + kind.q, kind.p * kind.q
    if isinstance(kind, TypeII):
        return kind.n + 1, kind.n * (kind.n + 1) // 2
    if isinstance(kind, TypeIII):
        return 2 * (kind.n - 1), kind.n * (kind.n - 1) // 2
    return kind.n, kind.n


def make_domain(kind: DomainKind | str) -> DomainSpec:
    """Build the invariants ``(r, a, b, genus, dim)`` for a classical domain.

    Genus and dimension come from the identities
    ``genus = 2 + a(r-1) + b`` and ``dim = r + a r(r-1)/2 + r b`` and are
    cross-checked against the textbook values for each type.
    """
    if isinstance(kind, str):
        kind = parse_kind(kind)
    r, a, b = _table(kind)
    genus = 2 + a * (r - 1) + b
    dim = r + a * r * (r - 1) // 2 + r * b
    if (genus, dim) != _direct_invariants(kind):
        raise ConsistencyError(
            f"{kind}: identities give (genus, dim)=({genus}, {dim}) "
            f"but direct values are {_direct_invariants(kind)}"
        )
    return DomainSpec(kind=kind, r=r, a=a, b=b, genus=genus, dim=dim)


def to_matrix(spec: DomainSpec, z: np.ndarray) -> np.ndarray:
    """Rebuild the matrix ``Z`` (batched) from flattened coordinates."""
    kind = spec.kind
    z = np.asarray(z, dtype=complex)
    batch = z.shape[:-1]
    if isinstance(kind, TypeI):
        return z.reshape(*batch, kind.p, kind.q)
    n = kind.n
    out = np.zeros((*batch, n, n), dtype=complex)
    if isinstance(kind, TypeII):
        iu = np.triu_indices(n)
        out[..., iu[0], iu[1]] = z
        out[..., iu[1], iu[0]] = z
        return out
    if isinstance(kind, TypeIII):
        iu = np.triu_indices(n, k=1)
        out[..., iu[0], iu[1]] = z
        out[..., iu[1], iu[0]] = -z
        return out
    raise ShapeError(f"{kind} has no matrix realisation")


def _check_shape(spec: DomainSpec, z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if z.ndim == 0 or z.shape[-1] != spec.dim:
        raise ShapeError(f"{spec.name} points have {spec.dim} coordinates, got shape {z.shape}")
    return z


def _defect(spec: DomainSpec, z: np.ndarray) -> np.ndarray:
    """``I - Z Z^*`` for the matrix types."""
    mat = to_matrix(spec, z)
    eye = np.eye(mat.shape[-2])
    return eye - mat @ np.conj(np.swapaxes(mat, -1, -2))


def norm_unchecked(spec: DomainSpec, z) -> np.ndarray:
    """Generic norm without the membership check (used inside stencils)."""
    z = np.asarray(z, dtype=complex)
    if isinstance(spec.kind, TypeIV):
        sq = np.sum(np.abs(z) ** 2, axis=-1)
        s = np.sum(z * z, axis=-1)
        return 1.0 - 2.0 * sq + np.abs(s) ** 2
    if spec.r == 1 and isinstance(spec.kind, TypeI):
        return 1.0 - np.sum(np.abs(z) ** 2, axis=-1)
    det = np.real(np.linalg.det(_defect(spec, z)))
    if isinstance(spec.kind, TypeIII):
        # det(I - Z Z^*) is a perfect square for skew Z
        return np.sqrt(np.maximum(det, 0.0)) * np.sign(det)
    return det


def _in_closure(spec: DomainSpec, z: np.ndarray, tol: float) -> np.ndarray:
    if isinstance(spec.kind, TypeIV):
        sq = np.sum(np.abs(z) ** 2, axis=-1)
        s = np.abs(np.sum(z * z, axis=-1))
        return (s < 1.0 + tol) & (2.0 * sq < 1.0 + s**2 + tol)
    eig = np.linalg.eigvalsh(_defect(spec, z))
    return eig[..., 0] > -tol


def generic_norm(spec: DomainSpec, z) -> np.ndarray | float:
    """Generic norm ``N(z, z)``; equals 1 at the origin and lies in (0, 1] inside."""
    z = _check_shape(spec, z)
    if not np.all(_in_closure(spec, z, _CLOSURE_TOL)):
        raise NonpositiveNormError(f"point outside the closure of {spec.name}")
    value = norm_unchecked(spec, z)
    return float(value) if np.ndim(value) == 0 else value


def contains(spec: DomainSpec, z) -> np.ndarray | bool:
    z = _check_shape(spec, z)
    if isinstance(spec.kind, TypeIV):
        sq = np.sum(np.abs(z) ** 2, axis=-1)
        s = np.abs(np.sum(z * z, axis=-1))
        inside = (s < 1.0) & (2.0 * sq < 1.0 + s**2)
    else:
        eig = np.linalg.eigvalsh(_defect(spec, z))
        inside = eig[..., 0] > 0.0
    return bool(inside) if np.ndim(inside) == 0 else inside


_BATCH = 8192
_MIN_ACCEPTANCE = 1e-6
_MIN_TRIALS_FOR_FAILURE = 1_000_000
_MAX_TRIALS = 200_000_000


def _polydisk_draw(rng: np.random.Generator, size: int, dim: int) -> np.ndarray:
    radius = np.sqrt(rng.random((size, dim)))
    angle = rng.random((size, dim)) * (2.0 * np.pi)
    return radius * np.exp(1j * angle)


def sample_interior(spec: DomainSpec, count: int, seed: int, min_norm: float = 0.0) -> SampleSet:
    """Rejection-sample ``count`` points uniformly from the domain.

    Candidates are uniform on the unit polydisk, which contains every
    classical domain.  Each accepted point carries the weight
    ``pi**dim / trials`` so that weighted sums estimate Lebesgue integrals.
    With ``min_norm > 0`` the target region is ``{N(z) > min_norm}``.
    """
    if count < 1:
        raise SamplingError("count must be positive")
    rng = np.random.default_rng(seed)
    chunks = []
    accepted = 0
    trials = 0
    while accepted < count:
        cand = _polydisk_draw(rng, _BATCH, spec.dim)
        mask = contains(spec, cand)
        if min_norm > 0.0:
            mask &= norm_unchecked(spec, cand) > min_norm
        idx = np.flatnonzero(mask)
        need = count - accepted
        if idx.size >= need:
            chunks.append(cand[idx[:need]])
            trials += int(idx[need - 1]) + 1
            accepted = count
            break
        chunks.append(cand[idx])
        accepted += idx.size
        trials += _BATCH
        if trials >= _MIN_TRIALS_FOR_FAILURE and accepted / trials < _MIN_ACCEPTANCE:
            raise SamplingError(
                f"acceptance ratio {accepted / trials:.2e} below {_MIN_ACCEPTANCE} for {spec.name}"
            )
        if trials >= _MAX_TRIALS:
            raise SamplingError(f"gave up after {trials} trials for {spec.name}")
    points = np.concatenate(chunks, axis=0)
    box_volume = math.pi**spec.dim
    weights = np.full(count, box_volume / trials)
    ratio = count / trials
    return SampleSet(
        points=points,
        weights=weights,
        seed=seed,
        variance_hint=(1.0 - ratio) / count,
        trials=trials,
    )
