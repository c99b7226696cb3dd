"""Monomial bases and Cholesky orthonormalisation of Gram matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cholesky, solve_triangular

from .errors import IllConditionedError, QuadratureError

MAX_CONDITION = 1e12


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head, *tail)


@dataclass(frozen=True)
class MonomialBasis:
    """Multi-indices of total degree ``<= cutoff``, lexicographically sorted."""

    exponents: tuple[tuple[int, ...], ...]

    @classmethod
    def up_to(cls, n_vars: int, cutoff: int) -> "MonomialBasis":
        exps = [c for k in range(cutoff + 1) for c in _compositions(k, n_vars)]
        return cls(tuple(sorted(exps)))

    def __len__(self) -> int:
        return len(self.exponents)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.exponents, dtype=int).reshape(len(self), -1)

    @property
    def degrees(self) -> np.ndarray:
        return self.array.sum(axis=1)

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        """Monomial values, shape ``(..., len(basis))``."""
        z = np.asarray(z, dtype=complex)
        return np.prod(z[..., None, :] ** self.array, axis=-1)


@dataclass(frozen=True, eq=False)
class GramFactor:
    """``transform`` maps the monomial vector to an orthonormal family.

    With ``G = L L^*`` the transform is ``L^{-1}``; ``condition_number``
    is measured after symmetric diagonal (Jacobi) scaling of ``G``, since
    monomial norms alone can span many decades without any loss of
    accuracy in the triangular solves.
    """

    gram: np.ndarray
    cholesky: np.ndarray
    condition_number: float

    @property
    def transform(self) -> np.ndarray:
        eye = np.eye(len(self.gram))
        return solve_triangular(self.cholesky, eye, lower=True)

    def quadratic_form(self, values: np.ndarray) -> np.ndarray:
        """``sum_j |s_j|^2 = phi^* G^{-1} phi`` for monomial vectors ``phi``."""
        values = np.asarray(values, dtype=complex)
        flat = values.reshape(-1, values.shape[-1]).T
        y = solve_triangular(self.cholesky, flat, lower=True)
        return np.sum(np.abs(y) ** 2, axis=0).reshape(values.shape[:-1])


def orthonormalize(gram: np.ndarray, max_condition: float = MAX_CONDITION) -> GramFactor:
    gram = np.asarray(gram)
    gram = 0.5 * (gram + np.conj(gram.T))
    diag = np.real(np.diag(gram))
    if np.any(diag <= 0.0):
        raise QuadratureError("nonpositive diagonal Gram entry (quadrature noise?)")
    scale = 1.0 / np.sqrt(diag)
    scaled = gram * scale[:, None] * scale[None, :]
    eig = np.linalg.eigvalsh(scaled)
    if eig[0] <= 0.0:
        raise IllConditionedError("scaled Gram matrix is not positive definite")
    cond = float(eig[-1] / eig[0])
    if cond > max_condition:
        raise IllConditionedError(f"Gram condition number {cond:.2e} exceeds {max_condition:.0e}")
    lower = cholesky(scaled, lower=True) / scale[:, None]
    return GramFactor(gram=gram, cholesky=lower, condition_number=cond)
