"""Hadamard factors of the frame operator and the sparsity patterns they carry."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import GaborSystem, canonical_residues
from .errors import InvalidArgumentError, InvalidDimensionError, InvalidSetError
from .numerics import DEFAULT_TOL, ToleranceConfig, as_matrix, as_vector, hadamard, roots_of_unity


@dataclass(frozen=True)
class SubgroupInfo:
    is_subgroup: bool
    order: Optional[int] = None
    generator: Optional[int] = None


@dataclass(frozen=True)
class DiagonalSupport:
    """Wrapped diagonals ``d`` (``(j - i) mod N == d``) that are not numerically zero."""

    N: int
    residues: tuple[int, ...]

    def __contains__(self, d):
        return d % self.N in self.residues

    def zeros(self) -> tuple[int, ...]:
        present = set(self.residues)
        return tuple(d for d in range(self.N) if d not in present)


def modulation_vector(n: int, L) -> np.ndarray:
    """``m[d] = sum_{l in L} zeta_n**(l*d)`` for d = 0..n-1."""
    L = canonical_residues(L, n)
    if not L:
        raise InvalidSetError("modulation set must be nonempty")
    d = np.arange(n)
    return roots_of_unity(n, np.outer(d, L)).sum(axis=1)


def _circulant_from(vec: np.ndarray) -> np.ndarray:
    n = vec.size
    i = np.arange(n)
    return vec[(i[:, None] - i[None, :]) % n]


def modulation_matrix(n: int, L) -> np.ndarray:
    """``M_L[i, j] = sum_{l in L} zeta_n**(l*(i-j))``; circulant and Hermitian."""
    return _circulant_from(modulation_vector(n, L))


def translation_matrix(n: int, g, K) -> np.ndarray:
    """``T_K[i, j] = sum_{k in K} g[i-k] * conj(g[j-k])``."""
    g = as_vector(g)
    if g.size != n:
        raise InvalidDimensionError(f"window length {g.size} != N={n}")
    K = canonical_residues(K, n)
    if not K:
        raise InvalidSetError("translation set must be nonempty")
    shifts = np.stack([np.roll(g, k) for k in K], axis=1)
    return shifts @ shifts.conj().T


def frame_operator_factored(sys: GaborSystem) -> np.ndarray:
    return hadamard(modulation_matrix(sys.N, sys.L), translation_matrix(sys.N, sys.g, sys.K))


def cyclic_subgroup(n: int, order: int) -> tuple[int, ...]:
    """The unique subgroup of Z_n of the given order, ``<n/order>``."""
    if order < 1 or n % order:
        raise InvalidArgumentError(f"{order} does not divide {n}")
    step = n // order
    return tuple(step * t for t in range(order))


def detect_subgroup(A, n: int) -> SubgroupInfo:
    A = canonical_residues(A, n)
    order = len(A)
    if order == 0 or n % order:
        return SubgroupInfo(False)
    if A != cyclic_subgroup(n, order):
        return SubgroupInfo(False)
    return SubgroupInfo(True, order, (n // order) % n)


def wrapped_diagonals(a) -> np.ndarray:
    """Array ``D`` with ``D[d, i] = a[i, (i + d) mod N]``."""
    a = as_matrix(a)
    n = a.shape[0]
    i = np.arange(n)
    return a[i[None, :], (i[None, :] + i[:, None]) % n]


def diagonal_support(a, cfg: ToleranceConfig = DEFAULT_TOL) -> DiagonalSupport:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise InvalidDimensionError("matrix must be square")
    mags = np.max(np.abs(wrapped_diagonals(a)), axis=1)
    return DiagonalSupport(a.shape[0], tuple(int(d) for d in np.flatnonzero(mags > cfg.zero_tol)))


def subgroup_exponential_sum(n: int, r: int, d: int) -> float:
    """Closed form of ``sum_{l in <n/r>} zeta_n**(l*d)``: r if r | d, else 0."""
    if r < 1 or n % r:
        raise InvalidArgumentError(f"{r} does not divide {n}")
    return float(r) if d % r == 0 else 0.0


def is_block_circulant(a, block_size: int, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True iff ``a[i+M, j+M] == a[i, j]`` (indices mod N) with ``M = block_size``."""
    a = as_matrix(a)
    n = a.shape[0]
    if a.shape[1] != n:
        raise InvalidDimensionError("matrix must be square")
    if block_size < 1 or n % block_size:
        raise InvalidArgumentError(f"block size {block_size} does not divide {n}")
    shifted = np.roll(a, (-block_size, -block_size), axis=(0, 1))
    return float(np.max(np.abs(shifted - a))) <= cfg.zero_tol
