"""Dense complex linear algebra primitives.

Vectors and matrices are plain numpy arrays of dtype ``complex128``. Every
function returns a fresh array and never mutates its inputs.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ContractViolationError,
    InvalidDimensionError,
    NotInvertibleError,
)


@dataclass(frozen=True)
class ToleranceConfig:
    """Thresholds for deciding numerical zeros and approximate equality.

    ``zero_tol`` is absolute. ``rel_tol`` is scaled by the largest entry
    magnitude of whatever is being compared.
    """

    zero_tol: float = 1e-10
    rel_tol: float = 1e-9

    def __post_init__(self):
        if not (self.zero_tol >= 0 and self.rel_tol >= 0):
            raise ValueError("tolerances must be nonnegative")


DEFAULT_TOL = ToleranceConfig()


def as_vector(v) -> np.ndarray:
    x = np.asarray(v, dtype=complex).reshape(-1)
    if x.size == 0:
        raise InvalidDimensionError("vector must have length >= 1")
    if not np.all(np.isfinite(x)):
        raise InvalidDimensionError("vector entries must be finite")
    return x


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise InvalidDimensionError(f"expected a nonempty 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidDimensionError("matrix entries must be finite")
    return m


def _scale(*arrays) -> float:
    return max(1.0, *(float(np.max(np.abs(a))) for a in arrays))


def roots_of_unity(n: int, exponents) -> np.ndarray:
    """Return zeta_n**m for each integer m, reducing m mod n before the exp."""
    m = np.mod(np.asarray(exponents, dtype=np.int64), n)
    return np.exp(2j * np.pi * m / n)


def dft_matrix(n: int) -> np.ndarray:
    """Normalized DFT matrix ``n**-0.5 * (zeta_n**(-k*j))``."""
    if n < 1:
        raise InvalidDimensionError("DFT size must be >= 1")
    k = np.arange(n)
    return roots_of_unity(n, -np.outer(k, k)) / np.sqrt(n)


def dft(v) -> np.ndarray:
    x = as_vector(v)
    return dft_matrix(x.size) @ x


def kronecker(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def hadamard(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise InvalidDimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return a * b


def is_hermitian(a, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return float(np.max(np.abs(a - a.conj().T))) <= cfg.rel_tol * _scale(a)


def is_unitary(u, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    dev = np.abs(u.conj().T @ u - np.eye(u.shape[0]))
    return float(np.max(dev)) <= cfg.rel_tol


def is_circulant(a, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True when ``a[i+1, j+1] == a[i, j]`` with indices mod n."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    shifted = np.roll(np.roll(a, 1, axis=0), 1, axis=1)
    return float(np.max(np.abs(shifted - a))) <= cfg.zero_tol


def hermitian_eigenvalues(a, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """All eigenvalues of a Hermitian matrix in nondecreasing order."""
    a = as_matrix(a)
    if not is_hermitian(a, cfg):
        raise ContractViolationError("matrix is not Hermitian")
    return np.linalg.eigvalsh(a)


def conjugate_by_unitary(u, a, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Return ``U* A U``."""
    u, a = as_matrix(u), as_matrix(a)
    if u.shape != a.shape or a.shape[0] != a.shape[1]:
        raise InvalidDimensionError(f"shape mismatch {u.shape} vs {a.shape}")
    if not is_unitary(u, cfg):
        raise ContractViolationError("transform is not unitary")
    return u.conj().T @ a @ u


def solve_hermitian(a, b, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Solve ``A x = b`` for Hermitian positive definite ``A``.

    Goes through the eigendecomposition so that the positivity precondition
    (smallest eigenvalue above ``zero_tol``) is checked exactly as stated.
    """
    a = as_matrix(a)
    b = as_vector(b)
    if a.shape[0] != a.shape[1] or a.shape[0] != b.size:
        raise InvalidDimensionError(f"cannot solve {a.shape} system with rhs of length {b.size}")
    if not is_hermitian(a, cfg):
        raise ContractViolationError("matrix is not Hermitian")
    w, v = np.linalg.eigh(a)
    if w[0] <= cfg.zero_tol:
        raise NotInvertibleError(f"smallest eigenvalue {w[0]:.3e} <= zero_tol")
    return v @ ((v.conj().T @ b) / w)
