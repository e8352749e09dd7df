"""Window constructions and the full-sampling frame criteria."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import canonical_residues
from .errors import (
    ContractViolationError,
    DimensionalConstraintError,
    InvalidArgumentError,
    InvalidDimensionError,
)
from .numerics import DEFAULT_TOL, ToleranceConfig, as_vector, dft, dft_matrix

FAMILY_STYLES = ("basis", "fourier")


@dataclass(frozen=True)
class InterlaceSpec:
    """M = N/p vectors in C^p to be interlaced into a window of length N."""

    N: int
    p: int
    family: tuple

    @property
    def M(self) -> int:
        return self.N // self.p


@dataclass(frozen=True)
class SamplingCheck:
    is_frame: bool
    diagonal: np.ndarray


def default_orthogonal_family(M: int, p: int, style: str = "fourier") -> list[np.ndarray]:
    """M mutually orthogonal vectors of C^p.

    ``basis`` gives e_0..e_{M-1}; ``fourier`` gives the first M columns of the
    p-point DFT matrix, which have no zero entries.
    """
    if M > p:
        raise DimensionalConstraintError(f"cannot fit {M} orthogonal vectors in C^{p}")
    if M < 1:
        raise InvalidArgumentError("family size must be >= 1")
    if style == "basis":
        return [np.eye(p, dtype=complex)[k] for k in range(M)]
    if style == "fourier":
        f = dft_matrix(p)
        return [f[:, k].copy() for k in range(M)]
    raise InvalidArgumentError(f"unknown family style {style!r}; expected one of {FAMILY_STYLES}")


def _validate(spec: InterlaceSpec, cfg: ToleranceConfig) -> np.ndarray:
    n, p = spec.N, spec.p
    if p <= 1 or n % p:
        raise InvalidArgumentError(f"p={p} must be a divisor of N={n} greater than 1")
    M = n // p
    if M > p:
        raise DimensionalConstraintError(f"N={n} > p**2={p * p}: no {M} orthogonal vectors in C^{p}")
    h = np.array([as_vector(v) for v in spec.family])
    if h.shape != (M, p):
        raise InvalidDimensionError(f"family must be {M} vectors of length {p}, got shape {h.shape}")
    gram = h.conj() @ h.T
    if np.any(np.abs(np.diag(gram)) <= cfg.zero_tol):
        raise ContractViolationError("family contains a zero vector")
    off = gram - np.diag(np.diag(gram))
    if np.any(np.abs(off) > cfg.zero_tol):
        raise ContractViolationError("family is not mutually orthogonal")
    return h


def interlace_window(spec: InterlaceSpec, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Window with ``g[k + l*M] = h_k[l]``."""
    h = _validate(spec, cfg)
    # g reshaped to (p, M) has row l = (h_0[l], ..., h_{M-1}[l])
    return h.T.reshape(-1).copy()


def interlaced_window(n: int, p: int, style: str = "fourier", cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    if p <= 1 or n % p:
        raise InvalidArgumentError(f"p={p} must be a divisor of N={n} greater than 1")
    family = default_orthogonal_family(n // p, p, style)
    return interlace_window(InterlaceSpec(n, p, tuple(family)), cfg)


def interlace_is_diagonal(n: int, p: int, r: int) -> bool:
    """Diagonality prediction for interlaced windows: ``gcd(p, N/r) == 1``."""
    if p <= 1 or n % p or r < 1 or n % r:
        raise InvalidArgumentError(f"need p | N, r | N and p > 1 (N={n}, p={p}, r={r})")
    return math.gcd(p, n // r) == 1


def _sampling_diagonal(v: np.ndarray, shifts, n: int) -> np.ndarray:
    mag = np.abs(v) ** 2
    return n * sum(np.roll(mag, s) for s in canonical_residues(shifts, n))


def full_modulation_frame_check(g, K, cfg: ToleranceConfig = DEFAULT_TOL) -> SamplingCheck:
    """Diagonal ``N * sum_{k in K} |g[i-k]|**2`` of the frame operator when L = Z_N."""
    g = as_vector(g)
    diag = _sampling_diagonal(g, K, g.size)
    return SamplingCheck(bool(np.all(diag > cfg.zero_tol)), diag)


def full_translation_frame_check(g, L, cfg: ToleranceConfig = DEFAULT_TOL) -> SamplingCheck:
    """Eigenvalues ``N * sum_{l in L} |ghat[j-l]|**2`` of the frame operator when K = Z_N."""
    g = as_vector(g)
    diag = _sampling_diagonal(dft(g), L, g.size)
    return SamplingCheck(bool(np.all(diag > cfg.zero_tol)), diag)
