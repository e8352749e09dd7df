"""Explicit unitary block-diagonalization of frame operators.

Two routes are provided. The permutation route regroups indices by residue
class mod ``ell`` whenever every nonzero wrapped diagonal is a multiple of
``ell``; the block Fourier route conjugates a block-circulant matrix by
``F_m (x) I_k``. Neither needs an eigendecomposition.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import reduce
from typing import Optional

import numpy as np

from .core import GaborSystem
from .errors import (
    ContractViolationError,
    InvalidArgumentError,
    InvalidDimensionError,
    NoBlockStructureError,
    NotAFrameError,
    NotBlockCirculantError,
)
from .numerics import DEFAULT_TOL, ToleranceConfig, as_matrix, dft_matrix, roots_of_unity
from .structure import (
    DiagonalSupport,
    detect_subgroup,
    diagonal_support,
    frame_operator_factored,
    is_block_circulant,
)

ROUTES = ("auto", "permutation", "block-fourier", "dense")


@dataclass(frozen=True)
class TransformDescriptor:
    """Cheap description of the unitary ``U`` with ``U A U* = diag(blocks)``.

    ``kind`` is ``"identity"``, ``"permutation"`` (``(U x)[t] = x[permutation[t]]``)
    or ``"block_fourier"`` (``U = F_m (x) I_k`` with
    ``F_m = m**-0.5 * (zeta_m**(+j*l))``).
    """

    kind: str
    n: int
    permutation: Optional[tuple[int, ...]] = None
    m: Optional[int] = None
    k: Optional[int] = None

    def __post_init__(self):
        if self.kind == "permutation":
            if self.permutation is None or sorted(self.permutation) != list(range(self.n)):
                raise ContractViolationError("permutation must be a bijection of range(N)")
        elif self.kind == "block_fourier":
            if self.m is None or self.k is None or self.m * self.k != self.n:
                raise ContractViolationError("block Fourier transform needs m*k == N")
        elif self.kind != "identity":
            raise ValueError(f"unknown transform kind {self.kind!r}")

    @classmethod
    def identity(cls, n: int) -> "TransformDescriptor":
        return cls("identity", n)

    def apply(self, x: np.ndarray) -> np.ndarray:
        """``U @ x`` for a vector or a matrix of column vectors."""
        x = np.asarray(x, dtype=complex)
        if self.kind == "identity":
            return x.copy()
        if self.kind == "permutation":
            return x[list(self.permutation)]
        rest = x.shape[1:]
        xr = x.reshape((self.m, self.k) + rest)
        fm = dft_matrix(self.m).conj()
        return np.tensordot(fm, xr, axes=(1, 0)).reshape(x.shape)

    def apply_adjoint(self, y: np.ndarray) -> np.ndarray:
        """``U* @ y``."""
        y = np.asarray(y, dtype=complex)
        if self.kind == "identity":
            return y.copy()
        if self.kind == "permutation":
            out = np.empty_like(y)
            out[list(self.permutation)] = y
            return out
        rest = y.shape[1:]
        yr = y.reshape((self.m, self.k) + rest)
        return np.tensordot(dft_matrix(self.m), yr, axes=(1, 0)).reshape(y.shape)

    def matrix(self) -> np.ndarray:
        """Dense ``U``. Only meant for verification."""
        return self.apply(np.eye(self.n, dtype=complex))


@dataclass(frozen=True)
class BlockDiagonalization:
    transform: TransformDescriptor
    blocks: tuple[np.ndarray, ...]
    _offsets: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        blocks = tuple(np.asarray(b, dtype=complex) for b in self.blocks)
        for b in blocks:
            if b.ndim != 2 or b.shape[0] != b.shape[1]:
                raise InvalidDimensionError("blocks must be square")
        sizes = [b.shape[0] for b in blocks]
        if sum(sizes) != self.transform.n:
            raise InvalidDimensionError(f"block sizes {sizes} do not add up to N={self.transform.n}")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "_offsets", tuple(np.cumsum([0] + sizes).tolist()))

    @property
    def ell(self) -> int:
        return len(self.blocks)

    @property
    def n(self) -> int:
        return self.transform.n

    @property
    def block_sizes(self) -> list[int]:
        return [b.shape[0] for b in self.blocks]

    def assemble(self) -> np.ndarray:
        """The dense block-diagonal matrix ``diag(blocks)``."""
        out = np.zeros((self.n, self.n), dtype=complex)
        for b, lo, hi in zip(self.blocks, self._offsets, self._offsets[1:]):
            out[lo:hi, lo:hi] = b
        return out

    def reassemble(self) -> np.ndarray:
        """``U* diag(blocks) U``, i.e. the matrix this decomposition represents."""
        u = self.transform.matrix()
        return u.conj().T @ self.assemble() @ u

    def block_matvec(self, y: np.ndarray) -> np.ndarray:
        """``diag(blocks) @ y`` computed block by block (y may carry extra columns)."""
        y = np.asarray(y, dtype=complex)
        out = np.empty_like(y)
        for b, lo, hi in zip(self.blocks, self._offsets, self._offsets[1:]):
            out[lo:hi] = b @ y[lo:hi]
        return out


def block_threads() -> int:
    """Worker count for block-level parallelism from ``GABOR_BLOCKS_THREADS``.

    Unset means serial; ``0`` means one worker per CPU.
    """
    raw = os.environ.get("GABOR_BLOCKS_THREADS")
    if raw is None or raw.strip() == "":
        return 1
    n = int(raw)
    if n < 0:
        raise InvalidArgumentError("GABOR_BLOCKS_THREADS must be >= 0")
    return n or (os.cpu_count() or 1)


def _map_blocks(fn, items, threads: Optional[int]):
    threads = block_threads() if threads is None else threads
    if threads <= 1 or len(items) <= 1:
        return [fn(i, x) for i, x in enumerate(items)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(len(items)), items))


def gcd_block_count(support: DiagonalSupport) -> int:
    if 0 not in support.residues:
        raise ContractViolationError("main diagonal is identically zero")
    return reduce(math.gcd, support.residues, support.N)


def residue_class_permutation(n: int, ell: int) -> tuple[int, ...]:
    """Indices grouped as ``s, s+ell, s+2*ell, ...`` for s = 0..ell-1."""
    return tuple(s + i * ell for s in range(ell) for i in range(n // ell))


def permutation_blockdiag(a, cfg: ToleranceConfig = DEFAULT_TOL, ell: Optional[int] = None) -> BlockDiagonalization:
    """Block-diagonalize ``a`` by regrouping indices mod ``ell``.

    ``ell`` defaults to ``gcd(N, nonzero wrapped diagonals)``. An explicit
    ``ell`` must divide that gcd.
    """
    a = as_matrix(a)
    n = a.shape[0]
    measured = gcd_block_count(diagonal_support(a, cfg))
    if ell is None:
        ell = measured
    elif ell < 1 or n % ell or measured % ell:
        raise NoBlockStructureError(f"support of the matrix is not confined to multiples of {ell}")
    if ell == 1:
        raise NoBlockStructureError("gcd of nonzero diagonals with N is 1")
    perm = residue_class_permutation(n, ell)
    size = n // ell
    blocks = []
    for s in range(ell):
        idx = list(perm[s * size:(s + 1) * size])
        blocks.append(a[np.ix_(idx, idx)])
    return BlockDiagonalization(TransformDescriptor("permutation", n, permutation=perm), tuple(blocks))


def block_circulant_blocks(a, m: int, k: int) -> list[np.ndarray]:
    """First block-column ``B_0..B_{m-1}`` of an mk x mk matrix."""
    a = as_matrix(a)
    return [a[j * k:(j + 1) * k, :k] for j in range(m)]


def block_fourier_blockdiag(a, m: int, k: int, cfg: ToleranceConfig = DEFAULT_TOL) -> BlockDiagonalization:
    """``D_l = sum_j zeta_m**(j*l) B_j`` for a block-circulant matrix with k x k blocks."""
    a = as_matrix(a)
    n = a.shape[0]
    if m < 1 or k < 1 or m * k != n:
        raise InvalidArgumentError(f"m*k = {m}*{k} != N = {n}")
    if not is_block_circulant(a, k, cfg):
        raise NotBlockCirculantError(f"matrix is not block-circulant with {k}x{k} blocks")
    bs = np.stack(block_circulant_blocks(a, m, k))  # m x k x k
    j = np.arange(m)
    w = roots_of_unity(m, np.outer(j, j))  # w[l, j] = zeta_m**(l*j)
    d = np.tensordot(w, bs, axes=(1, 0))
    return BlockDiagonalization(TransformDescriptor("block_fourier", n, m=m, k=k), tuple(d))


def block_equivalence_route(sys: GaborSystem, cfg: ToleranceConfig = DEFAULT_TOL, route: str = "auto") -> BlockDiagonalization:
    """Pick an explicit block-diagonalization of the frame operator of ``sys``.

    ``auto`` tries, in order: full modulations (diagonal, identity transform),
    an L subgroup (permutation), a K subgroup (block Fourier), and finally the
    permutation induced by the measured diagonal support, which may collapse
    to a single dense block.
    """
    if route not in ROUTES:
        raise InvalidArgumentError(f"unknown route {route!r}; expected one of {ROUTES}")
    s = frame_operator_factored(sys)
    n = sys.N
    lsub = detect_subgroup(sys.L, n)
    ksub = detect_subgroup(sys.K, n)

    if route == "dense":
        return BlockDiagonalization(TransformDescriptor.identity(n), (s,))
    if route == "block-fourier":
        if not (ksub.is_subgroup and ksub.order > 1):
            raise InvalidArgumentError("block Fourier route needs K to be a nontrivial subgroup")
        return block_fourier_blockdiag(s, ksub.order, n // ksub.order, cfg)
    if route == "permutation":
        if lsub.is_subgroup and lsub.order > 1:
            return permutation_blockdiag(s, cfg, ell=lsub.order)
        return permutation_blockdiag(s, cfg)

    if len(sys.L) == n:
        return BlockDiagonalization(TransformDescriptor.identity(n), tuple(np.diag(s).reshape(n, 1, 1)))
    if lsub.is_subgroup and lsub.order > 1:
        return permutation_blockdiag(s, cfg, ell=lsub.order)
    if ksub.is_subgroup and ksub.order > 1:
        return block_fourier_blockdiag(s, ksub.order, n // ksub.order, cfg)
    ell = gcd_block_count(diagonal_support(s, cfg))
    if ell > 1:
        return permutation_blockdiag(s, cfg, ell=ell)
    return BlockDiagonalization(TransformDescriptor.identity(n), (s,))


def _min_abs_eigenvalue(b: np.ndarray) -> float:
    if np.allclose(b, b.conj().T, rtol=0, atol=1e-12 * max(1.0, float(np.max(np.abs(b))))):
        return float(np.min(np.abs(np.linalg.eigvalsh(b))))
    return float(np.min(np.abs(np.linalg.eigvals(b))))


def invert_blockdiag(bd: BlockDiagonalization, cfg: ToleranceConfig = DEFAULT_TOL, threads: Optional[int] = None) -> BlockDiagonalization:
    """Invert each block independently; the transform is unchanged."""

    def inv(i, b):
        lam = _min_abs_eigenvalue(b)
        if lam <= cfg.zero_tol:
            raise NotAFrameError(f"block {i} is singular (min |eigenvalue| = {lam:.3e})", block=i)
        return np.linalg.inv(b)

    return BlockDiagonalization(bd.transform, tuple(_map_blocks(inv, list(bd.blocks), threads)))

