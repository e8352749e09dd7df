"""Gabor systems on C^N, their brute-force frame operator and frame bounds."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidDimensionError, InvalidIndexError, InvalidSetError
from .numerics import DEFAULT_TOL, ToleranceConfig, as_vector, dft, hermitian_eigenvalues, roots_of_unity


def canonical_residues(values, n: int) -> tuple[int, ...]:
    """Reduce integers mod ``n`` and return them sorted and deduplicated."""
    return tuple(sorted({int(v) % n for v in values}))


@dataclass(frozen=True, eq=False)
class GaborSystem:
    """The system ``{M_l T_k g : l in L, k in K}`` on C^N.

    ``L`` and ``K`` are canonicalized to sorted residues mod N on
    construction. The window is stored as a read-only copy.
    """

    g: np.ndarray
    L: tuple[int, ...]
    K: tuple[int, ...]

    def __post_init__(self):
        g = as_vector(self.g).copy()
        n = g.size
        if not np.any(g != 0):
            raise InvalidDimensionError("window must not be the zero vector")
        L = canonical_residues(self.L, n)
        K = canonical_residues(self.K, n)
        if not L or not K:
            raise InvalidSetError("modulation and translation sets must be nonempty")
        g.setflags(write=False)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "K", K)

    @property
    def N(self) -> int:
        return self.g.size

    @property
    def size(self) -> int:
        return len(self.L) * len(self.K)

    def index_pairs(self) -> list[tuple[int, int]]:
        """``(l, k)`` pairs in enumeration order: k outer, l inner, both ascending."""
        return [(l, k) for k in self.K for l in self.L]

    def __eq__(self, other):
        if not isinstance(other, GaborSystem):
            return NotImplemented
        return self.L == other.L and self.K == other.K and np.array_equal(self.g, other.g)

    def __hash__(self):
        return hash((self.L, self.K, self.g.tobytes()))

    def __repr__(self):
        return f"GaborSystem(N={self.N}, L={list(self.L)}, K={list(self.K)})"


@dataclass(frozen=True)
class FrameVerdict:
    is_frame: bool
    lower_bound: float
    upper_bound: float


class PrecheckVerdict(str, Enum):
    CANNOT_BE_FRAME = "cannot_be_frame"
    INCONCLUSIVE = "inconclusive"


def time_frequency_shift(g, l: int, k: int) -> np.ndarray:
    """``(M_l T_k g)[j] = zeta_N**(l*j) * g[j-k]``."""
    g = as_vector(g)
    n = g.size
    if not (0 <= l < n and 0 <= k < n):
        raise InvalidIndexError(f"shift indices ({l}, {k}) out of range for N={n}")
    return roots_of_unity(n, l * np.arange(n)) * np.roll(g, k)


def synthesis_matrix(sys: GaborSystem) -> np.ndarray:
    """N x |L||K| matrix whose columns are the system vectors in enumeration order."""
    n = sys.N
    j = np.arange(n)
    mods = roots_of_unity(n, np.outer(j, sys.L))  # N x |L|
    cols = [mods * np.roll(sys.g, k)[:, None] for k in sys.K]
    return np.concatenate(cols, axis=1)


def synthesize(sys: GaborSystem) -> list[np.ndarray]:
    return [time_frequency_shift(sys.g, l, k) for l, k in sys.index_pairs()]


def frame_operator_bruteforce(sys: GaborSystem) -> np.ndarray:
    """``S = F F*`` summed over the explicit list of system vectors."""
    f = np.stack(synthesize(sys), axis=1)
    return f @ f.conj().T


def frame_bounds(s, cfg: ToleranceConfig = DEFAULT_TOL) -> FrameVerdict:
    w = hermitian_eigenvalues(s, cfg)
    lower = max(float(w[0]), 0.0)
    upper = max(float(w[-1]), 0.0)
    return FrameVerdict(is_frame=lower > cfg.zero_tol, lower_bound=lower, upper_bound=upper)


def fourier_dual(sys: GaborSystem) -> GaborSystem:
    """The system ``F_N G`` written as a Gabor system.

    Since ``F_N M_l = T_l F_N`` and ``F_N T_k = M_{-k} F_N``, applying the DFT
    gives window ``dft(g)``, modulations ``-K`` and translations ``L`` (up to
    unimodular phases, which leave the frame operator unchanged).
    """
    n = sys.N
    return GaborSystem(dft(sys.g), [(-k) % n for k in sys.K], sys.L)


def support(v, cfg: ToleranceConfig = DEFAULT_TOL) -> tuple[int, ...]:
    return tuple(int(i) for i in np.flatnonzero(np.abs(v) > cfg.zero_tol))


def support_frame_precheck(sys: GaborSystem, cfg: ToleranceConfig = DEFAULT_TOL) -> PrecheckVerdict:
    """Necessary support condition for a frame.

    Every vector of the system lives on ``supp(g) + K``, so fewer than
    ``N/|K|`` nonzeros in ``g`` (or fewer than ``N/|L|`` in ``dft(g)``) rules
    out spanning C^N.
    """
    n = sys.N
    if len(support(sys.g, cfg)) * len(sys.K) < n:
        return PrecheckVerdict.CANNOT_BE_FRAME
    if len(support(dft(sys.g), cfg)) * len(sys.L) < n:
        return PrecheckVerdict.CANNOT_BE_FRAME
    return PrecheckVerdict.INCONCLUSIVE
