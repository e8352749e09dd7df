"""Canonical duals and blockwise reconstruction in the transformed domain.

A plan is built once per system: it stores the transformed synthesis matrix
``U F`` and the inverted blocks of ``U S U*``. Reconstructing a signal then
costs two products with ``U F`` plus block-sized matrix-vector products,
and never touches a dense N x N inverse.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .blockdiag import BlockDiagonalization, block_equivalence_route, invert_blockdiag
from .core import GaborSystem, frame_bounds, frame_operator_bruteforce, synthesis_matrix
from .errors import InvalidDimensionError, NotAFrameError, NotInvertibleError
from .numerics import DEFAULT_TOL, ToleranceConfig, as_vector, solve_hermitian


def canonical_dual(sys: GaborSystem, cfg: ToleranceConfig = DEFAULT_TOL) -> list[np.ndarray]:
    """``S^-1 f_i`` for every system vector, in enumeration order."""
    s = frame_operator_bruteforce(sys)
    if not frame_bounds(s, cfg).is_frame:
        raise NotAFrameError("frame operator is singular")
    w, v = np.linalg.eigh(s)
    f = synthesis_matrix(sys)
    duals = v @ ((v.conj().T @ f) / w[:, None])
    return [duals[:, i].copy() for i in range(duals.shape[1])]


@dataclass(frozen=True)
class ReconstructionPlan:
    system: GaborSystem
    blockdiag: BlockDiagonalization
    inverse_blocks: BlockDiagonalization
    transformed_frame: np.ndarray  # columns U f_i, enumeration order

    @property
    def transform(self):
        return self.blockdiag.transform


def build_plan(
    sys: GaborSystem,
    cfg: ToleranceConfig = DEFAULT_TOL,
    route: str = "auto",
    threads: Optional[int] = None,
) -> ReconstructionPlan:
    bd = block_equivalence_route(sys, cfg, route)
    inverse = invert_blockdiag(bd, cfg, threads)
    uf = bd.transform.apply(synthesis_matrix(sys))
    uf.setflags(write=False)
    return ReconstructionPlan(sys, bd, inverse, uf)


def reconstruct_from_coefficients(plan: ReconstructionPlan, coeffs) -> np.ndarray:
    """``U* B^-1 (U F) c``: the canonical-dual synthesis of frame coefficients."""
    c = np.asarray(coeffs, dtype=complex)
    if c.shape[0] != plan.transformed_frame.shape[1]:
        raise InvalidDimensionError(f"expected {plan.transformed_frame.shape[1]} coefficients, got {c.shape[0]}")
    z = plan.transformed_frame @ c
    return plan.transform.apply_adjoint(plan.inverse_blocks.block_matvec(z))


def reconstruct(plan: ReconstructionPlan, x) -> np.ndarray:
    """Analyse ``x`` against the frame and resynthesize it with the canonical dual.

    Works on ``y = U x``: ``y_hat = sum_i <y, U f_i> B^-1 (U f_i)``, then
    returns ``U* y_hat``. A 2-d ``x`` is treated as a batch of column signals.
    """
    x = np.asarray(x, dtype=complex)
    if x.shape[0] != plan.system.N:
        raise InvalidDimensionError(f"signal length {x.shape[0]} != N={plan.system.N}")
    uf = plan.transformed_frame
    y = plan.transform.apply(x)
    return reconstruct_from_coefficients(plan, uf.conj().T @ y)


def reconstruct_dense_oracle(sys: GaborSystem, x, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """``sum_i <x, f_i> S^-1 f_i`` via one dense Hermitian solve."""
    x = as_vector(x)
    if x.size != sys.N:
        raise InvalidDimensionError(f"signal length {x.size} != N={sys.N}")
    f = synthesis_matrix(sys)
    s = f @ f.conj().T
    try:
        return solve_hermitian(s, f @ (f.conj().T @ x), cfg)
    except NotInvertibleError as exc:
        raise NotAFrameError(str(exc)) from exc
