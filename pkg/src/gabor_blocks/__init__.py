"""Finite Gabor frames whose frame operators block-diagonalize by explicit unitaries."""
from .blockdiag import (
    BlockDiagonalization,
    TransformDescriptor,
    block_equivalence_route,
    block_fourier_blockdiag,
    gcd_block_count,
    invert_blockdiag,
    permutation_blockdiag,
)
from .core import (
    FrameVerdict,
    GaborSystem,
    PrecheckVerdict,
    fourier_dual,
    frame_bounds,
    frame_operator_bruteforce,
    support_frame_precheck,
    synthesize,
    time_frequency_shift,
)
from .numerics import ToleranceConfig
from .reconstruct import ReconstructionPlan, build_plan, canonical_dual, reconstruct, reconstruct_dense_oracle
from .structure import frame_operator_factored, modulation_matrix, translation_matrix

__version__ = "0.1.0"
