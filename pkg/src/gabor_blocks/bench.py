"""Wall-clock comparison of blockwise plan application against a dense solve."""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .core import GaborSystem, synthesis_matrix
from .errors import GaborError
from .numerics import DEFAULT_TOL, ToleranceConfig
from .reconstruct import build_plan, reconstruct
from .structure import cyclic_subgroup

BENCH_ROUTES = ("permutation", "block-fourier", "dense")
CSV_COLUMNS = (
    "N", "route", "L_size", "K_size", "ell", "max_block",
    "plan_build_s", "reconstruct_s", "dense_s", "speedup", "residual", "status",
)


@dataclass
class BenchRow:
    N: int
    route: str
    L_size: int = 0
    K_size: int = 0
    ell: int = 0
    max_block: int = 0
    plan_build_s: float = float("nan")
    reconstruct_s: float = float("nan")
    dense_s: float = float("nan")
    speedup: float = float("nan")
    residual: float = float("nan")
    status: str = "ok"

    def as_dict(self) -> dict:
        return asdict(self)


def structured_order(n: int) -> Optional[int]:
    """Largest divisor of n in (1, sqrt(n)], or None if n is prime."""
    best = None
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            best = d
    return best


def bench_system(n: int, route: str, rng: np.random.Generator, order: Optional[int] = None) -> GaborSystem:
    """A random frame-sized system carrying the structure ``route`` exploits.

    The structured set is the subgroup of the given order; the other set is
    random with enough elements for each block to have full rank generically.
    """
    g = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    if route == "dense":
        L = rng.choice(n, size=max(1, math.isqrt(n)), replace=False)
        K = rng.choice(n, size=min(n, 2 * math.isqrt(n)), replace=False)
        return GaborSystem(g, L, K)
    order = order or structured_order(n)
    if order is None:
        raise GaborError(f"N={n} has no nontrivial proper divisor")
    other = rng.choice(n, size=min(n, 2 * (n // order)), replace=False)
    if route == "permutation":
        return GaborSystem(g, cyclic_subgroup(n, order), other)
    if route == "block-fourier":
        return GaborSystem(g, other, cyclic_subgroup(n, order))
    raise GaborError(f"unknown bench route {route!r}")


def _best_time(fn, reps: int) -> float:
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run_case(
    n: int,
    route: str,
    reps: int = 3,
    seed: int = 0,
    order: Optional[int] = None,
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> BenchRow:
    row = BenchRow(n, route)
    rng = np.random.default_rng([seed, n, BENCH_ROUTES.index(route) if route in BENCH_ROUTES else 99])
    try:
        sys = bench_system(n, route, rng, order)
    except GaborError as exc:
        row.status = f"skipped: {exc}"
        return row
    row.L_size, row.K_size = len(sys.L), len(sys.K)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)

    t0 = time.perf_counter()
    try:
        plan = build_plan(sys, cfg, route=route)
    except GaborError as exc:
        row.status = f"skipped: {exc}"
        return row
    row.plan_build_s = time.perf_counter() - t0
    row.ell = plan.blockdiag.ell
    row.max_block = max(plan.blockdiag.block_sizes)

    f = synthesis_matrix(sys)
    s = f @ f.conj().T
    fh = f.conj().T

    def dense():
        return np.linalg.solve(s, f @ (fh @ x))

    xr = reconstruct(plan, x)
    row.residual = float(np.linalg.norm(xr - x) / np.linalg.norm(x))
    row.reconstruct_s = _best_time(lambda: reconstruct(plan, x), reps)
    row.dense_s = _best_time(dense, reps)
    row.speedup = row.dense_s / row.reconstruct_s
    return row


def run_bench(sizes, routes=BENCH_ROUTES, reps: int = 3, seed: int = 0, cfg: ToleranceConfig = DEFAULT_TOL) -> list[BenchRow]:
    return [run_case(n, r, reps, seed, cfg=cfg) for n in sizes for r in routes]
