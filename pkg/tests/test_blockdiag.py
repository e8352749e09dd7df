import os

import numpy as np
import pytest

from gabor_blocks.blockdiag import (
    BlockDiagonalization,
    TransformDescriptor,
    block_equivalence_route,
    block_fourier_blockdiag,
    block_threads,
    gcd_block_count,
    invert_blockdiag,
    permutation_blockdiag,
)
from gabor_blocks.core import GaborSystem
from gabor_blocks.errors import (
    ContractViolationError,
    InvalidArgumentError,
    NoBlockStructureError,
    NotAFrameError,
    NotBlockCirculantError,
)
from gabor_blocks.numerics import ToleranceConfig, dft_matrix
from gabor_blocks.structure import DiagonalSupport, frame_operator_factored, translation_matrix

from conftest import random_system, subgroup, subgroups

CFG = ToleranceConfig()


def realized_error(bd, a):
    u = bd.transform.matrix()
    return float(np.max(np.abs(u @ a @ u.conj().T - bd.assemble())))


def assert_spectrum_split(bd, a):
    w = np.sort(np.linalg.eigvalsh(a))
    wb = np.sort(np.concatenate([np.linalg.eigvalsh(b) for b in bd.blocks]))
    assert np.max(np.abs(w - wb)) <= CFG.rel_tol * max(1, np.max(np.abs(w)))


def block_circulant(blocks):
    m, k = len(blocks), blocks[0].shape[0]
    out = np.zeros((m * k, m * k), dtype=complex)
    for a in range(m):
        for b in range(m):
            out[a * k:(a + 1) * k, b * k:(b + 1) * k] = blocks[(a - b) % m]
    return out


def test_gcd_block_count():
    assert gcd_block_count(DiagonalSupport(12, (0,))) == 12
    assert gcd_block_count(DiagonalSupport(12, (0, 3, 6, 9))) == 3
    assert gcd_block_count(DiagonalSupport(12, (0, 1))) == 1
    with pytest.raises(ContractViolationError):
        gcd_block_count(DiagonalSupport(12, (3, 9)))


def test_transform_descriptor_validation():
    with pytest.raises(ContractViolationError):
        TransformDescriptor("permutation", 3, permutation=(0, 0, 1))
    with pytest.raises(ContractViolationError):
        TransformDescriptor("block_fourier", 6, m=4, k=2)


@pytest.mark.parametrize("kind", ["identity", "permutation", "block_fourier"])
def test_transform_apply_matches_matrix(kind, rng):
    n = 12
    if kind == "identity":
        t = TransformDescriptor.identity(n)
    elif kind == "permutation":
        t = TransformDescriptor("permutation", n, permutation=tuple(int(x) for x in rng.permutation(n)))
    else:
        t = TransformDescriptor("block_fourier", n, m=4, k=3)
    u = t.matrix()
    assert np.max(np.abs(u.conj().T @ u - np.eye(n))) <= 1e-12
    x = rng.standard_normal((n, 2)) + 1j * rng.standard_normal((n, 2))
    np.testing.assert_allclose(t.apply(x), u @ x, atol=1e-13)
    np.testing.assert_allclose(t.apply_adjoint(x), u.conj().T @ x, atol=1e-13)


def test_block_fourier_matrix_is_positive_exponent_dft_kron_identity():
    t = TransformDescriptor("block_fourier", 6, m=3, k=2)
    expected = np.kron(dft_matrix(3).conj(), np.eye(2))
    np.testing.assert_allclose(t.matrix(), expected, atol=1e-15)


def test_permutation_blockdiag_diagonal():
    a = np.diag([1.0, 2.0, 3.0, 4.0])
    bd = permutation_blockdiag(a)
    assert bd.ell == 4
    assert [complex(b[0, 0]) for b in bd.blocks] == [1, 2, 3, 4]


def test_permutation_blockdiag_cor_5_1a(rng):
    n, L = 12, [0, 4, 8]
    g = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    sys = GaborSystem(g, L, [0, 1, 5, 7])
    s = frame_operator_factored(sys)
    bd = permutation_blockdiag(s)
    assert bd.ell == 3 and bd.block_sizes == [4, 4, 4]
    t = translation_matrix(n, g, sys.K)
    r = 3
    for s_idx, b in enumerate(bd.blocks):
        for i in range(4):
            for j in range(4):
                assert abs(b[i, j] - r * t[i * r + s_idx, j * r + s_idx]) <= 1e-12
    assert realized_error(bd, s) <= 1e-12


def test_permutation_blockdiag_random_sparse(rng):
    n = 8
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    a = a + a.conj().T
    for i in range(n):
        for j in range(n):
            if (j - i) % n not in (0, 2, 6):
                a[i, j] = 0
    bd = permutation_blockdiag(a)
    assert bd.ell == 2 and bd.block_sizes == [4, 4]
    assert realized_error(bd, a) <= 1e-12
    assert np.max(np.abs(bd.reassemble() - a)) <= 1e-12
    assert_spectrum_split(bd, a)


def test_permutation_blockdiag_no_structure(rng):
    a = rng.standard_normal((6, 6))
    with pytest.raises(NoBlockStructureError):
        permutation_blockdiag(a)
    with pytest.raises(NoBlockStructureError):
        permutation_blockdiag(np.eye(6), ell=4)


def test_block_fourier_m2():
    b0 = np.array([[2.0, 1j], [-1j, 3.0]])
    b1 = np.array([[0.5, 0.25], [0.25, 0.5]])
    a = block_circulant([b0, b1])
    bd = block_fourier_blockdiag(a, 2, 2)
    np.testing.assert_allclose(bd.blocks[0], b0 + b1, atol=1e-15)
    np.testing.assert_allclose(bd.blocks[1], b0 - b1, atol=1e-15)
    assert realized_error(bd, a) <= 1e-12


def test_block_fourier_scalar_circulant_kron_identity(rng):
    n, k = 5, 3
    c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    circ = np.array([[c[(i - j) % n] for j in range(n)] for i in range(n)])
    a = np.kron(circ, np.eye(k))
    bd = block_fourier_blockdiag(a, n, k)
    zeta = np.exp(2j * np.pi / n)
    for l, b in enumerate(bd.blocks):
        lam = sum(c[j] * zeta ** (j * l) for j in range(n))
        np.testing.assert_allclose(b, lam * np.eye(k), atol=1e-12)


def test_block_fourier_on_translation_subgroup(rng):
    n, p = 12, 3
    sys = random_system(rng, n, K=subgroup(n, p))
    s = frame_operator_factored(sys)
    bd = block_fourier_blockdiag(s, p, n // p)
    assert bd.ell == 3 and bd.block_sizes == [4, 4, 4]
    assert realized_error(bd, s) <= 1e-12
    assert_spectrum_split(bd, s)


def test_block_fourier_matches_first_block_row_formula(rng):
    # B_s = sum_m A_m exp(-2 pi i s m / p), with A_m the blocks of the first block-row
    n, p = 12, 4
    sys = random_system(rng, n, K=subgroup(n, p))
    s = frame_operator_factored(sys)
    k = n // p
    bd = block_fourier_blockdiag(s, p, k)
    row = [s[:k, m * k:(m + 1) * k] for m in range(p)]
    for idx, b in enumerate(bd.blocks):
        expected = sum(row[m] * np.exp(-2j * np.pi * idx * m / p) for m in range(p))
        assert np.max(np.abs(b - expected)) <= 1e-12


def test_block_fourier_rejects_unstructured(rng):
    with pytest.raises(NotBlockCirculantError):
        block_fourier_blockdiag(rng.standard_normal((6, 6)), 2, 3)
    with pytest.raises(InvalidArgumentError):
        block_fourier_blockdiag(np.eye(6), 4, 2)


def test_route_full_modulations(rng):
    sys = random_system(rng, 4, L=range(4))
    bd = block_equivalence_route(sys)
    assert bd.transform.kind == "identity" and bd.ell == 4
    g = sys.g
    for i, b in enumerate(bd.blocks):
        expected = 4 * sum(abs(g[(i - k) % 4]) ** 2 for k in sys.K)
        assert abs(b[0, 0] - expected) <= 1e-12


def test_route_modulation_subgroup(rng):
    sys = random_system(rng, 4, L=[0, 2], K=[0])
    bd = block_equivalence_route(sys)
    assert bd.transform.kind == "permutation" and bd.block_sizes == [2, 2]
    assert realized_error(bd, frame_operator_factored(sys)) <= 1e-12


def test_route_translation_subgroup(rng):
    sys = random_system(rng, 6, L=[0, 1], K=[0, 3])
    bd = block_equivalence_route(sys)
    assert bd.transform.kind == "block_fourier"
    assert (bd.transform.m, bd.transform.k) == (2, 3) and bd.block_sizes == [3, 3]
    s = frame_operator_factored(sys)
    assert realized_error(bd, s) <= 1e-12
    assert_spectrum_split(bd, s)


def test_route_fallback(rng):
    # neither set is a subgroup; measured support may still split, or give one block
    sys = random_system(rng, 7, L=[0, 1, 3], K=[0, 2])
    bd = block_equivalence_route(sys)
    assert bd.ell == 1 and bd.transform.kind == "identity"
    np.testing.assert_allclose(bd.blocks[0], frame_operator_factored(sys))
    # interlaced-style sparse window: support on even diagonals only
    g = np.zeros(8, dtype=complex)
    g[[0, 2]] = [1, 2j]
    sys = GaborSystem(g, [0, 1, 3], [0, 2, 6])
    bd = block_equivalence_route(sys)
    assert bd.ell == 2
    assert realized_error(bd, frame_operator_factored(sys)) <= 1e-12


def test_route_overrides(rng):
    sys = random_system(rng, 12, L=subgroup(12, 3), K=subgroup(12, 4))
    assert block_equivalence_route(sys).transform.kind == "permutation"
    bd = block_equivalence_route(sys, route="block-fourier")
    assert bd.transform.kind == "block_fourier" and bd.ell == 4
    bd = block_equivalence_route(sys, route="dense")
    assert bd.ell == 1
    with pytest.raises(InvalidArgumentError):
        block_equivalence_route(random_system(rng, 7, K=[0, 1]), route="block-fourier")
    with pytest.raises(InvalidArgumentError):
        block_equivalence_route(sys, route="magic")


def test_route_invariants_randomized(rng):
    for _ in range(60):
        n = int(rng.choice([4, 6, 8, 9, 10, 12, 16]))
        choice = rng.integers(3)
        L = subgroups(n)[int(rng.integers(len(subgroups(n))))] if choice == 0 else None
        K = subgroups(n)[int(rng.integers(len(subgroups(n))))] if choice == 1 else None
        sys = random_system(rng, n, L=L, K=K)
        s = frame_operator_factored(sys)
        bd = block_equivalence_route(sys)
        assert sum(bd.block_sizes) == n
        assert realized_error(bd, s) <= 1e-10
        assert_spectrum_split(bd, s)


def test_invert_blockdiag_trivial():
    t = TransformDescriptor.identity(4)
    bd = BlockDiagonalization(t, (2 * np.eye(2), 2 * np.eye(2)))
    inv = invert_blockdiag(bd)
    for b in inv.blocks:
        np.testing.assert_allclose(b, 0.5 * np.eye(2))
    bd = BlockDiagonalization(t, tuple(np.array([[v]]) for v in (1.0, 2.0, 4.0, 8.0)))
    assert [complex(b[0, 0]) for b in invert_blockdiag(bd).blocks] == [1, 0.5, 0.25, 0.125]


def test_invert_blockdiag_random_pd(rng):
    n = 12
    sys = random_system(rng, n, L=subgroup(n, 3), K=random_k(rng, n))
    s = frame_operator_factored(sys)
    bd = block_equivalence_route(sys)
    assert bd.ell == 3
    inv = invert_blockdiag(bd)
    assert inv.transform == bd.transform
    s_inv = inv.reassemble()
    assert np.max(np.abs(s @ s_inv - np.eye(n))) <= 1e-10


def random_k(rng, n):
    return [int(x) for x in rng.choice(n, size=n // 2 + 2, replace=False)]


def test_invert_blockdiag_reports_singular_block():
    t = TransformDescriptor.identity(3)
    bd = BlockDiagonalization(t, (np.eye(1), np.zeros((1, 1)), np.eye(1)))
    with pytest.raises(NotAFrameError) as exc:
        invert_blockdiag(bd)
    assert exc.value.block == 1


def test_invert_blockdiag_threaded_matches_serial(rng, monkeypatch):
    n = 24
    sys = random_system(rng, n, L=subgroup(n, 4), K=random_k(rng, n))
    bd = block_equivalence_route(sys)
    serial = invert_blockdiag(bd, threads=1)
    monkeypatch.setenv("GABOR_BLOCKS_THREADS", "0")
    assert block_threads() == (os.cpu_count() or 1)
    threaded = invert_blockdiag(bd)
    for a, b in zip(serial.blocks, threaded.blocks):
        np.testing.assert_allclose(a, b)
    monkeypatch.setenv("GABOR_BLOCKS_THREADS", "3")
    assert block_threads() == 3


def test_frame_iff_inversion_succeeds(rng):
    for _ in range(40):
        n = int(rng.choice([4, 6, 8, 12]))
        L = subgroups(n)[int(rng.integers(1, len(subgroups(n))))]
        K = [int(x) for x in rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False)]
        sys = random_system(rng, n, L=L, K=K)
        s = frame_operator_factored(sys)
        dense_ok = np.linalg.eigvalsh(s)[0] > CFG.zero_tol
        try:
            invert_blockdiag(block_equivalence_route(sys))
            ok = True
        except NotAFrameError:
            ok = False
        assert ok == dense_ok
