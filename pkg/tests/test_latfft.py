import random

import numpy as np
import pytest

from vpwave.errors import IndexMismatch, TooLarge
from vpwave.intlat import IntMat, generating_set, pattern
from vpwave.latfft import (
    PatternVector,
    SpectrumVector,
    dft,
    dft_fast,
    fourier_matrix,
    idft,
    idft_naive,
)


def random_regular(rng, d, lo=-8, hi=8, max_det=None):
    while True:
        M = IntMat.from_rows([[rng.randint(lo, hi) for _ in range(d)] for _ in range(d)])
        if M.det != 0 and (max_det is None or M.absdet <= max_det):
            return M


def random_pattern_vector(rng_np, M, variant="S"):
    m = M.absdet
    vals = rng_np.standard_normal(m) + 1j * rng_np.standard_normal(m)
    return PatternVector(matrix=M, values=vals, variant=variant)


def test_fourier_matrix_1x1():
    F = fourier_matrix(IntMat.from_rows([[1]]))
    assert F.shape == (1, 1)
    assert F[0, 0] == pytest.approx(1.0)


def test_fourier_matrix_size_two():
    F = fourier_matrix(IntMat.from_rows([[2]]), variant="I")
    expected = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    assert np.max(np.abs(F - expected)) < 1e-15


def test_fourier_matrix_unitary_random():
    rng = random.Random(17)
    for _ in range(25):
        d = rng.choice([1, 2, 3])
        M = random_regular(rng, d, max_det=256)
        F = fourier_matrix(M)
        defect = np.max(np.abs(F @ F.conj().T - np.eye(M.absdet)))
        assert defect < 1e-12


def test_fourier_matrix_guard():
    with pytest.raises(TooLarge):
        fourier_matrix(IntMat.diagonal([2 ** 9, 2 ** 9]))


def test_dft_delta_at_origin():
    M = IntMat.diagonal([2, 2])
    pat = pattern(M)
    a = np.zeros(4)
    a[pat.index_of((0, 0))] = 1.0
    ahat = dft(PatternVector(matrix=M, values=a))
    assert np.max(np.abs(ahat.values - 1.0)) < 1e-14


def test_dft_two_point_example():
    M = IntMat.diagonal([2, 1])
    pat = pattern(M, "I")
    a = np.zeros(2)
    a[pat.index_of((0, 0))] = 1.0
    ahat = dft(PatternVector(matrix=M, values=a, variant="I"))
    assert np.max(np.abs(ahat.values - np.array([1.0, 1.0]))) < 1e-14


def test_dft_constant_vector():
    M = IntMat.from_rows([[3, 1], [1, 2]])
    m = M.absdet
    ahat = dft(PatternVector(matrix=M, values=np.ones(m)))
    gs = generating_set(M.T)
    expected = np.zeros(m)
    expected[gs.index[(0,) * M.dim]] = m
    assert np.max(np.abs(ahat.values - expected)) < 1e-12


def test_dft_matches_fourier_matrix():
    rng = random.Random(3)
    rng_np = np.random.default_rng(3)
    for _ in range(10):
        M = random_regular(rng, 2, max_det=64)
        a = random_pattern_vector(rng_np, M)
        ahat = dft(a)
        direct = np.sqrt(M.absdet) * fourier_matrix(M) @ a.values
        assert np.max(np.abs(ahat.values - direct)) < 1e-12


def test_dft_fast_matches_naive():
    rng = random.Random(41)
    rng_np = np.random.default_rng(41)
    mats = [random_regular(rng, d, max_det=300) for d in (1, 2, 3) for _ in range(8)]
    mats.append(IntMat.from_rows([[16, 0], [12, 8]]))
    for M in mats:
        for variant in ("S", "I"):
            a = random_pattern_vector(rng_np, M, variant)
            err = np.max(np.abs(dft_fast(a).values - dft(a).values))
            assert err < 1e-10, f"{M} variant {variant}: {err}"


def test_dft_fast_linearity():
    rng_np = np.random.default_rng(5)
    M = IntMat.from_rows([[4, 1], [0, 3]])
    a = random_pattern_vector(rng_np, M)
    b = random_pattern_vector(rng_np, M)
    al, be = 1.7 - 0.3j, -0.8 + 2.1j
    combo = PatternVector(matrix=M, values=al * a.values + be * b.values)
    err = np.max(np.abs(dft_fast(combo).values
                        - al * dft_fast(a).values - be * dft_fast(b).values))
    assert err < 1e-10


def test_idft_roundtrip():
    rng = random.Random(8)
    rng_np = np.random.default_rng(8)
    for _ in range(10):
        M = random_regular(rng, 2, lo=-12, hi=12, max_det=4096)
        a = random_pattern_vector(rng_np, M)
        back = idft(dft_fast(a))
        assert np.max(np.abs(back.values - a.values)) < 1e-10


def test_idft_matches_naive_inverse():
    rng_np = np.random.default_rng(12)
    M = IntMat.from_rows([[5, 2], [1, 4]])
    a = random_pattern_vector(rng_np, M)
    ahat = dft(a)
    assert np.max(np.abs(idft(ahat).values - idft_naive(ahat).values)) < 1e-12


def test_idft_delta_spectrum():
    M = IntMat.from_rows([[3, 0], [1, 3]])
    m = M.absdet
    gs = generating_set(M.T)
    vals = np.zeros(m)
    vals[gs.index[(0, 0)]] = 1.0
    a = idft(SpectrumVector(matrix=M, values=vals))
    assert np.max(np.abs(a.values - 1.0 / m)) < 1e-14


def test_parseval():
    rng_np = np.random.default_rng(21)
    M = IntMat.from_rows([[6, 1], [2, 5]])
    a = random_pattern_vector(rng_np, M)
    ahat = dft_fast(a)
    lhs = np.sum(np.abs(a.values) ** 2)
    rhs = np.sum(np.abs(ahat.values) ** 2) / M.absdet
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_shift_modulation_duality():
    rng_np = np.random.default_rng(33)
    M = IntMat.from_rows([[4, 1], [2, 6]])
    pat = pattern(M)
    a = random_pattern_vector(rng_np, M)
    for tau_idx in (1, len(pat) // 2):
        shifted = np.empty_like(a.values)
        for i in range(len(pat)):
            shifted[pat.add(i, tau_idx)] = a.values[i]
        lhs = dft_fast(PatternVector(matrix=M, values=shifted)).values
        tau = np.array([float(v) for v in pat.points[tau_idx]])
        H = np.array(generating_set(M.T).reps, dtype=float)
        rhs = np.exp(-2j * np.pi * (H @ tau)) * dft_fast(a).values
        assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_vector_length_checks():
    M = IntMat.diagonal([2, 2])
    with pytest.raises(IndexMismatch):
        PatternVector(matrix=M, values=np.ones(3))
    with pytest.raises(IndexMismatch):
        SpectrumVector(matrix=M, values=np.ones(5))
