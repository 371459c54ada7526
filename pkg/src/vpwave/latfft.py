"""Discrete Fourier transform with respect to a regular integer matrix.

A coefficient vector lives on the pattern ``P(M)`` and its transform on
the generating set ``G(M^T)``, both in the canonical Smith-digit order
of :mod:`vpwave.intlat`.  The forward transform is

    a_hat[h] = sum_{y in P(M)} a[y] * exp(-2 pi i h.y),

the unitary Fourier matrix carries an extra ``1/sqrt(m)``.

Two implementations are provided: a naive summation with exact integer
phase arithmetic (the oracle) and an O(m log m) route that reduces the
pattern group to ``Z_{s_1} x ... x Z_{s_d}`` via the Smith normal form
and runs per-axis cyclic FFTs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import IndexMismatch, MatrixMismatch, TooLarge
from .intlat import IntMat, generating_set, pattern, smith_normal_form

FOURIER_MATRIX_GUARD = 2 ** 16
_NAIVE_BLOCK = 256


@dataclass(frozen=True)
class PatternVector:
    """Complex values indexed by ``P(M)`` in canonical order."""

    matrix: IntMat
    values: np.ndarray = field(compare=False)
    variant: str = "S"

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (self.matrix.absdet,):
            raise IndexMismatch(
                f"expected {self.matrix.absdet} pattern values, got shape {vals.shape}"
            )
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def pattern(self):
        return pattern(self.matrix, self.variant)


@dataclass(frozen=True)
class SpectrumVector:
    """Complex values indexed by ``G(M^T)`` in canonical order."""

    matrix: IntMat
    values: np.ndarray = field(compare=False)
    variant: str = "S"

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (self.matrix.absdet,):
            raise IndexMismatch(
                f"expected {self.matrix.absdet} spectrum values, got shape {vals.shape}"
            )
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def frequencies(self):
        return generating_set(self.matrix.T, self.variant)


def _require_same_basis(x, y):
    if x.matrix != y.matrix or x.variant != y.variant:
        raise MatrixMismatch("vectors indexed by different lattices")


@lru_cache(maxsize=None)
def _phase_table(M: IntMat, variant: str) -> tuple[np.ndarray, int]:
    """Integer matrix R and modulus q with h_i . y_j = R[i, j] / q  (mod 1)."""
    adj, det = M.scaled_adjugate()
    sign = 1 if det > 0 else -1
    q = abs(det)
    A = sign * np.array(adj, dtype=object)
    H = np.array(generating_set(M.T, variant).reps, dtype=object)
    G = np.array(generating_set(M, variant).reps, dtype=object)
    R = (H @ A @ G.T) % q
    return R.astype(np.int64), q


def fourier_matrix(M: IntMat, variant: str = "S") -> np.ndarray:
    """Dense unitary Fourier matrix of ``M``; rows over ``G(M^T)``,
    columns over ``P(M)``."""
    m = M.require_regular().absdet
    if m > FOURIER_MATRIX_GUARD:
        raise TooLarge(f"refusing to materialize a {m}x{m} Fourier matrix")
    R, q = _phase_table(M, variant)
    return np.exp((-2j * np.pi / q) * R) / np.sqrt(m)


def dft(a: PatternVector) -> SpectrumVector:
    """Naive transform by direct summation with exact rational phases."""
    M = a.matrix
    R, q = _phase_table(M, a.variant)
    m = len(a)
    out = np.empty(m, dtype=complex)
    for start in range(0, m, _NAIVE_BLOCK):
        block = R[start:start + _NAIVE_BLOCK]
        out[start:start + _NAIVE_BLOCK] = np.exp((-2j * np.pi / q) * block) @ a.values
    return SpectrumVector(matrix=M, values=out, variant=a.variant)


@lru_cache(maxsize=None)
def _fast_plan(M: IntMat, variant: str):
    """Digit shape and the position of each canonical frequency inside the
    Smith-digit FFT cube."""
    dec = smith_normal_form(M)
    shape = dec.diagonal
    d = M.dim
    # integer inverse of the unimodular V, then transpose
    vinv = dec.V.inverse()
    VinvT = tuple(tuple(int(vinv[i][j]) for i in range(d)) for j in range(d))
    reps = generating_set(M.T, variant).reps
    flat = np.empty(len(reps), dtype=np.intp)
    for i, h in enumerate(reps):
        u = tuple(
            sum(VinvT[r][c] * h[c] for c in range(d)) % shape[r] for r in range(d)
        )
        flat[i] = np.ravel_multi_index(u, shape)
    return shape, flat


def dft_fast(a: PatternVector) -> SpectrumVector:
    """Fast transform: per-axis cyclic FFTs in Smith-digit coordinates."""
    M = a.matrix
    shape, flat = _fast_plan(M, a.variant)
    cube = np.fft.fftn(a.values.reshape(shape))
    return SpectrumVector(matrix=M, values=cube.reshape(-1)[flat], variant=a.variant)


def idft(ahat: SpectrumVector) -> PatternVector:
    """Inverse transform, ``a[y] = (1/m) sum_h ahat[h] exp(2 pi i h.y)``."""
    M = ahat.matrix
    shape, flat = _fast_plan(M, ahat.variant)
    cube = np.zeros(np.prod(shape), dtype=complex)
    cube[flat] = ahat.values
    vals = np.fft.ifftn(cube.reshape(shape)).reshape(-1)
    return PatternVector(matrix=M, values=vals, variant=ahat.variant)


def idft_naive(ahat: SpectrumVector) -> PatternVector:
    """Inverse by conjugate summation; oracle for :func:`idft`."""
    M = ahat.matrix
    R, q = _phase_table(M, ahat.variant)
    m = len(ahat)
    out = np.empty(m, dtype=complex)
    for start in range(0, m, _NAIVE_BLOCK):
        block = R[:, start:start + _NAIVE_BLOCK]
        out[start:start + _NAIVE_BLOCK] = ahat.values @ np.exp((2j * np.pi / q) * block) / m
    return PatternVector(matrix=M, values=out, variant=ahat.variant)
