"""Scaling functions and dyadic wavelets of de la Vallee Poussin type.

A dilation chain ``M_l = J_l ... J_1 M_0`` and an admissible window ``g``
define one trigonometric scaling function per level through its Fourier
coefficients: sample values of a recursively built window product

    profile(level n)   = g
    profile(level l)   = [sum_z g(. + J_{l+1}^T z)] * profile(l+1)(J_{l+1}^{-T} .)

    c_k(phi_l) = profile(l)(M_l^{-T} k) / sqrt(m_l),   k in Z^d.

The translates of ``phi_l`` over the pattern ``P(M_l)`` span nested
spaces; the vector linking consecutive levels is obtained by sampling
the periodization of ``g`` alone.  For dyadic factors (``|det J| = 2``)
the orthogonal complement between consecutive spaces is spanned by the
translates of a single wavelet whose coefficients sample a shifted and
modulated variant of the same product.

Frequency arguments ``M_l^{-T} k`` are computed as exact rationals, so
half-open support boundaries (the Dirichlet window) are decided exactly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Sequence

import numpy as np

from . import tol
from .admissible import AdmissibleFn, periodized_sum
from .errors import DegenerateClass, LevelOutOfRange, NotDyadic
from .intlat import ChainSpec, IntMat, generating_set
from .latfft import SpectrumVector

Vec = tuple[int, ...]

DEGENERATE_REL = 1e-18


@dataclass(frozen=True)
class SparseSpectrum:
    """Finite map from integer frequencies to Fourier coefficients."""

    dim: int
    coeffs: dict[Vec, complex]
    all_real: bool = False

    def __len__(self) -> int:
        return len(self.coeffs)

    def support(self) -> set[Vec]:
        return set(self.coeffs)

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Frequencies as an (n, d) int array plus matching coefficients."""
        keys = sorted(self.coeffs)
        K = np.array(keys, dtype=np.int64).reshape(len(keys), self.dim)
        c = np.array([self.coeffs[k] for k in keys], dtype=complex)
        return K, c

    def __getitem__(self, k: Sequence[int]) -> complex:
        return self.coeffs.get(tuple(int(v) for v in k), 0.0)


@dataclass(frozen=True)
class ScalingFunction:
    chain: ChainSpec
    level: int
    g: AdmissibleFn
    spectrum: SparseSpectrum
    normalized: bool = False

    @property
    def matrix(self) -> IntMat:
        return self.chain.matrix(self.level)

    @property
    def size(self) -> int:
        return self.chain.size(self.level)


@dataclass(frozen=True)
class Wavelet:
    chain: ChainSpec
    level: int
    g: AdmissibleFn
    spectrum: SparseSpectrum
    v: tuple[Fraction, ...]
    w: tuple[Fraction, ...]
    normalized: bool = False

    @property
    def matrix(self) -> IntMat:
        return self.chain.matrix(self.level)

    @property
    def size(self) -> int:
        return self.chain.size(self.level)


@dataclass(frozen=True)
class TwoScaleCoeffs:
    """Coefficients linking a level-l function to the level-(l+1) scaling
    basis, one value per frequency class of ``G(M_{l+1}^T)``."""

    chain: ChainSpec
    level: int
    kind: str  # "scaling" or "wavelet"
    values: SpectrumVector
    normalized: bool = False


def _check_level(chain: ChainSpec, level: int, *, top: int) -> None:
    if not 0 <= level <= top:
        raise LevelOutOfRange(f"level {level} outside 0..{top}")


def _require_dyadic_factor(J: IntMat) -> IntMat:
    if J.absdet != 2:
        raise NotDyadic(f"factor {J} has |det| = {J.absdet}, need 2")
    return J


def periodized_product(g: AdmissibleFn, J: IntMat, f2, x: Sequence):
    """``[sum_z g(x + J^T z)] * f2(J^{-T} x)`` -- one refinement step."""
    first = periodized_sum(g, J, x)
    if first == 0:
        return 0
    return first * f2(J.inv_T_apply(x) if _is_exact(x) else
                      tuple(float(v) for v in J.inv_T_apply(x)))


def _is_exact(x: Sequence) -> bool:
    return all(isinstance(v, (Fraction, int)) for v in x)


def scaling_profile(chain: ChainSpec, level: int, g: AdmissibleFn, x: Sequence):
    """The window product whose samples are the level-``level`` scaling
    coefficients; exact on Fraction input."""
    n = chain.n_levels
    _check_level(chain, level, top=n)
    exact = _is_exact(x)
    cur = tuple(Fraction(v) for v in x) if exact else tuple(float(v) for v in x)
    val = 1
    for j in range(level, n):
        J = chain.factors[j]
        first = periodized_sum(g, J, cur)
        if first == 0:
            return 0
        val = val * first
        cur = J.inv_T_apply(cur)
        if not exact:
            cur = tuple(float(v) for v in cur)
    return val * g(cur)


def wavelet_shift_vectors(J: IntMat) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """The unique nonzero points of ``P_I(J^T)`` and ``P_I(J)`` of a
    determinant-2 factor."""
    _require_dyadic_factor(J)
    from .intlat import pattern

    v = next(p for p in pattern(J.T, "I").points if any(c != 0 for c in p))
    w = next(p for p in pattern(J, "I").points if any(c != 0 for c in p))
    return v, w


def _wavelet_frequency_shift(J: IntMat) -> Vec:
    """Integer congruence representative ``J^T v`` pairing the two
    frequency classes that a dyadic factor splits."""
    v, _ = wavelet_shift_vectors(J)
    gt = J.apply_T(v)
    out = tuple(int(c) for c in gt)
    assert all(Fraction(o) == c for o, c in zip(out, gt))
    return out


def wavelet_profile(chain: ChainSpec, level: int, g: AdmissibleFn, x: Sequence) -> complex:
    """Shifted and modulated window product sampled by the wavelet
    coefficients.  The window is translated by the integer class
    representative ``J^T v`` (the pattern point ``v`` itself would pair
    wrong frequency classes and break orthogonality of the complement)."""
    n = chain.n_levels
    if not 0 <= level < n:
        raise LevelOutOfRange(f"wavelet level {level} outside 0..{n - 1}")
    J = _require_dyadic_factor(chain.factors[level])
    _, w = wavelet_shift_vectors(J)
    gt = _wavelet_frequency_shift(J)
    exact = _is_exact(x)
    xv = tuple(Fraction(v) for v in x) if exact else tuple(float(v) for v in x)
    shifted = tuple(a - b for a, b in zip(xv, gt))
    first = periodized_sum(g, J, shifted)
    if first == 0:
        return 0j
    rest = scaling_profile(chain, level + 1, g, J.inv_T_apply(xv) if exact else
                           tuple(float(v) for v in J.inv_T_apply(xv)))
    if rest == 0:
        return 0j
    phase = cmath.exp(-2j * math.pi * float(_dot_mod1(xv, w)))
    return phase * float(first) * float(rest) if exact else phase * first * rest


def _dot_mod1(x: Sequence, y: Sequence):
    if _is_exact(x):
        r = sum(Fraction(a) * b for a, b in zip(x, y))
        return r - (r.numerator // r.denominator)
    return float(sum(float(a) * float(b) for a, b in zip(x, y))) % 1.0


@lru_cache(maxsize=None)
def _profile_box(chain: ChainSpec, level: int, g: AdmissibleFn) -> tuple[Fraction, ...]:
    """Per-axis halfwidths of a box containing the level profile support."""
    hw = list(g.support_halfwidths)
    for j in range(chain.n_levels - 1, level - 1, -1):
        JT = chain.factors[j].T
        hw = [sum(abs(JT.entries[i][k]) * hw[k] for k in range(len(hw)))
              for i in range(len(hw))]
    return tuple(hw)


def _frequency_candidates(M: IntMat, hw: Sequence[Fraction]):
    """Integer points of the bounding box of ``M^T [-hw, hw]``."""
    d = M.dim
    bounds = []
    for i in range(d):
        b = sum(abs(M.entries[j][i]) * hw[j] for j in range(d))
        bounds.append(int(math.floor(b)))
    return product(*(range(-b, b + 1) for b in bounds))


@lru_cache(maxsize=None)
def scaling_spectrum(chain: ChainSpec, level: int, g: AdmissibleFn) -> ScalingFunction:
    """Fourier coefficients of the level-``level`` scaling function."""
    n = chain.n_levels
    _check_level(chain, level, top=n)
    M = chain.matrix(level)
    root = math.sqrt(chain.size(level))
    hw = _profile_box(chain, level, g)
    coeffs: dict[Vec, complex] = {}
    for k in _frequency_candidates(M, hw):
        x = M.inv_T_apply(k)
        val = scaling_profile(chain, level, g, x)
        if val != 0:
            c = float(val) / root
            if abs(c) > tol.ZERO_TRIM:
                coeffs[k] = c
    return ScalingFunction(chain=chain, level=level, g=g,
                           spectrum=SparseSpectrum(dim=M.dim, coeffs=coeffs, all_real=True))


@lru_cache(maxsize=None)
def wavelet_spectrum(chain: ChainSpec, level: int, g: AdmissibleFn) -> Wavelet:
    """Fourier coefficients of the level-``level`` wavelet (dyadic factor)."""
    n = chain.n_levels
    if not 0 <= level < n:
        raise LevelOutOfRange(f"wavelet level {level} outside 0..{n - 1}")
    J = _require_dyadic_factor(chain.factors[level])
    M = chain.matrix(level)
    root = math.sqrt(chain.size(level))
    v, w = wavelet_shift_vectors(J)
    gt = _wavelet_frequency_shift(J)
    hw = _profile_box(chain, level, g)
    coeffs: dict[Vec, complex] = {}
    for k in _frequency_candidates(M, hw):
        x = M.inv_T_apply(k)
        shifted = tuple(a - b for a, b in zip(x, gt))
        first = periodized_sum(g, J, shifted)
        if first == 0:
            continue
        rest = scaling_profile(chain, level + 1, g, J.inv_T_apply(x))
        if rest == 0:
            continue
        modulus = float(first * rest) / root
        if abs(modulus) <= tol.ZERO_TRIM:
            continue
        phase = cmath.exp(-2j * math.pi * float(_dot_mod1(x, w)))
        coeffs[k] = modulus * phase
    return Wavelet(chain=chain, level=level, g=g, v=v, w=w,
                   spectrum=SparseSpectrum(dim=M.dim, coeffs=coeffs, all_real=False))


def two_scale(chain: ChainSpec, level: int, g: AdmissibleFn,
              variant: str = "S") -> TwoScaleCoeffs:
    """Raw two-scale vector: ``sqrt(|det J|) * g^J`` sampled on
    ``M_l^{-T} G(M_{l+1}^T)``."""
    if not 0 <= level < chain.n_levels:
        raise LevelOutOfRange(f"two-scale level {level} outside 0..{chain.n_levels - 1}")
    J = chain.factors[level]
    M = chain.matrix(level)
    gs = generating_set(chain.matrix(level + 1).T, variant)
    root = math.sqrt(J.absdet)
    vals = np.empty(len(gs), dtype=complex)
    for i, h in enumerate(gs.reps):
        vals[i] = root * float(periodized_sum(g, J, M.inv_T_apply(h)))
    return TwoScaleCoeffs(chain=chain, level=level, kind="scaling",
                          values=SpectrumVector(matrix=chain.matrix(level + 1),
                                                values=vals, variant=variant))


def wavelet_two_scale(chain: ChainSpec, level: int, g: AdmissibleFn,
                      variant: str = "S") -> TwoScaleCoeffs:
    """Raw wavelet two-scale vector over ``G(M_{l+1}^T)``."""
    if not 0 <= level < chain.n_levels:
        raise LevelOutOfRange(f"two-scale level {level} outside 0..{chain.n_levels - 1}")
    J = _require_dyadic_factor(chain.factors[level])
    M = chain.matrix(level)
    _, w = wavelet_shift_vectors(J)
    gt = _wavelet_frequency_shift(J)
    gs = generating_set(chain.matrix(level + 1).T, variant)
    root = math.sqrt(2.0)
    Minv = M.inverse()
    vals = np.empty(len(gs), dtype=complex)
    for i, h in enumerate(gs.reps):
        x = M.inv_T_apply(h)
        shifted = tuple(a - b for a, b in zip(x, gt))
        modulus = root * float(periodized_sum(g, J, shifted))
        r = sum(Fraction(h[a]) * sum(Minv[a][b] * w[b] for b in range(M.dim))
                for a in range(M.dim))
        vals[i] = modulus * cmath.exp(-2j * math.pi * float(r - (r.numerator // r.denominator)))
    return TwoScaleCoeffs(chain=chain, level=level, kind="wavelet",
                          values=SpectrumVector(matrix=chain.matrix(level + 1),
                                                values=vals, variant=variant))


def complement_phases(chain: ChainSpec, level: int, variant: str = "S") -> np.ndarray:
    """Unit phases ``exp(-2 pi i h . M_l^{-1} w)`` over ``G(M_{l+1}^T)``;
    they flip sign between the two classes each dyadic factor pairs."""
    J = _require_dyadic_factor(chain.factors[level])
    M = chain.matrix(level)
    _, w = wavelet_shift_vectors(J)
    Minv = M.inverse()
    gs = generating_set(chain.matrix(level + 1).T, variant)
    out = np.empty(len(gs), dtype=complex)
    for i, h in enumerate(gs.reps):
        r = sum(Fraction(h[a]) * sum(Minv[a][b] * w[b] for b in range(M.dim))
                for a in range(M.dim))
        out[i] = cmath.exp(-2j * math.pi * float(r - (r.numerator // r.denominator)))
    return out


# -- orthonormalization ------------------------------------------------------


def class_powers(fn: ScalingFunction | Wavelet, variant: str = "S") -> np.ndarray:
    """Per-class sums ``sum_z |c_{h + M_l^T z}|^2`` over ``G(M_l^T)``."""
    gs = generating_set(fn.matrix.T, variant)
    powers = np.zeros(len(gs))
    for k, c in fn.spectrum.coeffs.items():
        powers[gs.index_of(k)] += abs(c) ** 2
    return powers


def orthonormalize(fn: ScalingFunction | Wavelet, variant: str = "S"):
    """Scale each frequency class so the translates over ``P(M_l)`` become
    orthonormal: ``m_l * sum_z |c|^2 = 1`` per class afterwards."""
    powers = class_powers(fn, variant)
    peak = float(np.max(powers)) if len(powers) else 0.0
    if peak <= 0.0 or float(np.min(powers)) <= DEGENERATE_REL * peak:
        raise DegenerateClass("a frequency class carries no coefficient mass")
    m = fn.size
    gs = generating_set(fn.matrix.T, variant)
    scale = 1.0 / np.sqrt(m * powers)
    coeffs = {k: c * scale[gs.index_of(k)] for k, c in fn.spectrum.coeffs.items()}
    spec = SparseSpectrum(dim=fn.spectrum.dim, coeffs=coeffs,
                          all_real=fn.spectrum.all_real)
    return replace(fn, spectrum=spec, normalized=True)


@lru_cache(maxsize=None)
def fiber_partner(chain: ChainSpec, level: int, variant: str = "S") -> np.ndarray:
    """For each class of ``G(M_{l+1}^T)``, the index of the second class a
    dyadic factor merges with it over ``G(M_l^T)``; an involution."""
    J = _require_dyadic_factor(chain.factors[level])
    gt = _wavelet_frequency_shift(J)
    shift = chain.matrix(level).apply_T(gt)
    gs = generating_set(chain.matrix(level + 1).T, variant)
    partner = np.array([gs.index_of(tuple(a + b for a, b in zip(h, shift)))
                        for h in gs.reps])
    assert np.all(partner[partner] == np.arange(len(gs)))
    assert np.all(partner != np.arange(len(gs)))
    return partner


@lru_cache(maxsize=None)
def normalized_filters(chain: ChainSpec, level: int, g: AdmissibleFn,
                       variant: str = "S") -> tuple[TwoScaleCoeffs, TwoScaleCoeffs]:
    """Orthonormal two-scale filter pair of one dyadic refinement step.

    The scaling filter is the raw one rescaled by the class powers of the
    orthonormalized functions on both levels.  The wavelet filter is built
    from it by the complement construction: conjugate the partner-class
    value and apply the sign-flipping unit phases.  Per merged class pair
    both filters have squared norm 2 and are exactly orthogonal, which is
    what makes the decomposition an orthogonal projection.  (Normalizing
    the raw wavelet per class keeps its translates orthonormal but does
    not give the orthogonal complement unless the raw translates already
    were orthonormal, as in the Dirichlet case.)
    """
    a_raw = two_scale(chain, level, g, variant)
    fine = scaling_spectrum(chain, level + 1, g)
    coarse_phi = scaling_spectrum(chain, level, g)
    p_fine = class_powers(fine, variant)
    q_phi = class_powers(coarse_phi, variant)
    for arr, who in ((p_fine, "fine scaling"), (q_phi, "coarse scaling")):
        if float(np.min(arr)) <= DEGENERATE_REL * float(np.max(arr)):
            raise DegenerateClass(f"{who} spectrum has an empty frequency class")
    m_fine = chain.size(level + 1)
    m_coarse = chain.size(level)
    gs_coarse = generating_set(chain.matrix(level).T, variant)
    fine_gs = generating_set(chain.matrix(level + 1).T, variant)
    coarse_of_fine = np.array([gs_coarse.index_of(h) for h in fine_gs.reps])
    a_vals = (a_raw.values.values * np.sqrt(m_fine * p_fine)
              / np.sqrt(m_coarse * q_phi[coarse_of_fine]))
    partner = fiber_partner(chain, level, variant)
    sigma = complement_phases(chain, level, variant)
    b_vals = sigma * np.conj(a_vals[partner])
    mk = chain.matrix(level + 1)
    return (
        TwoScaleCoeffs(chain=chain, level=level, kind="scaling", normalized=True,
                       values=SpectrumVector(matrix=mk, values=a_vals, variant=variant)),
        TwoScaleCoeffs(chain=chain, level=level, kind="wavelet", normalized=True,
                       values=SpectrumVector(matrix=mk, values=b_vals, variant=variant)),
    )


@lru_cache(maxsize=None)
def orthonormal_wavelet(chain: ChainSpec, level: int, g: AdmissibleFn,
                        variant: str = "S") -> Wavelet:
    """The wavelet spanning the orthogonal complement of the level space
    inside the next one, with orthonormal translates: the complement
    filter applied to the orthonormalized next-level scaling function."""
    _, b2 = normalized_filters(chain, level, g, variant)
    fine = orthonormalize(scaling_spectrum(chain, level + 1, g), variant)
    gs = generating_set(chain.matrix(level + 1).T, variant)
    coeffs: dict[Vec, complex] = {}
    for k, c in fine.spectrum.coeffs.items():
        val = b2.values.values[gs.index_of(k)] * c
        if abs(val) > tol.ZERO_TRIM:
            coeffs[k] = val
    v, w = wavelet_shift_vectors(chain.factors[level])
    return Wavelet(chain=chain, level=level, g=g, v=v, w=w, normalized=True,
                   spectrum=SparseSpectrum(dim=chain.dim, coeffs=coeffs, all_real=False))


# -- series evaluation and export ---------------------------------------------


def evaluate_series(s: SparseSpectrum, x: Sequence[float]) -> complex:
    """``sum_k c_k exp(i k . x)`` at a point of the torus ``[0, 2pi)^d``."""
    K, c = s.arrays()
    if len(c) == 0:
        return 0j
    return complex(np.sum(c * np.exp(1j * (K @ np.asarray(x, dtype=float)))))


def write_spectrum_csv(s: SparseSpectrum, path) -> None:
    """CSV export: ``k1,..,kd,re,im``, rows lexicographic in k, 17
    significant digits."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        cols = ",".join(f"k{i + 1}" for i in range(s.dim))
        fh.write(f"{cols},re,im\n")
        for k in sorted(s.coeffs):
            c = s.coeffs[k]
            kpart = ",".join(str(v) for v in k)
            fh.write(f"{kpart},{c.real:.17g},{c.imag:.17g}\n")
