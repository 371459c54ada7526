"""Multiresolution verification: finite, checkable forms of the basis,
nesting and density properties, orthonormality audits, and the support
conditions under which a scaling function stops depending on the tail of
the factor chain.

Density of the union of spaces is asymptotic; only the finite surrogate
(monotone growth of fully covered frequency balls) is reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import tol
from .admissible import AdmissibleFn, periodized_sum_many
from .dlvp import (
    ScalingFunction,
    TwoScaleCoeffs,
    class_powers,
    fiber_partner,
    normalized_filters,
    scaling_spectrum,
    two_scale,
    wavelet_spectrum,
    wavelet_two_scale,
)
from .errors import ConditionViolated, LevelOutOfRange, UnsupportedDimension
from .intlat import (
    ChainSpec,
    IntMat,
    J_D,
    J_X,
    J_Y,
    axis_doubling,
    chain,
    generating_set,
    plane_rotation,
)

GRID_POINTS_PER_AXIS = 512


# -- basis and nesting ---------------------------------------------------------


def basis_check(chn: ChainSpec, level: int, g: AdmissibleFn,
                variant: str = "S") -> tuple[bool, float]:
    """Whether the translates span a space of full dimension ``m_l``:
    every frequency class must carry positive coefficient power.
    Returns the flag and the minimal class power."""
    sf = scaling_spectrum(chn, level, g)
    powers = class_powers(sf, variant)
    peak = float(np.max(powers))
    min_power = float(np.min(powers))
    return min_power > 1e-18 * peak, min_power


def nesting_residual(chn: ChainSpec, level: int, g: AdmissibleFn,
                     variant: str = "S") -> float:
    """Max defect of ``c_k(phi_l) = a_h c_k(phi_{l+1})`` with the
    constructed two-scale vector, over the union of stored supports."""
    if not 0 <= level < chn.n_levels:
        raise LevelOutOfRange(f"level {level} has no next level")
    coarse = scaling_spectrum(chn, level, g)
    fine = scaling_spectrum(chn, level + 1, g)
    a = two_scale(chn, level, g, variant).values.values
    gs = generating_set(chn.matrix(level + 1).T, variant)
    worst = 0.0
    for k in coarse.spectrum.support() | fine.spectrum.support():
        worst = max(worst, abs(coarse.spectrum[k]
                               - a[gs.index_of(k)] * fine.spectrum[k]))
    return worst


def independent_nesting_residual(coarse: ScalingFunction, fine: ScalingFunction,
                                 variant: str = "S") -> float:
    """Nesting defect without a constructed two-scale vector: per class the
    best least-squares multiplier is fitted first.  Zero iff some vector
    links the two spectra, i.e. iff the coarse space embeds in the fine one."""
    M_fine = fine.matrix
    gs = generating_set(M_fine.T, variant)
    num = np.zeros(len(gs), dtype=complex)
    den = np.zeros(len(gs))
    support = coarse.spectrum.support() | fine.spectrum.support()
    classes = {k: gs.index_of(k) for k in support}
    for k, i in classes.items():
        cf = fine.spectrum[k]
        num[i] += coarse.spectrum[k] * np.conj(cf)
        den[i] += abs(cf) ** 2
    best = np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)
    worst = 0.0
    for k, i in classes.items():
        worst = max(worst, abs(coarse.spectrum[k] - best[i] * fine.spectrum[k]))
    return worst


def support_radii(chn: ChainSpec, g: AdmissibleFn) -> list[int]:
    """Per level, the largest ``r`` with the whole sup-norm ball of radius
    ``r`` inside the coefficient support (the finite density surrogate)."""
    out = []
    d = chn.dim
    for level in range(chn.n_levels + 1):
        supp = scaling_spectrum(chn, level, g).spectrum.support()
        r = 0
        while True:
            ball = _ball_points(d, r + 1)
            if all(p in supp for p in ball):
                r += 1
            else:
                break
        out.append(r)
    return out


def _ball_points(d: int, r: int):
    from itertools import product

    return list(product(range(-r, r + 1), repeat=d))


# -- orthonormality audit --------------------------------------------------------


def audit_orthonormality(ts: TwoScaleCoeffs, variant: str = "S") -> float:
    """Max over merged class pairs of ``| |b_h|^2 + |b_h'|^2 - |det J| |``.
    Zero exactly when the translates of the corresponding function are
    orthonormal inside the orthonormal next-level basis."""
    detj = ts.chain.factors[ts.level].absdet
    partner = fiber_partner(ts.chain, ts.level, variant)
    v = ts.values.values
    sums = np.abs(v) ** 2 + np.abs(v[partner]) ** 2
    return float(np.max(np.abs(sums - detj)))


# -- reduction checks (tail independence of the chain) -----------------------------


def _axis_samples(lo: float, hi: float, breakpoints: Sequence[Fraction]) -> np.ndarray:
    """Dyadic uniform grid over [lo, hi] joined with the breakpoint lattice."""
    width = hi - lo
    step = 2.0 ** -math.ceil(math.log2(GRID_POINTS_PER_AXIS / width))
    base = np.arange(math.ceil(lo / step), math.floor(hi / step) + 1) * step
    extra = [float(b) for b in breakpoints if lo <= float(b) <= hi]
    return np.unique(np.concatenate([base, np.array(extra)]))


def _grid(g: AdmissibleFn, halfwidths: Sequence[Fraction]) -> np.ndarray:
    axes = []
    for i, hw in enumerate(halfwidths):
        bps = set(g.breakpoints_1d(i))
        bps |= {-b for b in bps}
        axes.append(_axis_samples(-float(hw), float(hw), sorted(bps)))
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.reshape(-1) for m in mesh], axis=1)


def _apply_points(M_inv_T: np.ndarray, X: np.ndarray) -> np.ndarray:
    return X @ M_inv_T.T


def _inv_T_float(M: IntMat) -> np.ndarray:
    return np.array([[float(v) for v in row] for row in M.T.inverse()])


def check_reduction(g: AdmissibleFn, J: IntMat, mode: str,
                    return_deviation: bool = False):
    """Pointwise identity tests that decide whether one refinement factor
    determines the scaling function regardless of later chain entries.

    ``single``: the refinement step with ``J`` applied to the window
    reproduces the window itself (axis-doubling factors).
    ``double``: prepending a quincunx step changes nothing,
    ``refine_J(g, refine_D(g, g)) == refine_J(g, g)``.

    True when the grid deviation stays below the grid-equality tolerance.
    """
    if g.dim != 2:
        raise UnsupportedDimension("reduction checks are specialized to d = 2")
    if mode not in ("single", "double"):
        raise ValueError(f"unknown reduction mode {mode!r}")
    hw = g.support_halfwidths
    JT = J.T

    def box_through(*mats):
        b = list(hw)
        for A in mats:
            b = [sum(abs(A.entries[i][k]) * b[k] for k in range(2)) for i in range(2)]
        return b

    if mode == "single":
        box = box_through(JT)
        X = _grid(g, box)
        lhs = periodized_sum_many(g, J, X) * g.eval_many(_apply_points(_inv_T_float(J), X))
        rhs = g.eval_many(X)
    else:
        box = box_through(J_D.T, JT)
        X = _grid(g, box)
        Y = _apply_points(_inv_T_float(J), X)
        inner = periodized_sum_many(g, J_D, Y) * g.eval_many(_apply_points(_inv_T_float(J_D), Y))
        outer = periodized_sum_many(g, J, X)
        lhs = outer * inner
        rhs = outer * g.eval_many(Y)
    deviation = float(np.max(np.abs(lhs - rhs)))
    ok = deviation < tol.GRID_EQUALITY
    return (ok, deviation) if return_deviation else ok


def _classify_factor(J: IntMat) -> tuple:
    """('axis', i) or ('rot', i, j) for the standard d-dimensional factors."""
    d = J.dim
    for i in range(d):
        if J == axis_doubling(d, i):
            return ("axis", i)
    for i in range(d):
        for j in range(d):
            if i != j and J == plane_rotation(d, i, j):
                return ("rot", i, j)
    raise ConditionViolated(f"factor {J} is not an axis doubling or plane rotation")


def check_reduction_highdim(g: AdmissibleFn, chn: ChainSpec) -> list[bool]:
    """Tail-independence flags per level for d > 2 chains of axis doublings
    and plane rotations.  Requires each rotation to be preceded by a factor
    acting in its plane; raises ``ConditionViolated`` at the first offense."""
    if g.dim <= 2:
        raise UnsupportedDimension("use check_reduction for d = 2")
    kinds = [_classify_factor(J) for J in chn.factors]
    for idx in range(1, len(kinds)):
        kind = kinds[idx]
        if kind[0] == "rot":
            prev = kinds[idx - 1]
            allowed = prev == kind or (prev[0] == "axis" and prev[1] in kind[1:])
            if not allowed:
                raise ConditionViolated(
                    f"factor {idx + 1} rotates plane {kind[1:]} but factor "
                    f"{idx} acts elsewhere"
                )
    flags = []
    for level in range(chn.n_levels):
        full = scaling_spectrum(chn, level, g).spectrum
        head = scaling_spectrum(chn.subchain(level + 1), level, g).spectrum
        worst = 0.0
        for k in full.support() | head.support():
            worst = max(worst, abs(full[k] - head[k]))
        flags.append(worst < tol.GRID_EQUALITY)
    return flags


def trailing_axis_collapse(chn: ChainSpec, g: AdmissibleFn) -> float:
    """Spectrum distance between the last-but-one scaling function and the
    plain window spectrum at the same matrix (zero when a trailing axis
    doubling changes nothing)."""
    n = chn.n_levels
    if n < 1:
        raise LevelOutOfRange("need at least one factor")
    with_tail = scaling_spectrum(chn.subchain(n), n - 1, g).spectrum
    plain = scaling_spectrum(chn.subchain(n - 1), n - 1, g).spectrum
    worst = 0.0
    for k in with_tail.support() | plain.support():
        worst = max(worst, abs(with_tail[k] - plain[k]))
    return worst


# -- report -----------------------------------------------------------------------


@dataclass(frozen=True)
class LevelReport:
    level: int
    size: int
    dim_ok: bool
    min_class_power: float
    nesting_residual: float | None
    support_radius: int
    scaling_filter_defect: float | None
    wavelet_filter_defect: float | None


@dataclass(frozen=True)
class MraReport:
    levels: tuple[LevelReport, ...]
    dyadic: bool
    ok: bool

    def render(self) -> str:
        lines = [f"levels: {len(self.levels)}", f"dyadic: {self.dyadic}"]
        for lr in self.levels:
            lines.append(f"level: {lr.level}")
            lines.append(f"  size: {lr.size}")
            lines.append(f"  dim_ok: {lr.dim_ok}")
            lines.append(f"  min_class_power: {lr.min_class_power:.17g}")
            if lr.nesting_residual is not None:
                lines.append(f"  nesting_residual: {lr.nesting_residual:.17g}")
            lines.append(f"  support_radius: {lr.support_radius}")
            if lr.scaling_filter_defect is not None:
                lines.append(f"  scaling_filter_defect: {lr.scaling_filter_defect:.17g}")
            if lr.wavelet_filter_defect is not None:
                lines.append(f"  wavelet_filter_defect: {lr.wavelet_filter_defect:.17g}")
        lines.append(f"ok: {self.ok}")
        return "\n".join(lines) + "\n"


def build_report(chn: ChainSpec, g: AdmissibleFn, variant: str = "S") -> MraReport:
    """Run every per-level check on a chain and collect the results."""
    radii = support_radii(chn, g)
    levels = []
    ok = True
    for level in range(chn.n_levels + 1):
        dim_ok, min_power = basis_check(chn, level, g, variant)
        ok &= dim_ok
        nest = None
        fdef_a = fdef_b = None
        if level < chn.n_levels:
            nest = nesting_residual(chn, level, g, variant)
            ok &= nest < tol.TWO_SCALE
            if chn.dyadic:
                a2, b2 = normalized_filters(chn, level, g, variant)
                fdef_a = audit_orthonormality(a2, variant)
                fdef_b = audit_orthonormality(b2, variant)
                ok &= fdef_a < tol.ORTHO and fdef_b < tol.ORTHO
        levels.append(LevelReport(
            level=level, size=chn.size(level), dim_ok=dim_ok,
            min_class_power=min_power, nesting_residual=nest,
            support_radius=radii[level],
            scaling_filter_defect=fdef_a, wavelet_filter_defect=fdef_b,
        ))
        if level > 0 and radii[level] < radii[level - 1]:
            ok = False
    return MraReport(levels=tuple(levels), dyadic=chn.dyadic, ok=ok)
