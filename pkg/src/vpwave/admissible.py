"""Admissible window functions.

An admissible function is nonnegative, strictly positive on the half-open
unit cube ``Q_d = [-1/2, 1/2)^d``, and its integer translates sum to one.
Sampling such a window (and products built from it) yields the Fourier
coefficients of all scaling functions and wavelets in this package.

Three tensor-product families are implemented, per axis:

* ``characteristic`` -- the half-open indicator of ``[-1/2, 1/2)``; exact
  0/1 values, reproducing the Dirichlet kernels.
* ``tensor_linear`` -- plateau 1 on ``|t| <= 1/2 - alpha`` with a linear
  ramp of width ``2 alpha`` (the de la Vallee Poussin shape);
  ``alpha = 0`` is the modified Dirichlet limit with value 1/2 at
  ``|t| = 1/2``, ``alpha = 1/2`` the Fejer triangle.
* ``tensor_smoothed`` -- the indicator of ``[-1/2, 1/2]`` convolved with
  an r-fold self-convolution of a unit-mass box of halfwidth ``p/r``
  (a centered B-spline kernel supported on ``[-p, p]``); ``r - 1``
  continuous derivatives, reduces to ``tensor_linear`` at ``r = 1``.

All parameters are exact rationals.  Evaluation is polymorphic: Fraction
input gives an exact Fraction result (this is what decides half-open
boundaries in spectra), float input takes a fast floating path, and
:meth:`AdmissibleFn.eval_many` evaluates numpy grids.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np

from .errors import SingularMatrix
from .intlat import IntMat

HALF = Fraction(1, 2)

KIND_CHARACTERISTIC = "characteristic"
KIND_LINEAR = "tensor_linear"
KIND_SMOOTHED = "tensor_smoothed"


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(v)
    raise TypeError(f"cannot interpret {v!r} as an exact rational")


@dataclass(frozen=True)
class AdmissibleFn:
    """Tensor-product admissible window on R^d."""

    kind: str
    dim: int
    alpha: tuple[Fraction, ...]  # per-axis ramp halfwidth (0 for characteristic)
    order: int = 1

    @classmethod
    def characteristic(cls, dim: int) -> "AdmissibleFn":
        return cls(kind=KIND_CHARACTERISTIC, dim=dim, alpha=(Fraction(0),) * dim)

    @classmethod
    def tensor_linear(cls, alpha: Sequence) -> "AdmissibleFn":
        a = tuple(_as_fraction(v) for v in alpha)
        if any(v < 0 or v > HALF for v in a):
            raise ValueError("linear ramp halfwidths must lie in [0, 1/2]")
        return cls(kind=KIND_LINEAR, dim=len(a), alpha=a)

    @classmethod
    def tensor_smoothed(cls, p: Sequence, order: int = 2) -> "AdmissibleFn":
        a = tuple(_as_fraction(v) for v in p)
        if any(v < 0 or v >= HALF for v in a):
            raise ValueError("smoothing halfwidths must lie in [0, 1/2)")
        if order < 1:
            raise ValueError("smoothing order must be >= 1")
        return cls(kind=KIND_SMOOTHED, dim=len(a), alpha=a, order=int(order))

    # -- support geometry ------------------------------------------------

    @property
    def support_halfwidths(self) -> tuple[Fraction, ...]:
        """Per-axis halfwidth of the closed support box."""
        return tuple(HALF + a for a in self.alpha)

    def support_box(self) -> tuple[Fraction, ...]:
        """The per-axis ``p`` with ``supp g`` inside ``[-1/2-p, 1/2+p]``."""
        return tuple(self.alpha)

    def plateau_halfwidths(self) -> tuple[Fraction, ...]:
        """Per-axis halfwidth of the box where the window equals one."""
        return tuple(HALF - a for a in self.alpha)

    def breakpoints_1d(self, axis: int) -> tuple[Fraction, ...]:
        """Knots of the per-axis piecewise-polynomial structure."""
        a = self.alpha[axis]
        if self.kind == KIND_CHARACTERISTIC or a == 0:
            return (-HALF, HALF)
        if self.kind == KIND_LINEAR:
            return tuple(sorted({-HALF - a, -HALF + a, HALF - a, HALF + a}))
        r = self.order
        step = 2 * a / r
        knots = {s * HALF + (Fraction(j) - Fraction(r, 2)) * step
                 for s in (-1, 1) for j in range(r + 1)}
        return tuple(sorted(knots))

    # -- evaluation --------------------------------------------------------

    def eval_axis(self, axis: int, t):
        """One axis factor; exact on Fraction input."""
        a = self.alpha[axis]
        if self.kind == KIND_CHARACTERISTIC:
            return 1 if -HALF <= t < HALF else 0
        at = -t if t < 0 else t
        if a == 0:
            if at < HALF:
                return 1
            if at == HALF:
                return HALF if isinstance(t, Fraction) else 0.5
            return 0
        if self.kind == KIND_LINEAR:
            if at <= HALF - a:
                return 1
            if at >= HALF + a:
                return 0
            return (HALF + a - at) / (2 * a)
        return _smoothed_axis(a, self.order, t)

    def __call__(self, x: Sequence):
        if len(x) != self.dim:
            raise ValueError("point dimension differs from window dimension")
        out = 1
        for i, t in enumerate(x):
            f = self.eval_axis(i, t)
            if f == 0:
                return 0
            out = out * f
        return out

    def eval_axis_many(self, axis: int, t: np.ndarray) -> np.ndarray:
        """Vectorized float evaluation of one axis factor."""
        t = np.asarray(t, dtype=float)
        a = self.alpha[axis]
        if self.kind == KIND_CHARACTERISTIC:
            return ((t >= -0.5) & (t < 0.5)).astype(float)
        at = np.abs(t)
        if a == 0:
            out = (at < 0.5).astype(float)
            out[at == 0.5] = 0.5
            return out
        if self.kind == KIND_LINEAR:
            return np.clip((float(HALF + a) - at) / float(2 * a), 0.0, 1.0)
        r = self.order
        s = float(Fraction(r) / (2 * a))
        return _bspline_cdf(s * (t + 0.5), r) - _bspline_cdf(s * (t - 0.5), r)

    def eval_many(self, X: np.ndarray) -> np.ndarray:
        """Evaluate on an (n, d) float array of points."""
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        out = self.eval_axis_many(0, X[:, 0])
        for i in range(1, self.dim):
            out = out * self.eval_axis_many(i, X[:, i])
        return out


def _smoothed_axis(p: Fraction, r: int, t):
    """chi_[-1/2,1/2] convolved with the B-spline kernel on [-p, p]."""
    s = Fraction(r) / (2 * p)
    return _bspline_cdf_scalar(s * (t + HALF), r) - _bspline_cdf_scalar(s * (t - HALF), r)


def _bspline_cdf_scalar(y, r: int):
    """Integral of the centered cardinal B-spline of order r up to y."""
    half_r = Fraction(r, 2)
    if y <= -half_r:
        return 0 if isinstance(y, Fraction) else 0.0
    if y >= half_r:
        return 1 if isinstance(y, Fraction) else 1.0
    acc = 0
    sign = 1
    for j in range(r + 1):
        u = y + half_r - j
        if u > 0:
            acc = acc + sign * math.comb(r, j) * u ** r
        sign = -sign
    return acc / math.factorial(r)


def _bspline_cdf(y: np.ndarray, r: int) -> np.ndarray:
    # evaluate the alternating sum only inside the kernel support; the
    # tails are exactly 0 and 1 and the sum cancels badly for large y
    inner = np.clip(y, -r / 2.0, r / 2.0)
    acc = np.zeros_like(inner)
    sign = 1.0
    for j in range(r + 1):
        acc += sign * math.comb(r, j) * np.maximum(inner + r / 2.0 - j, 0.0) ** r
        sign = -sign
    return np.clip(acc / math.factorial(r), 0.0, 1.0)


# -- periodization ----------------------------------------------------------


def _shift_range(J: IntMat, x, halfwidths, pad=0) -> list[range]:
    """Per-axis integer ranges of z with x + J^T z possibly in the support box."""
    d = J.dim
    inv = J.T.inverse()  # rows of (J^T)^{-1}
    ranges = []
    for i in range(d):
        lo = hi = 0
        for j in range(d):
            c = inv[i][j]
            a = c * (-halfwidths[j] - x[j])
            b = c * (halfwidths[j] - x[j])
            lo = lo + min(a, b)
            hi = hi + max(a, b)
        ranges.append(range(math.ceil(lo - pad), math.floor(hi + pad) + 1))
    return ranges


def periodized_sum(g: AdmissibleFn, J: IntMat, x: Sequence):
    """``sum_z g(x + J^T z)``, finite because the support box is compact."""
    if J.det == 0:
        raise SingularMatrix("periodization factor must be regular")
    hw = g.support_halfwidths
    exact = all(isinstance(v, (Fraction, int)) for v in x)
    xv = tuple(Fraction(v) for v in x) if exact else tuple(float(v) for v in x)
    pad = 0 if exact else Fraction(1, 10 ** 9)
    total = 0
    for z in product(*_shift_range(J, xv, hw, pad)):
        shift = J.apply_T(z)
        total = total + g(tuple(a + b for a, b in zip(xv, shift)))
    return total


def periodized_sum_many(g: AdmissibleFn, J: IntMat, X: np.ndarray) -> np.ndarray:
    """Vectorized ``sum_z g(X + J^T z)`` over an (n, d) float array."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    hw = g.support_halfwidths
    lo = [Fraction(math.floor(X[:, j].min() * 2 ** 20), 2 ** 20) for j in range(g.dim)]
    hi = [Fraction(math.ceil(X[:, j].max() * 2 ** 20), 2 ** 20) for j in range(g.dim)]
    # cover every point of X: widen the box by its extent before ranging z
    d = g.dim
    inv = J.T.inverse()
    ranges = []
    for i in range(d):
        a = b = Fraction(0)
        for j in range(d):
            c = inv[i][j]
            cands = [c * (-hw[j] - hi[j]), c * (-hw[j] - lo[j]),
                     c * (hw[j] - hi[j]), c * (hw[j] - lo[j])]
            a = a + min(cands)
            b = b + max(cands)
        ranges.append(range(math.ceil(a), math.floor(b) + 1))
    out = np.zeros(X.shape[0])
    for z in product(*ranges):
        shift = np.array([float(v) for v in J.apply_T(z)])
        out += g.eval_many(X + shift)
    return out


def check_partition_of_unity(g: AdmissibleFn, n_samples: int = 10_000,
                             seed: int = 0) -> float:
    """Max deviation of ``sum_z g(x + z)`` from 1 at random points of [-1,1]^d."""
    rng = np.random.default_rng(seed)
    X = rng.uniform(-1.0, 1.0, size=(n_samples, g.dim))
    total = periodized_sum_many(g, IntMat.identity(g.dim), X)
    return float(np.max(np.abs(total - 1.0)))


# -- config grammar ----------------------------------------------------------

_CALL_RE = re.compile(r"^\s*([a-z_]+)\s*(?:\(\s*(.*?)\s*\))?\s*$", re.S)


def parse_admissible(text: str, dim: int) -> AdmissibleFn:
    """Parse a window descriptor like ``tensor_linear(alpha = [1/10, 1/10])``.

    Scalars are broadcast across axes; rationals may be written as
    fractions (``1/10``) or decimal strings (``0.1``), both exact.
    """
    m = _CALL_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse window descriptor {text!r}")
    kind, argtext = m.group(1), m.group(2) or ""
    args = {}
    if argtext:
        for part in _split_args(argtext):
            key, _, val = part.partition("=")
            args[key.strip()] = val.strip()
    if kind == KIND_CHARACTERISTIC:
        return AdmissibleFn.characteristic(dim)
    if kind == KIND_LINEAR:
        return AdmissibleFn.tensor_linear(_rational_list(args.get("alpha", "0"), dim))
    if kind == KIND_SMOOTHED:
        return AdmissibleFn.tensor_smoothed(
            _rational_list(args.get("p", "0"), dim), order=int(args.get("order", "2"))
        )
    raise ValueError(f"unknown window kind {kind!r}")


def _split_args(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if cur:
        parts.append("".join(cur))
    return parts


def _rational_list(text: str, dim: int) -> list[Fraction]:
    text = text.strip()
    if text.startswith("["):
        items = [Fraction(tok.strip()) for tok in text[1:-1].split(",") if tok.strip()]
    else:
        items = [Fraction(text)]
    if len(items) == 1:
        items = items * dim
    if len(items) != dim:
        raise ValueError(f"expected {dim} per-axis values, got {len(items)}")
    return items
