"""Exact integer lattice algebra.

Regular integer matrices, exact determinants, Smith normal form,
enumeration of patterns and generating sets, congruence reduction and
dilation chains.  Everything here runs on Python integers and
``fractions.Fraction``; floating point never decides a congruence.

Conventions
-----------
For a regular ``M`` in Z^{dxd} with ``m = |det M|``:

* the *pattern* ``P(M)`` collects the ``m`` points of ``M^{-1} Z^d``
  that fall in the half-open box ``[-1/2, 1/2)^d`` (variant ``S``) or
  ``[0, 1)^d`` (variant ``I``); they represent ``M^{-1} Z^d / Z^d``;
* the *generating set* ``G(M)`` collects the ``m`` integer vectors in
  ``M [-1/2,1/2)^d`` resp. ``M [0,1)^d``; they represent
  ``Z^d / M Z^d`` and satisfy ``G(M) = M P(M)``.

Frequency classes of the DFT with respect to ``M`` live on ``G(M^T)``
with class lattice ``M^T Z^d``; :func:`reduce_mod` reduces into that set.

Both sets carry one canonical order: the lexicographic order of the
digit tuples in the Smith-diagonal coordinates, so every module and
file format of this package agrees on element positions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import DimensionMismatch, SingularMatrix

Vec = tuple[int, ...]
FracVec = tuple[Fraction, ...]

VARIANT_S = "S"
VARIANT_I = "I"


def _check_variant(variant: str) -> str:
    if variant not in (VARIANT_S, VARIANT_I):
        raise ValueError(f"variant must be 'S' or 'I', got {variant!r}")
    return variant


@dataclass(frozen=True)
class IntMat:
    """Immutable square integer matrix with an exact cached determinant."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        d = len(self.entries)
        if d < 1:
            raise DimensionMismatch("matrix must be at least 1x1")
        rows = []
        for row in self.entries:
            if len(row) != d:
                raise DimensionMismatch("matrix must be square")
            rows.append(tuple(int(v) for v in row))
        object.__setattr__(self, "entries", tuple(rows))

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "IntMat":
        return cls(tuple(tuple(int(v) for v in r) for r in rows))

    @classmethod
    def identity(cls, d: int) -> "IntMat":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d)))

    @classmethod
    def diagonal(cls, diag: Sequence[int]) -> "IntMat":
        d = len(diag)
        return cls(tuple(tuple(diag[i] if i == j else 0 for j in range(d)) for i in range(d)))

    @property
    def dim(self) -> int:
        return len(self.entries)

    @property
    def det(self) -> int:
        return _det(self)

    @property
    def absdet(self) -> int:
        return abs(_det(self))

    def is_regular(self) -> bool:
        return _det(self) != 0

    def require_regular(self) -> "IntMat":
        if _det(self) == 0:
            raise SingularMatrix(f"matrix {self.entries} is singular")
        return self

    @property
    def T(self) -> "IntMat":
        return IntMat(tuple(zip(*self.entries)))

    def __matmul__(self, other: "IntMat") -> "IntMat":
        if self.dim != other.dim:
            raise DimensionMismatch("matrix dimensions differ")
        cols = other.T.entries
        return IntMat(
            tuple(
                tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
                for row in self.entries
            )
        )

    def apply(self, v: Sequence) -> tuple:
        """Matrix-vector product; works for int and Fraction entries."""
        if len(v) != self.dim:
            raise DimensionMismatch("vector length differs from matrix dimension")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.entries)

    def apply_T(self, v: Sequence) -> tuple:
        """Product with the transpose, without materializing it."""
        if len(v) != self.dim:
            raise DimensionMismatch("vector length differs from matrix dimension")
        d = self.dim
        return tuple(sum(self.entries[i][j] * v[i] for i in range(d)) for j in range(d))

    def inverse(self) -> tuple[FracVec, ...]:
        """Exact inverse as rows of Fractions."""
        return _inverse(self)

    def inv_apply(self, v: Sequence) -> FracVec:
        """``M^{-1} v`` exactly."""
        return tuple(sum(a * Fraction(b) for a, b in zip(row, v)) for row in _inverse(self))

    def inv_T_apply(self, v: Sequence) -> FracVec:
        """``M^{-T} v`` exactly."""
        inv = _inverse(self)
        d = self.dim
        return tuple(sum(inv[i][j] * Fraction(v[i]) for i in range(d)) for j in range(d))

    def scaled_adjugate(self) -> tuple[tuple[tuple[int, ...], ...], int]:
        """Integer matrix ``A`` and ``q = det`` with ``M^{-1} = A / q``."""
        return _scaled_adjugate(self)

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def __str__(self) -> str:  # compact row-major form used in logs
        return "[" + "; ".join(" ".join(str(v) for v in row) for row in self.entries) + "]"


def _bareiss_det(rows: list[list[int]]) -> int:
    """Fraction-free Gaussian elimination; exact integer determinant."""
    n = len(rows)
    a = [row[:] for row in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@lru_cache(maxsize=None)
def _det(M: IntMat) -> int:
    return _bareiss_det(M.to_lists())


@lru_cache(maxsize=None)
def _inverse(M: IntMat) -> tuple[FracVec, ...]:
    M.require_regular()
    d = M.dim
    a = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(d)]
         for i, row in enumerate(M.entries)]
    for col in range(d):
        piv = next(r for r in range(col, d) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        a[col] = [x / pv for x in a[col]]
        for r in range(d):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[d:]) for row in a)


@lru_cache(maxsize=None)
def _scaled_adjugate(M: IntMat) -> tuple[tuple[tuple[int, ...], ...], int]:
    q = _det(M)
    inv = _inverse(M)
    adj = tuple(tuple(int(x * q) for x in row) for row in inv)
    return adj, q


def determinant(M: IntMat) -> int:
    """Exact determinant (zero is a valid value; callers enforce regularity)."""
    return _det(M)


@dataclass(frozen=True)
class SmithDecomposition:
    """``M = U S V`` with unimodular ``U, V`` and ``S = diag(s_1..s_d)``,
    ``s_i > 0`` and ``s_i | s_{i+1}``."""

    U: IntMat
    S: IntMat
    V: IntMat

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.S.entries[i][i] for i in range(self.S.dim))


def smith_normal_form(M: IntMat) -> SmithDecomposition:
    """Smith normal form of a regular integer matrix."""
    return _snf(M.require_regular())


@lru_cache(maxsize=None)
def _snf(M: IntMat) -> SmithDecomposition:
    d = M.dim
    A = M.to_lists()
    # Maintain M = U @ A @ V throughout; U, V collect inverse elementary ops.
    U = IntMat.identity(d).to_lists()
    V = IntMat.identity(d).to_lists()

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        for r in U:
            r[i], r[j] = r[j], r[i]

    def col_swap(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        V[i], V[j] = V[j], V[i]

    def row_add(i, j, c):
        # A <- L A with L adding c*row j to row i; U <- U L^{-1}
        A[i] = [x + c * y for x, y in zip(A[i], A[j])]
        for r in U:
            r[j] -= c * r[i]

    def col_add(i, j, c):
        # col i += c * col j; V <- R^{-1} V with the matching inverse op
        for r in A:
            r[i] += c * r[j]
        V[j] = [x - c * y for x, y in zip(V[j], V[i])]

    def row_negate(i):
        A[i] = [-x for x in A[i]]
        for r in U:
            r[i] = -r[i]

    for t in range(d):
        while True:
            # move a minimal-magnitude nonzero entry of the trailing block to (t,t)
            best = None
            for i in range(t, d):
                for j in range(t, d):
                    if A[i][j] != 0 and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                raise SingularMatrix("singular matrix in Smith reduction")
            bi, bj = best
            if bi != t:
                row_swap(t, bi)
            if bj != t:
                col_swap(t, bj)
            dirty = False
            for i in range(t + 1, d):
                if A[i][t] != 0:
                    q = A[i][t] // A[t][t]
                    row_add(i, t, -q)
                    if A[i][t] != 0:
                        dirty = True
            for j in range(t + 1, d):
                if A[t][j] != 0:
                    q = A[t][j] // A[t][t]
                    col_add(j, t, -q)
                    if A[t][j] != 0:
                        dirty = True
            if not dirty:
                break
        if A[t][t] < 0:
            row_negate(t)

    # enforce the divisibility chain s_i | s_{i+1}
    changed = True
    while changed:
        changed = False
        for i in range(d - 1):
            if A[i + 1][i + 1] % A[i][i] != 0:
                changed = True
                col_add(i, i + 1, 1)
                # re-diagonalize the 2x2 block (i, i+1)
                while A[i + 1][i] != 0 or A[i][i + 1] != 0:
                    if A[i + 1][i] != 0:
                        if abs(A[i + 1][i]) < abs(A[i][i]):
                            row_swap(i, i + 1)
                        q = A[i + 1][i] // A[i][i]
                        row_add(i + 1, i, -q)
                    if A[i][i + 1] != 0:
                        if abs(A[i][i + 1]) < abs(A[i][i]):
                            col_swap(i, i + 1)
                        q = A[i][i + 1] // A[i][i]
                        col_add(i + 1, i, -q)
                if A[i][i] < 0:
                    row_negate(i)
                if A[i + 1][i + 1] < 0:
                    row_negate(i + 1)

    dec = SmithDecomposition(U=IntMat.from_rows(U), S=IntMat.from_rows(A), V=IntMat.from_rows(V))
    assert dec.U @ dec.S @ dec.V == M, "Smith reconstruction failed"
    assert abs(dec.U.det) == 1 and abs(dec.V.det) == 1
    diag = dec.diagonal
    assert all(diag[i] > 0 for i in range(d))
    assert all(diag[i + 1] % diag[i] == 0 for i in range(d - 1))
    return dec


def _frac_box(x: FracVec, variant: str) -> FracVec:
    """Reduce each coordinate mod 1 into [-1/2,1/2) or [0,1)."""
    if variant == VARIANT_I:
        return tuple(v - (v.numerator // v.denominator) for v in x)
    out = []
    for v in x:
        w = v + Fraction(1, 2)
        out.append(w - (w.numerator // w.denominator) - Fraction(1, 2))
    return tuple(out)


@dataclass(frozen=True)
class GeneratingSet:
    """Integer representatives of ``Z^d / M Z^d`` in canonical order."""

    matrix: IntMat
    variant: str
    reps: tuple[Vec, ...]
    index: dict[Vec, int] = field(repr=False, hash=False, compare=False)

    def __len__(self) -> int:
        return len(self.reps)

    def reduce(self, k: Sequence[int]) -> Vec:
        """Unique representative of ``k`` modulo ``M Z^d``."""
        x = self.matrix.inv_apply(k)
        f = _frac_box(x, self.variant)
        h = self.matrix.apply(f)
        out = tuple(int(v) for v in h)
        assert all(Fraction(o) == v for o, v in zip(out, h))
        return out

    def index_of(self, k: Sequence[int]) -> int:
        return self.index[self.reduce(k)]


@dataclass(frozen=True)
class Pattern:
    """Rational representatives of ``M^{-1} Z^d / Z^d``, paired with the
    generating set of the same matrix (``points[i] = M^{-1} reps[i]``)."""

    matrix: IntMat
    variant: str
    points: tuple[FracVec, ...]
    index: dict[FracVec, int] = field(repr=False, hash=False, compare=False)

    def __len__(self) -> int:
        return len(self.points)

    def reduce(self, y: Sequence) -> FracVec:
        return _frac_box(tuple(Fraction(v) for v in y), self.variant)

    def index_of(self, y: Sequence) -> int:
        return self.index[self.reduce(y)]

    def add(self, i: int, j: int) -> int:
        """Index of ``points[i] + points[j]`` mod 1 (the pattern group law)."""
        s = tuple(a + b for a, b in zip(self.points[i], self.points[j]))
        return self.index_of(s)


@lru_cache(maxsize=None)
def _generating_set(M: IntMat, variant: str) -> GeneratingSet:
    M.require_regular()
    snf = _snf(M)
    diag = snf.diagonal
    U = snf.U
    reps = []
    for digits in itertools.product(*(range(s) for s in diag)):
        r = U.apply(digits)
        x = M.inv_apply(r)
        f = _frac_box(x, variant)
        h = M.apply(f)
        reps.append(tuple(int(v) for v in h))
    gs = GeneratingSet(matrix=M, variant=variant, reps=tuple(reps),
                       index={r: i for i, r in enumerate(reps)})
    assert len(gs.index) == M.absdet, "representatives are not distinct"
    return gs


def generating_set(M: IntMat, variant: str = VARIANT_S) -> GeneratingSet:
    """Canonically ordered generating set ``G(M)`` (reps of ``Z^d / M Z^d``)."""
    return _generating_set(M, _check_variant(variant))


@lru_cache(maxsize=None)
def _pattern(M: IntMat, variant: str) -> Pattern:
    gs = _generating_set(M, variant)
    points = tuple(M.inv_apply(r) for r in gs.reps)
    return Pattern(matrix=M, variant=variant, points=points,
                   index={p: i for i, p in enumerate(points)})


def pattern(M: IntMat, variant: str = VARIANT_S) -> Pattern:
    """Canonically ordered pattern ``P(M) = M^{-1} G(M)``."""
    return _pattern(M.require_regular(), _check_variant(variant))


def reduce_mod(M: IntMat, k: Sequence[int], variant: str = VARIANT_S) -> Vec:
    """Reduce an integer frequency ``k`` into ``G(M^T)`` modulo ``M^T Z^d``.

    These are the congruence classes indexing the DFT with respect to ``M``.
    """
    return generating_set(M.T, variant).reduce(k)


@dataclass(frozen=True)
class ChainSpec:
    """Initial matrix plus dilation factors and their running products.

    ``products[l] = J_l ... J_1 M_0`` and ``sizes[l] = |det products[l]|``
    for ``l = 0..n``; ``dyadic`` is set when every factor has ``|det| = 2``.
    """

    M0: IntMat
    factors: tuple[IntMat, ...]
    products: tuple[IntMat, ...]
    sizes: tuple[int, ...]
    dyadic: bool

    @property
    def n_levels(self) -> int:
        return len(self.factors)

    @property
    def dim(self) -> int:
        return self.M0.dim

    def matrix(self, level: int) -> IntMat:
        return self.products[level]

    def size(self, level: int) -> int:
        return self.sizes[level]

    def subchain(self, n: int) -> "ChainSpec":
        """Chain truncated to the first ``n`` factors."""
        return chain(self.M0, self.factors[:n])


def chain(M0: IntMat, factors: Sequence[IntMat] = ()) -> ChainSpec:
    """Build a dilation chain ``M_l = J_l ... J_1 M_0``.

    Every factor must be regular with ``|det| > 1``; the initial matrix
    must be regular.
    """
    M0.require_regular()
    d = M0.dim
    products = [M0]
    for J in factors:
        if J.dim != d:
            raise DimensionMismatch("factor dimension differs from M0")
        J.require_regular()
        if J.absdet <= 1:
            raise SingularMatrix(f"factor {J} must have |det| > 1")
        products.append(J @ products[-1])
    sizes = tuple(P.absdet for P in products)
    dyadic = all(J.absdet == 2 for J in factors)
    return ChainSpec(M0=M0, factors=tuple(factors), products=tuple(products),
                     sizes=sizes, dyadic=dyadic)


# The three determinant-2 matrices of the plane: quincunx rotation and the
# two axis doublings; shears are their unimodular companions.
J_D = IntMat.from_rows([[1, -1], [1, 1]])
J_X = IntMat.from_rows([[2, 0], [0, 1]])
J_Y = IntMat.from_rows([[1, 0], [0, 2]])
J_X_PLUS = IntMat.from_rows([[2, 0], [1, 1]])
J_X_MINUS = IntMat.from_rows([[2, 0], [-1, 1]])
J_Y_PLUS = IntMat.from_rows([[1, 1], [0, 2]])
J_Y_MINUS = IntMat.from_rows([[1, -1], [0, 2]])


def axis_doubling(d: int, i: int) -> IntMat:
    """d-dimensional factor scaling axis ``i`` by 2."""
    rows = IntMat.identity(d).to_lists()
    rows[i][i] = 2
    return IntMat.from_rows(rows)


def plane_rotation(d: int, i: int, j: int) -> IntMat:
    """d-dimensional factor rotating the (i,j) plane by pi/4 with sqrt(2) scale."""
    if i == j:
        raise ValueError("plane axes must differ")
    rows = IntMat.identity(d).to_lists()
    rows[i][i] = 1
    rows[i][j] = -1
    rows[j][i] = 1
    rows[j][j] = 1
    return IntMat.from_rows(rows)
