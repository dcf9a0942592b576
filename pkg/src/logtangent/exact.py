"""Exact rational arithmetic: dense matrices, sparse polynomials, truncated series.

Rationals are :class:`fractions.Fraction` throughout; they are always reduced
with a positive denominator, which is the only invariant the rest of the
package relies on.

Elimination is fraction-free (Bareiss) on integer rows.  Rows of a rational
matrix are first cleared of denominators, which changes neither the rank nor
the kernel; determinants are corrected by the product of the row scalings.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence, Union

Number = Union[int, Fraction]

#: Sentinel valuation of a series that vanishes up to its truncation order.
INFINITY = math.inf

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` into a Fraction; rejects zero denominators."""
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"expected a rational literal, got {text!r}")
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ValueError(f"malformed rational literal {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(x: Number) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def primitive(vec: Iterable[Number]) -> tuple[int, ...]:
    """Scale a nonzero rational vector to integers with content 1 and first nonzero entry positive."""
    vec = [Fraction(x) for x in vec]
    if not any(vec):
        raise ValueError("zero vector has no primitive representative")
    den = reduce(_lcm, (x.denominator for x in vec), 1)
    ints = [int(x * den) for x in vec]
    g = reduce(math.gcd, ints, 0)
    ints = [x // g for x in ints]
    if next(x for x in ints if x != 0) < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def is_proportional(u: Sequence[Number], v: Sequence[Number]) -> bool:
    """True iff ``u`` and ``v`` span a space of dimension at most one."""
    return rank([list(u), list(v)]) <= 1


def dot(u: Sequence[Number], v: Sequence[Number]) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(u, v)), Fraction(0))


# --------------------------------------------------------------------------
# Dense matrices


@dataclass(frozen=True)
class RatMatrix:
    """Immutable dense rational matrix stored row-major."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length must equal rows * cols")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[Number]], cols: int | None = None) -> "RatMatrix":
        data = [[Fraction(x) for x in row] for row in rows]
        if cols is None:
            if not data:
                raise ValueError("cols must be given for a matrix without rows")
            cols = len(data[0])
        if any(len(r) != cols for r in data):
            raise ValueError("ragged rows")
        return cls(len(data), cols, tuple(x for r in data for x in r))

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return self.entries[j::self.cols]

    def tolist(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def T(self) -> "RatMatrix":
        return RatMatrix.from_rows([self.column(j) for j in range(self.cols)], self.rows)

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "RatMatrix":
        return RatMatrix.from_rows([[self[i, j] for j in col_idx] for i in row_idx], len(col_idx))

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols = [other.column(j) for j in range(other.cols)]
        return RatMatrix.from_rows(
            [[dot(self.row(i), c) for c in cols] for i in range(self.rows)], other.cols
        )

    def apply(self, vec: Sequence[Number]) -> tuple[Fraction, ...]:
        if len(vec) != self.cols:
            raise ValueError("shape mismatch")
        return tuple(dot(self.row(i), vec) for i in range(self.rows))

    def __mul__(self, scalar: Number) -> "RatMatrix":
        s = Fraction(scalar)
        return RatMatrix(self.rows, self.cols, tuple(x * s for x in self.entries))

    __rmul__ = __mul__

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return RatMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        return self + other * -1

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self[i, j] == self[j, i] for i in range(self.rows) for j in range(i)
        )


MatrixLike = Union[RatMatrix, Sequence[Sequence[Number]]]


def as_matrix(m: MatrixLike, cols: int | None = None) -> RatMatrix:
    if isinstance(m, RatMatrix):
        return m
    return RatMatrix.from_rows(m, cols)


def _integer_rows(m: RatMatrix) -> tuple[list[list[int]], int]:
    """Clear denominators row by row; returns the rows and the product of the row scalars."""
    out = []
    scale = 1
    for i in range(m.rows):
        row = m.row(i)
        den = reduce(_lcm, (x.denominator for x in row), 1)
        out.append([int(x * den) for x in row])
        scale *= den
    return out, scale


def _bareiss(rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int], int]:
    """Fraction-free row echelon form.

    Returns the echelon rows, the pivot columns and the sign of the row
    permutation.  After eliminating with pivots in columns ``c_1..c_k`` each
    remaining entry is, up to sign, the minor on the pivot rows/columns plus
    its own row/column, so every division below is exact (Sylvester).
    """
    m = [r[:] for r in rows]
    nrows = len(m)
    pivots: list[int] = []
    sign = 1
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
            sign = -sign
        p = m[r][c]
        for i in range(r + 1, nrows):
            mic = m[i][c]
            row_i = m[i]
            row_r = m[r]
            for j in range(c + 1, ncols):
                row_i[j] = (p * row_i[j] - mic * row_r[j]) // prev
            row_i[c] = 0
        # rows below are already divided; earlier rows untouched
        prev = p
        pivots.append(c)
        r += 1
    return m, pivots, sign


def _int_rows(m: MatrixLike) -> list[list[int]] | None:
    """The rows as plain integer lists when ``m`` is a nested sequence of ints."""
    if isinstance(m, RatMatrix):
        return None
    rows = [list(r) for r in m]
    if all(type(x) is int for r in rows for x in r):
        return rows
    return None


def rank(m: MatrixLike) -> int:
    """Exact rank over the rationals."""
    ints = _int_rows(m)
    if ints is not None:
        return int_rank(ints)
    m = as_matrix(m)
    if m.rows == 0 or m.cols == 0:
        return 0
    rows, _ = _integer_rows(m)
    return len(_bareiss(rows, m.cols)[1])


def int_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix given as rows, skipping rational conversion."""
    if not rows or not rows[0]:
        return 0
    return len(_bareiss([list(r) for r in rows], len(rows[0]))[1])


def det(m: MatrixLike) -> Fraction:
    ints = _int_rows(m)
    if ints is not None and ints and all(len(r) == len(ints) for r in ints):
        ech, pivots, sign = _bareiss(ints, len(ints))
        return Fraction(sign * ech[-1][-1]) if len(pivots) == len(ints) else Fraction(0)
    m = as_matrix(m)
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    if m.rows == 0:
        return Fraction(1)
    rows, scale = _integer_rows(m)
    ech, pivots, sign = _bareiss(rows, m.cols)
    if len(pivots) < m.rows:
        return Fraction(0)
    return Fraction(sign * ech[-1][-1], scale)


def minor(m: MatrixLike, row_idx: Sequence[int], col_idx: Sequence[int]) -> Fraction:
    """Determinant of the submatrix on ``row_idx`` x ``col_idx`` (empty minor is 1)."""
    m = as_matrix(m)
    if len(row_idx) != len(col_idx):
        raise ValueError("row and column index sets differ in size")
    for i in row_idx:
        if not 0 <= i < m.rows:
            raise IndexError(f"row index {i} out of range")
    for j in col_idx:
        if not 0 <= j < m.cols:
            raise IndexError(f"column index {j} out of range")
    return det(m.submatrix(row_idx, col_idx))


def rref(m: MatrixLike) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns.

    The fraction-free echelon form is computed first; rational division
    happens only in the final back substitution.
    """
    m = as_matrix(m)
    if m.rows == 0:
        return [], []
    rows, _ = _integer_rows(m)
    ech, pivots, _ = _bareiss(rows, m.cols)
    red = [[Fraction(x) for x in ech[i]] for i in range(len(pivots))]
    for i in reversed(range(len(pivots))):
        c = pivots[i]
        p = red[i][c]
        red[i] = [x / p for x in red[i]]
        for k in range(i):
            f = red[k][c]
            if f:
                red[k] = [a - f * b for a, b in zip(red[k], red[i])]
    return red, pivots


def kernel_basis(m: MatrixLike, cols: int | None = None) -> list[tuple[int, ...]]:
    """Basis of the right kernel as primitive integer vectors.

    One vector per free column, read off the reduced echelon form, so the
    output is reproducible for a given matrix.
    """
    if isinstance(m, RatMatrix):
        mat = m
    elif len(m) == 0:
        if cols is None:
            raise ValueError("cols must be given for an empty matrix")
        mat = RatMatrix(0, cols, ())
    else:
        mat = as_matrix(m, cols)
    red, pivots = rref(mat)
    free = [j for j in range(mat.cols) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * mat.cols
        v[f] = Fraction(1)
        for row, c in zip(red, pivots):
            v[c] = -row[f]
        basis.append(primitive(v))
    return basis


def row_space_basis(m: MatrixLike) -> list[tuple[int, ...]]:
    """Primitive integer basis of the row space, taken from the reduced echelon rows."""
    red, _ = rref(m)
    return [primitive(r) for r in red]


def inverse(m: MatrixLike) -> RatMatrix:
    m = as_matrix(m)
    n = m.rows
    if n != m.cols:
        raise ValueError("inverse of a non-square matrix")
    aug = RatMatrix.from_rows(
        [list(m.row(i)) + [1 if i == j else 0 for j in range(n)] for i in range(n)], 2 * n
    )
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return RatMatrix.from_rows([row[n:] for row in red], n)


def adjugate(m: MatrixLike) -> RatMatrix:
    """Classical adjoint via cofactors; defined for singular matrices too."""
    m = as_matrix(m)
    n = m.rows
    if n == 1:
        return RatMatrix.identity(1)
    idx = list(range(n))
    return RatMatrix.from_rows(
        [
            [
                (-1) ** (i + j) * minor(m, [r for r in idx if r != j], [c for c in idx if c != i])
                for j in range(n)
            ]
            for i in range(n)
        ],
        n,
    )


def maximal_minors(m: MatrixLike) -> Iterator[tuple[tuple[int, ...], Fraction]]:
    """Yield ``(row subset, value)`` for every maximal minor of a tall or square matrix."""
    m = as_matrix(m)
    size = min(m.rows, m.cols)
    cols = list(range(m.cols))
    for rows in combinations(range(m.rows), size):
        yield rows, minor(m, rows, cols[:size] if m.cols == size else cols)


# --------------------------------------------------------------------------
# Sparse multivariate polynomials


class Poly:
    """Sparse polynomial over the rationals in a fixed number of variables.

    Terms are stored as ``{exponent tuple: coefficient}`` with no zero
    coefficients, so equality is structural.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], Number] | None = None) -> None:
        self.nvars = nvars
        clean: dict[tuple[int, ...], Fraction] = {}
        for exp, c in (terms or {}).items():
            if len(exp) != nvars:
                raise ValueError("exponent length does not match nvars")
            c = Fraction(c)
            if c:
                clean[tuple(exp)] = clean.get(tuple(exp), Fraction(0)) + c
        self.terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def constant(cls, nvars: int, c: Number) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Poly":
        exp = [0] * nvars
        exp[i] = 1
        return cls(nvars, {tuple(exp): 1})

    @classmethod
    def linear(cls, coeffs: Sequence[Number], const: Number = 0) -> "Poly":
        n = len(coeffs)
        terms: dict[tuple[int, ...], Number] = {(0,) * n: const}
        for i, c in enumerate(coeffs):
            exp = [0] * n
            exp[i] = 1
            terms[tuple(exp)] = c
        return cls(n, terms)

    def _coerce(self, other: "Poly | Number") -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return Poly.constant(self.nvars, other)

    def __add__(self, other: "Poly | Number") -> "Poly":
        other = self._coerce(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return Poly(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Poly | Number") -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Number) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other: "Poly | Number") -> "Poly":
        other = self._coerce(other)
        terms: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return Poly(self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        out = Poly.constant(self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(self.nvars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "Poly(0)"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"x{i}^{k}" if k > 1 else f"x{i}" for i, k in enumerate(e) if k)
            parts.append(f"{format_rational(c)}*{mono}" if mono else format_rational(c))
        return "Poly(" + " + ".join(parts) + ")"

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def __call__(self, values: Sequence[Number]) -> Fraction:
        return self.evaluate(values)

    def evaluate(self, values: Sequence[Number]) -> Fraction:
        if len(values) != self.nvars:
            raise ValueError("wrong number of values")
        vals = [Fraction(v) for v in values]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for v, k in zip(vals, e):
                if k:
                    term *= v ** k
            total += term
        return total

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        return sorted(self.terms.items(), reverse=True)


def poly_det(matrix: Sequence[Sequence[Poly]]) -> Poly:
    """Determinant of a square matrix of polynomials by Laplace expansion.

    Sub-determinants on the trailing rows are memoised by column subset, so
    the cost is ``O(2^n n)`` polynomial products rather than ``n!``.
    """
    n = len(matrix)
    if n == 0:
        raise ValueError("empty polynomial matrix; number of variables unknown")
    nvars = matrix[0][0].nvars
    memo: dict[tuple[int, ...], Poly] = {}

    def rec(row: int, cols: tuple[int, ...]) -> Poly:
        if row == n:
            return Poly.constant(nvars, 1)
        if cols in memo:
            return memo[cols]
        total = Poly(nvars)
        for pos, c in enumerate(cols):
            entry = matrix[row][c]
            if entry.is_zero():
                continue
            sub = rec(row + 1, cols[:pos] + cols[pos + 1:])
            term = entry * sub
            total = total + (term if pos % 2 == 0 else -term)
        memo[cols] = total
        return total

    return rec(0, tuple(range(n)))


# --------------------------------------------------------------------------
# Truncated univariate power series


@dataclass(frozen=True)
class TruncSeries:
    """Power series ``c_0 + c_1 t + ... + c_T t^T`` known exactly up to ``t^T``."""

    coefficients: tuple[Fraction, ...]
    order: int

    def __post_init__(self) -> None:
        if self.order < 1:
            raise ValueError("truncation order must be at least 1")
        coeffs = tuple(Fraction(c) for c in self.coefficients[: self.order + 1])
        coeffs += (Fraction(0),) * (self.order + 1 - len(coeffs))
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_coefficients(cls, coeffs: Sequence[Number], order: int | None = None) -> "TruncSeries":
        if order is None:
            order = max(len(coeffs) - 1, 1)
        return cls(tuple(Fraction(c) for c in coeffs), order)

    @classmethod
    def linear(cls, c0: Number, c1: Number, order: int) -> "TruncSeries":
        return cls((Fraction(c0), Fraction(c1)), order)

    @property
    def valuation(self) -> int | float:
        return series_valuation(self)

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        order = min(self.order, other.order)
        return TruncSeries(tuple(a + b for a, b in zip(self.coefficients, other.coefficients)), order)

    def __neg__(self) -> "TruncSeries":
        return TruncSeries(tuple(-c for c in self.coefficients), self.order)

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return self + (-other)

    def scale(self, s: Number) -> "TruncSeries":
        s = Fraction(s)
        return TruncSeries(tuple(c * s for c in self.coefficients), self.order)

    def __mul__(self, other: "TruncSeries | Number") -> "TruncSeries":
        if not isinstance(other, TruncSeries):
            return self.scale(other)
        order = min(self.order, other.order)
        a, b = self.coefficients, other.coefficients
        out = [Fraction(0)] * (order + 1)
        for i in range(order + 1):
            if a[i]:
                for j in range(order + 1 - i):
                    if b[j]:
                        out[i + j] += a[i] * b[j]
        return TruncSeries(tuple(out), order)

    __rmul__ = __mul__

    def inverse(self) -> "TruncSeries":
        """Multiplicative inverse of a unit (nonzero constant term)."""
        a = self.coefficients
        if a[0] == 0:
            raise ZeroDivisionError("series with zero constant term is not a unit")
        inv = [Fraction(0)] * (self.order + 1)
        inv[0] = 1 / a[0]
        for k in range(1, self.order + 1):
            inv[k] = -sum((a[j] * inv[k - j] for j in range(1, k + 1)), Fraction(0)) / a[0]
        return TruncSeries(tuple(inv), self.order)

    @classmethod
    def zero(cls, order: int) -> "TruncSeries":
        return cls((), order)

    @classmethod
    def one(cls, order: int) -> "TruncSeries":
        return cls((Fraction(1),), order)


def series_valuation(s: TruncSeries) -> int | float:
    """Index of the first nonzero coefficient, or :data:`INFINITY` if zero to order ``T``."""
    return next((i for i, c in enumerate(s.coefficients) if c != 0), INFINITY)


# --------------------------------------------------------------------------
# Seeded sampling


def random_rational(rng: random.Random, height: int = 100) -> Fraction:
    """Rational with numerator in ``[-height, height]`` and denominator in ``[1, height]``."""
    return Fraction(rng.randint(-height, height), rng.randint(1, height))


def random_nonzero_rational(rng: random.Random, height: int = 100) -> Fraction:
    while True:
        x = random_rational(rng, height)
        if x:
            return x


def random_int_vector(rng: random.Random, length: int, height: int = 100) -> tuple[int, ...]:
    """Nonzero integer vector with entries in ``[-height, height]``."""
    while True:
        v = tuple(rng.randint(-height, height) for _ in range(length))
        if any(v):
            return v
