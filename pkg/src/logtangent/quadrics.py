"""Quadrics through dual points: condition matrices, low-rank witnesses, duals and rulings.

All quadrics live in the dual projective space unless stated otherwise and
are stored as symmetric integer gram matrices, so ``Q(x) = x^T G x`` and
``B(x, y) = x^T G y``.  Unknowns for linear systems of quadrics are the
upper-triangular gram entries ``g_ab`` (``a <= b``) in lexicographic order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from math import comb, isqrt
from typing import Iterable, Sequence

from .arrangement import Arrangement, ProjPoint, dual_points
from .errors import DegenerateArrangementError
from .exact import (
    Number,
    RatMatrix,
    adjugate,
    int_rank,
    inverse,
    kernel_basis,
    primitive,
    rank,
    row_space_basis,
)

DEFAULT_HEIGHT = 20
DEFAULT_BUDGET = 10_000


def _pairs(n: int) -> list[tuple[int, int]]:
    return list(combinations_with_replacement(range(n + 1), 2))


@dataclass(frozen=True)
class Quadric:
    """Symmetric gram matrix up to scale, canonical primitive with first nonzero entry positive."""

    gram: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        rows = [tuple(r) for r in self.gram]
        size = len(rows)
        if any(len(r) != size for r in rows):
            raise ValueError("gram matrix must be square")
        if any(rows[i][j] != rows[j][i] for i in range(size) for j in range(i)):
            raise ValueError("gram matrix must be symmetric")
        flat = primitive([x for r in rows for x in r])
        object.__setattr__(self, "gram", tuple(flat[i * size:(i + 1) * size] for i in range(size)))

    @classmethod
    def from_upper(cls, n: int, upper: Sequence[Number]) -> "Quadric":
        """Build from gram entries ``g_ab`` (``a <= b``) in lexicographic order."""
        g = [[Fraction(0)] * (n + 1) for _ in range(n + 1)]
        for (a, b), v in zip(_pairs(n), upper):
            g[a][b] = g[b][a] = Fraction(v)
        return cls.from_matrix(g)

    @classmethod
    def from_matrix(cls, m: RatMatrix | Sequence[Sequence[Number]]) -> "Quadric":
        rows = m.tolist() if isinstance(m, RatMatrix) else [list(r) for r in m]
        size = len(rows)
        flat = primitive([x for r in rows for x in r])
        return cls(tuple(flat[i * size:(i + 1) * size] for i in range(size)))

    @classmethod
    def from_monomials(cls, n: int, coeffs: Sequence[Number]) -> "Quadric":
        """From coefficients of ``Z_a Z_b`` (``a <= b``, lex order); off-diagonal entries are halved."""
        upper = [Fraction(c) if a == b else Fraction(c) / 2 for (a, b), c in zip(_pairs(n), coeffs)]
        return cls.from_upper(n, upper)

    @property
    def n(self) -> int:
        return len(self.gram) - 1

    @property
    def matrix(self) -> RatMatrix:
        return RatMatrix.from_rows(self.gram, self.n + 1)

    @property
    def rank(self) -> int:
        return rank(self.gram)

    def upper(self) -> tuple[int, ...]:
        return tuple(self.gram[a][b] for a, b in _pairs(self.n))

    def monomials(self) -> tuple[int, ...]:
        """Coefficients of ``Z_a Z_b`` in lex order (off-diagonal ones doubled)."""
        return tuple(self.gram[a][b] * (1 if a == b else 2) for a, b in _pairs(self.n))

    def bilinear(self, x: Sequence[Number], y: Sequence[Number]) -> Fraction:
        return sum((Fraction(x[i]) * self.gram[i][j] * y[j] for i in range(self.n + 1) for j in range(self.n + 1)), Fraction(0))

    def __call__(self, x: Sequence[Number]) -> Fraction:
        return self.bilinear(x, x)

    def kernel(self) -> list[tuple[int, ...]]:
        return kernel_basis(self.gram)

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.gram]


@dataclass(frozen=True)
class QuadricSpace:
    """Linear system of quadrics; ``basis`` is independent and ``dim = C(n+2,2) - conditions_rank``."""

    n: int
    basis: tuple[Quadric, ...]
    conditions_rank: int

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_empty(self) -> bool:
        return not self.basis

    def combination(self, coeffs: Sequence[Number]) -> Quadric | None:
        """Linear combination of the basis, or ``None`` if it vanishes."""
        if len(coeffs) != self.dim:
            raise ValueError("one coefficient per basis element")
        upper = [sum((Fraction(c) * q.upper()[t] for c, q in zip(coeffs, self.basis)), Fraction(0))
                 for t in range(comb(self.n + 2, 2))]
        return Quadric.from_upper(self.n, upper) if any(upper) else None

    def contains(self, q: Quadric) -> bool:
        if q.n != self.n:
            return False
        if not self.basis:
            return False
        rows = [b.upper() for b in self.basis]
        return rank(rows + [q.upper()]) == len(rows)


@dataclass(frozen=True)
class DualSurfaceWitness:
    """Dual of a rank 3 or 4 quadric.

    ``carrier`` lists covectors cutting out the span of the dual (a P^2 or
    P^3); ``carrier_basis`` has rows ``b_0..b_{r-1}`` spanning it, and
    ``surface`` is the dual quadric in the coordinates ``u`` of ``y = sum u_i b_i``.
    """

    source: Quadric
    carrier: tuple[tuple[int, ...], ...]
    carrier_basis: tuple[tuple[int, ...], ...]
    surface: Quadric

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "carrier_equations": [list(v) for v in self.carrier],
            "carrier_basis": [list(v) for v in self.carrier_basis],
            "surface": self.surface.to_json(),
        }


# --------------------------------------------------------------------------
# Conditions


def veronese_row(p: ProjPoint | Sequence[Number]) -> tuple[Fraction, ...]:
    """Quadratic monomials ``Z_a Z_b`` (``a <= b``, lex order) evaluated at ``p``."""
    x = [v if type(v) is int else Fraction(v) for v in p]
    return tuple(x[a] * x[b] for a, b in combinations_with_replacement(range(len(x)), 2))


def conditions_rank(points: Sequence[ProjPoint | Sequence[Number]]) -> int:
    """Number of independent conditions the points impose on quadrics."""
    if not points:
        return 0
    return rank([veronese_row(p) for p in points])


def _point_condition(n: int, p: Sequence[Number]) -> list[Number]:
    return [p[a] * p[b] * (1 if a == b else 2) for a, b in _pairs(n)]


def _pair_condition(n: int, u: Sequence[Number], v: Sequence[Number]) -> list[Number]:
    # B(u, v) as a linear form in the upper gram entries
    return [u[a] * v[a] if a == b else u[a] * v[b] + u[b] * v[a] for a, b in _pairs(n)]


def plane_basis(plane: Sequence[Sequence[Number]], n: int) -> list[tuple[int, ...]]:
    """Basis of the linear space cut out by the given covectors."""
    return kernel_basis([list(r) for r in plane], n + 1)


def quadrics_through(
    points: Sequence[ProjPoint | Sequence[Number]],
    plane: Sequence[Sequence[Number]] | None = None,
    n: int | None = None,
) -> QuadricSpace:
    """Quadrics through ``points`` that vanish identically on the plane cut out by ``plane``.

    ``plane`` is a list of covectors (two of them for a codimension-2 plane);
    vanishing on it is imposed as ``B(w_a, w_b) = 0`` over a basis ``w``.
    """
    if n is None:
        if points:
            n = len(points[0]) - 1
        elif plane:
            n = len(plane[0]) - 1
        else:
            raise ValueError("ambient dimension unknown: pass n")
    rows = [_point_condition(n, list(p)) for p in points]
    if plane:
        ws = plane_basis(plane, n)
        for i, j in combinations_with_replacement(range(len(ws)), 2):
            rows.append(_pair_condition(n, ws[i], ws[j]))
    size = comb(n + 2, 2)
    r = rank(rows) if rows else 0
    basis = tuple(Quadric.from_upper(n, v) for v in kernel_basis(rows, size))
    return QuadricSpace(n, basis, r)


def ample_mod_boundary_criterion(a: Arrangement) -> bool:
    """The dual points impose at least ``4n-2`` independent conditions on quadrics."""
    if not a.general_position:
        raise DegenerateArrangementError("criterion is only meaningful in general position")
    return conditions_rank(dual_points(a)) >= 4 * a.n - 2


# --------------------------------------------------------------------------
# Witness search


def low_rank_witness(
    space: QuadricSpace,
    max_rank: int = 4,
    rng: random.Random | None = None,
    height: int = DEFAULT_HEIGHT,
    budget: int = DEFAULT_BUDGET,
) -> Quadric | None:
    """A member of ``space`` of rank at most ``max_rank``, or ``None``.

    ``None`` after a random search does not prove that no such member exists.
    """
    for q in space.basis:
        if q.rank <= max_rank:
            return q
    if space.dim <= 1:
        return None
    rng = rng if rng is not None else random.Random(0)
    N = space.n + 1
    grams = [q.gram for q in space.basis]
    for _ in range(budget):
        coeffs = [rng.randint(-height, height) for _ in range(space.dim)]
        g = [[sum(c * G[i][j] for c, G in zip(coeffs, grams)) for j in range(N)] for i in range(N)]
        if any(any(r) for r in g) and int_rank(g) <= max_rank:
            return Quadric.from_matrix(g)
    return None


def is_reducible(q: Quadric) -> bool:
    """Rank at most 2: a union of two hyperplanes (possibly conjugate or equal)."""
    return q.rank <= 2


# --------------------------------------------------------------------------
# Duals


def _decompose(q: Quadric) -> tuple[list[tuple[int, ...]], RatMatrix]:
    """Write ``G = B^T K B`` with ``B`` a row basis of the column space of ``G``."""
    basis = row_space_basis(q.gram)
    B = RatMatrix.from_rows(basis, q.n + 1)
    BBt_inv = inverse(B @ B.T)
    K = BBt_inv @ B @ q.matrix @ B.T @ BBt_inv
    return basis, K


def dual_quadric(q: Quadric) -> DualSurfaceWitness:
    r = q.rank
    if r not in (3, 4):
        raise ValueError(f"dual surfaces are produced for rank 3 or 4, got rank {r}")
    basis, K = _decompose(q)
    surface = Quadric.from_matrix(adjugate(K))
    return DualSurfaceWitness(q, tuple(q.kernel()), tuple(basis), surface)


def embed_dual(w: DualSurfaceWitness) -> Quadric:
    """Dualize the surface again and pull it back to the ambient space: ``B^T adj(S) B``."""
    B = RatMatrix.from_rows(w.carrier_basis, w.source.n + 1)
    return Quadric.from_matrix(B.T @ adjugate(w.surface.matrix) @ B)


# --------------------------------------------------------------------------
# Rulings


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    a, b = isqrt(x.numerator), isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


def _point_on(q: Quadric, base: Sequence[Number], rng: random.Random, height: int) -> tuple[int, ...] | None:
    """Second intersection of ``q`` with a random line through the point ``base`` of ``q``."""
    v = [rng.randint(-height, height) for _ in range(q.n + 1)]
    qv = q(v)
    if qv == 0:
        return None
    bv = q.bilinear(base, v)
    pt = [qv * Fraction(b) - 2 * bv * x for b, x in zip(base, v)]
    return primitive(pt) if any(pt) else None


def _ruling_through(q: Quadric, point: Sequence[int]) -> list[list[tuple[int, ...]]] | None:
    """Rational maximal linear spaces of a rank 3 or 4 quadric through a smooth point.

    Each is returned as a basis of an (n-1)-dimensional linear space.
    ``None`` means the two rulings through the point are conjugate over a
    quadratic field; that class does not depend on the point.
    """
    vertex = q.kernel()
    r = q.rank
    if r == 3:
        return [vertex + [tuple(point)]]
    # tangent hyperplane at the point, modulo span(vertex, point)
    tangent = kernel_basis([[q.bilinear(point, e) for e in _unit_vectors(q.n)]], q.n + 1)
    fixed = vertex + [tuple(point)]
    comp = _complement(tangent, fixed)
    if len(comp) != 2:
        return []
    u, w = comp
    a, b, c = q(u), 2 * q.bilinear(u, w), q(w)
    # q(s u + t w) = a s^2 + b s t + c t^2
    disc = b * b - 4 * a * c
    root = _rational_sqrt(disc)
    if root is None:
        return None
    if a == 0:
        dirs = [(1, 0), (-c, b)] if b != 0 else [(1, 0)]
    else:
        dirs = [(-b + root, 2 * a), (-b - root, 2 * a)]
    out = []
    for s, t in dirs:
        vec = [Fraction(s) * x + Fraction(t) * y for x, y in zip(u, w)]
        out.append(fixed + [primitive(vec)])
    return out


def random_points_on(
    q: Quadric, base: Sequence[int], count: int, rng: random.Random, height: int = DEFAULT_HEIGHT
) -> list[tuple[int, ...]]:
    """Distinct rational points of ``q`` obtained from secants through the rational point ``base``."""
    if q(base) != 0:
        raise ValueError("base point does not lie on the quadric")
    if not any(q.bilinear(base, e) for e in _unit_vectors(q.n)):
        raise ValueError("base point is singular on the quadric: secants through it meet nothing new")
    out: list[tuple[int, ...]] = []
    while len(out) < count:
        pt = _point_on(q, base, rng, height)
        if pt is not None and pt not in out and pt != primitive(base):
            out.append(pt)
    return out


def _unit_vectors(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n + 1)] for i in range(n + 1)]


def _complement(space: list[tuple[int, ...]], sub: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Vectors of ``space`` completing a basis of ``sub`` (greedy, deterministic)."""
    chosen = list(sub)
    out = []
    for v in space:
        if rank(chosen + [v]) > len(chosen):
            chosen.append(v)
            out.append(v)
    return out


@dataclass(frozen=True)
class Ruling:
    """A maximal linear space of a scroll and the line of P^n it is dual to."""

    plane: tuple[tuple[int, ...], ...]
    line: tuple[tuple[int, ...], tuple[int, ...]]


def rational_rulings(
    q: Quadric,
    seeds: Sequence[Sequence[int]],
    count: int,
    rng: random.Random,
    avoid: Iterable[Sequence[int]] = (),
    height: int = DEFAULT_HEIGHT,
    attempts: int = 200,
) -> list[Ruling]:
    """Up to ``count`` rational rulings of a rank 3 or 4 quadric, found from rational points.

    ``seeds`` are known rational points of ``q`` (e.g. dual points); new
    points come from secants through them.  Rulings containing a point of
    ``avoid`` are skipped.  A rank-4 quadric whose rulings are not rational
    yields nothing.
    """
    if q.rank not in (3, 4) or not seeds:
        return []
    avoid = [tuple(x) for x in avoid]
    found: list[Ruling] = []
    seen: set[tuple] = set()
    for t in range(attempts):
        if len(found) >= count:
            break
        base = seeds[t % len(seeds)]
        pt = _point_on(q, base, rng, height)
        if pt is None or rank(q.kernel() + [pt]) == len(q.kernel()):
            continue
        planes = _ruling_through(q, pt)
        if planes is None:
            break
        for plane in planes:
            if any(rank(plane + [p]) == len(plane) for p in avoid):
                continue
            key = tuple(row_space_basis(plane))
            if key in seen:
                continue
            seen.add(key)
            pts = kernel_basis(plane, q.n + 1)
            found.append(Ruling(tuple(plane), (pts[0], pts[1])))
            if len(found) >= count:
                break
    return found


# --------------------------------------------------------------------------
# Dimension of the rank <= 4 locus


def _sym_unit(n: int, a: int, b: int) -> list[list[int]]:
    e = [[0] * (n + 1) for _ in range(n + 1)]
    e[a][b] = e[b][a] = 1
    return e


def random_rank4_quadric(n: int, rng: random.Random, height: int = DEFAULT_HEIGHT) -> Quadric:
    """Sum of four signed squares of random linear forms, retried until the rank is exactly 4."""
    if n < 3:
        raise ValueError("rank 4 needs n >= 3")
    while True:
        forms = [[rng.randint(-height, height) for _ in range(n + 1)] for _ in range(4)]
        signs = [rng.choice((-1, 1)) for _ in range(4)]
        g = [[sum(s * f[i] * f[j] for s, f in zip(signs, forms)) for j in range(n + 1)] for i in range(n + 1)]
        if any(any(r) for r in g) and rank(g) == 4:
            return Quadric.from_matrix(g)


def tangent_dim_orbit(q: Quadric) -> int:
    """Projective dimension of ``span{X^T G + G X}`` over elementary ``X``."""
    n = q.n
    G = q.matrix
    vecs = []
    for a in range(n + 1):
        for b in range(n + 1):
            X = RatMatrix.from_rows([[int(i == a and j == b) for j in range(n + 1)] for i in range(n + 1)], n + 1)
            S = X.T @ G + G @ X
            vecs.append([S[i, j] for i, j in _pairs(n)])
    return rank(vecs) - 1


def tangent_dim_minors(q: Quadric, size: int = 5) -> int:
    """Projective dimension of the common kernel of the differentials of all ``size``-minors.

    The derivative of ``det(G[R, C])`` along a symmetric direction ``E`` is
    ``sum adj(G[R,C])[j][i] * E[R_i][C_j]``.
    """
    n = q.n
    N = n + 1
    directions = [_sym_unit(n, a, b) for a, b in _pairs(n)]
    jac = []
    if size <= N:
        for R in combinations(range(N), size):
            for C in combinations(range(N), size):
                adj = adjugate(q.matrix.submatrix(R, C))
                jac.append([
                    sum((adj[j, i] * E[R[i]][C[j]] for i in range(size) for j in range(size)), Fraction(0))
                    for E in directions
                ])
    dim = len(directions) - (rank(jac) if jac else 0)
    return dim - 1
