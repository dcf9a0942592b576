"""Superjumping lines: the tangency system, its dual quadric test, the map psi and its scroll.

A global section of the log tangent bundle on a line ``l = span(p, q)`` is
a tuple ``L = (L_0, ..., L_n)`` of binary linear forms ``L_m = a_m s + b_m t``
modulo the Euler section ``(p, q)``, tangent to ``H_i`` at the parameter
``(s_i, t_i) = (l_i(q), -l_i(p))`` where ``l`` meets ``H_i``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arrangement import Arrangement, ProjPoint, dual_points
from .errors import DegenerateArrangementError, InconsistencyError, WitnessError
from .exact import (
    Number,
    RatMatrix,
    dot,
    is_proportional,
    kernel_basis,
    primitive,
    random_int_vector,
    rank,
)
from .quadrics import Quadric, QuadricSpace, is_reducible, plane_basis, quadrics_through


@dataclass(frozen=True)
class ProjLine:
    """Line through two distinct points.

    ``dual_plane`` holds the two equations ``[p; q]`` of ``W = l*`` in the
    dual space; ``plane_basis`` spans ``W`` itself (the hyperplanes through ``l``).
    """

    p: tuple[int, ...]
    q: tuple[int, ...]

    def __post_init__(self) -> None:
        p, q = primitive(self.p), primitive(self.q)
        if len(p) != len(q):
            raise ValueError("points of different dimensions")
        if is_proportional(p, q):
            raise ValueError("a line needs two distinct points")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @classmethod
    def from_plane(cls, plane: Sequence[Sequence[Number]]) -> "ProjLine":
        """The line annihilated by an (n-2)-plane of hyperplanes."""
        n = len(plane[0]) - 1
        pts = kernel_basis([list(r) for r in plane], n + 1)
        if len(pts) != 2:
            raise ValueError("plane does not have codimension 2")
        return cls(pts[0], pts[1])

    @property
    def n(self) -> int:
        return len(self.p) - 1

    @property
    def dual_plane(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return (self.p, self.q)

    @property
    def plane_basis(self) -> list[tuple[int, ...]]:
        return plane_basis(self.dual_plane, self.n)

    def point(self, s: Number, t: Number) -> tuple[Fraction, ...]:
        return tuple(Fraction(s) * a + Fraction(t) * b for a, b in zip(self.p, self.q))

    def to_json(self) -> list[list[int]]:
        return [list(self.p), list(self.q)]


@dataclass(frozen=True)
class TangencySystem:
    matrix: RatMatrix
    meeting_points: tuple[tuple[Fraction, Fraction], ...]


def tangency_system(a: Arrangement, l: ProjLine) -> TangencySystem:
    """One row per hyperplane: ``sum_m (l_i)_m L_m(s_i, t_i)`` in the unknowns ``(a_0..a_n, b_0..b_n)``."""
    rows = []
    meets = []
    for h in a.hyperplanes:
        s, t = h(l.q), -h(l.p)
        meets.append((s, t))
        rows.append([x * s for x in h.covector] + [x * t for x in h.covector])
    return TangencySystem(RatMatrix.from_rows(rows, 2 * (a.n + 1)), tuple(meets))


def _boundary(a: Arrangement, meets: Sequence[tuple[Fraction, Fraction]]) -> list[int]:
    return [i for i, (s, t) in enumerate(meets) if s == 0 and t == 0]


def _through_stratum(meets: Sequence[tuple[Fraction, Fraction]]) -> list[tuple[int, int]]:
    out = []
    for i in range(len(meets)):
        for j in range(i + 1, len(meets)):
            if is_proportional(meets[i], meets[j]):
                out.append((i, j))
    return out


def _reduce_mod(v: Sequence[Number], e: Sequence[Number]) -> list[Fraction]:
    piv = next(i for i, x in enumerate(e) if x != 0)
    f = Fraction(v[piv]) / e[piv]
    return [Fraction(x) - f * y for x, y in zip(v, e)]


@dataclass(frozen=True)
class SuperjumpingResult:
    """Outcome of the tangency test.

    ``witness`` is a kernel vector ``(a_0..a_n, b_0..b_n)`` reduced modulo
    the Euler vector; ``boundary`` lists hyperplanes containing the line and
    ``stratum_pairs`` pairs of hyperplanes meeting the line at one point.
    """

    superjumping: bool
    witness: tuple[int, ...] | None
    kernel_dim: int
    boundary: tuple[int, ...] = ()
    stratum_pairs: tuple[tuple[int, int], ...] = ()

    def __bool__(self) -> bool:
        return self.superjumping

    @property
    def in_boundary(self) -> bool:
        return bool(self.boundary)


def euler_vector(l: ProjLine) -> tuple[int, ...]:
    return l.p + l.q


def is_superjumping(a: Arrangement, l: ProjLine) -> SuperjumpingResult:
    if l.n != a.n:
        raise ValueError("line and arrangement live in different spaces")
    system = tangency_system(a, l)
    boundary = _boundary(a, system.meeting_points)
    pairs = tuple(_through_stratum([m for i, m in enumerate(system.meeting_points) if i not in boundary]))
    if boundary:
        return SuperjumpingResult(True, None, 2 * a.n + 2 - rank(system.matrix), tuple(boundary), pairs)
    kernel = kernel_basis(system.matrix)
    e = euler_vector(l)
    witness = None
    if len(kernel) >= 2:
        for v in kernel:
            red = _reduce_mod(v, e)
            if any(red):
                witness = primitive(red)
                break
    return SuperjumpingResult(len(kernel) >= 2, witness, len(kernel), (), pairs)


@dataclass(frozen=True)
class DualResult:
    superjumping: bool
    space: QuadricSpace
    reducible_members: bool

    def __bool__(self) -> bool:
        return self.superjumping


def is_superjumping_dual(a: Arrangement, l: ProjLine) -> DualResult:
    """Whether some quadric of the dual space contains ``W = l*`` and every dual point.

    ``reducible_members`` records that the first basis quadric has rank at
    most 2 (a hyperplane pair rather than a genuine scroll).
    """
    if l.n != a.n:
        raise ValueError("line and arrangement live in different spaces")
    if any(h(l.p) == 0 and h(l.q) == 0 for h in a.hyperplanes):
        raise DegenerateArrangementError("the dual test assumes the line is not inside a hyperplane")
    space = quadrics_through(dual_points(a), plane=l.dual_plane, n=a.n)
    reducible = bool(space.basis) and is_reducible(space.basis[0])
    return DualResult(not space.is_empty(), space, reducible)


@dataclass(frozen=True)
class PsiMap:
    """Degree-1 map ``psi(s, t) = alpha s + beta t`` from the line into ``H_0``."""

    alpha: tuple[int, ...]
    beta: tuple[int, ...]

    def __call__(self, s: Number, t: Number) -> tuple[Fraction, ...]:
        return tuple(Fraction(s) * x + Fraction(t) * y for x, y in zip(self.alpha, self.beta))

    @property
    def coefficients(self) -> list[tuple[int, int]]:
        return list(zip(self.alpha, self.beta))

    @property
    def degree(self) -> int:
        return rank([self.alpha, self.beta]) - 1

    def to_json(self) -> dict:
        return {"alpha": list(self.alpha), "beta": list(self.beta)}


def build_psi(a: Arrangement, l: ProjLine, witness: Sequence[Number]) -> PsiMap:
    """Shift the section ``L`` by a multiple of the Euler section so it lands in ``H_0``.

    ``l_0(L)`` and ``l_0(s p + t q)`` are binary linear forms with the
    common zero ``(s_0, t_0)``, hence proportional: ``l_0(L) = lam * l_0(phi)``,
    and ``psi = L - lam * phi`` works.
    """
    n = a.n
    w = [Fraction(x) for x in witness]
    if len(w) != 2 * (n + 1):
        raise WitnessError(f"witness must have {2 * (n + 1)} entries")
    system = tangency_system(a, l)
    if any(dot(system.matrix.row(i), w) != 0 for i in range(system.matrix.rows)):
        raise WitnessError("witness is not in the kernel of the tangency system")
    if _boundary(a, system.meeting_points):
        raise DegenerateArrangementError("line lies in the boundary")
    alpha, beta = w[: n + 1], w[n + 1:]
    h0 = a.hyperplanes[0]
    la, lb = h0(alpha), h0(beta)
    pa, pb = h0(l.p), h0(l.q)
    lam = la / pa if pa != 0 else lb / pb
    if la != lam * pa or lb != lam * pb:
        raise InconsistencyError("l_0(L) is not proportional to l_0(phi)")
    a_new = [x - lam * y for x, y in zip(alpha, l.p)]
    b_new = [x - lam * y for x, y in zip(beta, l.q)]
    if not any(a_new) and not any(b_new):
        raise WitnessError("witness lies in the Euler family")
    scaled = primitive(a_new + b_new)
    psi = PsiMap(scaled[: n + 1], scaled[n + 1:])
    _check_psi(a, psi, system.meeting_points)
    return psi


def _check_psi(a: Arrangement, psi: PsiMap, meets: Sequence[tuple[Fraction, Fraction]]) -> None:
    h0 = a.hyperplanes[0]
    if h0(psi.alpha) != 0 or h0(psi.beta) != 0:
        raise InconsistencyError("psi does not map into H_0")
    for i, (h, (s, t)) in enumerate(zip(a.hyperplanes, meets)):
        if h(psi(s, t)) != 0:
            raise InconsistencyError(f"psi(l cap H_{i}) is not in H_{i}")
    if a.c >= a.n + 1 and psi.degree != 1:
        raise InconsistencyError("psi is constant")


def psi_incidence_holds(a: Arrangement, l: ProjLine, psi: PsiMap) -> bool:
    """``psi(l cap H_i)`` lies in ``H_0 cap H_i`` for every ``i``."""
    system = tangency_system(a, l)
    try:
        _check_psi(a, psi, system.meeting_points)
    except InconsistencyError:
        return False
    return True


def section_quadric(l: ProjLine, alpha: Sequence[Number], beta: Sequence[Number]) -> list[list[Fraction]]:
    """Gram matrix of ``h -> h(L(h.q, -h.p))``, the symmetrization of ``alpha q^T - beta p^T``."""
    N = len(l.p)
    m = [[Fraction(alpha[i]) * l.q[j] - Fraction(beta[i]) * l.p[j] for j in range(N)] for i in range(N)]
    return [[(m[i][j] + m[j][i]) / 2 for j in range(N)] for i in range(N)]


def scroll_from_psi(l: ProjLine, psi: PsiMap, a: Arrangement) -> Quadric:
    """The quadric ``X(psi)`` swept by the hyperplanes through ``x`` and ``psi(x)``, ``x`` on ``l``.

    Checked three ways: it vanishes on ``W`` and at every dual point, each
    sampled ruling ``{h : h(x) = h(psi(x)) = 0}`` lies on it, and it belongs
    to the linear system computed by :func:`quadrics_through`.
    """
    gram = section_quadric(l, psi.alpha, psi.beta)
    if not any(any(r) for r in gram):
        raise InconsistencyError("psi gives the zero quadric")
    X = Quadric.from_matrix(gram)
    for i, pt in enumerate(dual_points(a)):
        if X(pt.coords) != 0:
            raise InconsistencyError(f"scroll misses dual point {i}")
    for s, t in [(1, 0), (0, 1), (1, 1), (1, -1), (2, 3)]:
        x = l.point(s, t)
        y = psi(s, t)
        if is_proportional(x, y) or not any(y):
            eqs = [x]
        else:
            eqs = [x, y]
        ruling = kernel_basis([list(e) for e in eqs], a.n + 1)
        if len(eqs) == 2 and any(X.bilinear(u, v) != 0 for u in ruling for v in ruling):
            raise InconsistencyError("scroll does not contain the ruling through psi")
    space = quadrics_through(dual_points(a), plane=l.dual_plane, n=a.n)
    if space.is_empty() or not space.contains(X):
        raise InconsistencyError("linear system of quadrics through W and the dual points does not contain X(psi)")
    return X


@dataclass
class SamplingStats:
    trials: int
    hits: int = 0
    boundary_hits: int = 0
    stratum_lines: int = 0
    witnesses: list[tuple[ProjLine, tuple[int, ...]]] = field(default_factory=list)

    @property
    def hit_rate(self) -> Fraction:
        return Fraction(self.hits, self.trials) if self.trials else Fraction(0)


def random_line(n: int, rng: random.Random, height: int = 100) -> ProjLine:
    while True:
        p = random_int_vector(rng, n + 1, height)
        q = random_int_vector(rng, n + 1, height)
        if not is_proportional(p, q):
            return ProjLine(p, q)


def cross_check(a: Arrangement, l: ProjLine) -> SuperjumpingResult:
    """Run both tests; raise :class:`InconsistencyError` if they disagree off the boundary."""
    res = is_superjumping(a, l)
    if res.in_boundary:
        return res
    dual = is_superjumping_dual(a, l)
    if bool(res) != bool(dual):
        raise InconsistencyError(
            f"tangency test says {bool(res)} but quadric test says {bool(dual)} for line {l.to_json()}"
        )
    return res


def sample_superjumping_locus(
    a: Arrangement,
    trials: int,
    seed: int | random.Random = 0,
    height: int = 100,
    check: bool = True,
) -> SamplingStats:
    """Test ``trials`` seeded random lines; with ``check`` both tests must agree on each."""
    if not a.general_position:
        raise DegenerateArrangementError("sampling needs an arrangement in general position")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    stats = SamplingStats(trials)
    for _ in range(trials):
        l = random_line(a.n, rng, height)
        res = cross_check(a, l) if check else is_superjumping(a, l)
        if res.stratum_pairs:
            stats.stratum_lines += 1
        if res:
            stats.hits += 1
            if res.in_boundary:
                stats.boundary_hits += 1
            elif res.witness is not None:
                stats.witnesses.append((l, res.witness))
    return stats


def lines_tangent_to_conic(q: Quadric, points: Sequence[Sequence[int]]) -> list[ProjLine]:
    """For n = 2: the line of P^2 dual to each point of a conic in the dual plane."""
    out = []
    for pt in points:
        if q(pt) != 0:
            raise ValueError(f"point {tuple(pt)} is not on the conic")
        out.append(ProjLine.from_plane([pt]))
    return out
