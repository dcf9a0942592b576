"""The evaluation morphism Phi in the affine chart z_0 = 1 of a normalized arrangement.

A log direction at ``z`` is written ``sum xi_i z_i d/dz_i``; its image is

    V = [xi_1 : ... : xi_n : (sum_i a_i^j xi_i z_i) / l_j(1, z) : ...]

and the fibre through ``V`` is cut out by the ``k x (n+1)`` matrix
``M(V)_{j,i} = a_i^j (V_{n+j} - V_i)`` with the convention ``V_0 = 0``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .arrangement import Arrangement, normalize
from .errors import DegenerateArrangementError, InconsistencyError
from .exact import (
    Number,
    Poly,
    RatMatrix,
    kernel_basis,
    poly_det,
    primitive,
    random_nonzero_rational,
    rank,
)


@dataclass(frozen=True)
class LogDirection:
    z: tuple[Fraction, ...]
    xi: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "z", tuple(Fraction(x) for x in self.z))
        object.__setattr__(self, "xi", tuple(Fraction(x) for x in self.xi))
        if len(self.z) != len(self.xi):
            raise ValueError("base point and direction must have the same length")
        if not any(self.xi):
            raise ValueError("direction must be nonzero")


def _require_normalized(a: Arrangement) -> None:
    if not a.normalized:
        raise DegenerateArrangementError("expected a normalized arrangement (first n+1 hyperplanes = coordinates)")


def chart_values(a: Arrangement, z: Sequence[Number]) -> list[Fraction]:
    """``l_j(1, z)`` for the extra hyperplanes ``j = 1..k``."""
    pt = (Fraction(1),) + tuple(Fraction(x) for x in z)
    return [h(pt) for h in a.hyperplanes[a.n + 1:]]


def phi_eval(a: Arrangement, d: LogDirection, boundary: bool = False) -> tuple[int, ...]:
    """Image of a log direction, canonicalized.

    With ``boundary`` the coordinates ``z_i`` may vanish: the frame
    ``z_i d/dz_i`` extends across ``H_i`` and so does the formula.
    The extra hyperplanes must still miss ``z``.
    """
    _require_normalized(a)
    n = a.n
    if len(d.z) != n:
        raise ValueError(f"base point needs {n} affine coordinates")
    if not boundary:
        for i, x in enumerate(d.z, start=1):
            if x == 0:
                raise DegenerateArrangementError(f"base point lies on hyperplane {i}")
    vals = chart_values(a, d.z)
    V = list(d.xi)
    for j, (h, lj) in enumerate(zip(a.hyperplanes[n + 1:], vals), start=1):
        if lj == 0:
            raise DegenerateArrangementError(f"base point lies on hyperplane {n + j}")
        V.append(sum((h.covector[i] * d.xi[i - 1] * d.z[i - 1] for i in range(1, n + 1)), Fraction(0)) / lj)
    return primitive(V)


@dataclass(frozen=True)
class FiberMatrix:
    entries: RatMatrix

    @property
    def rank(self) -> int:
        return rank(self.entries)


def fiber_matrix(a: Arrangement, V: Sequence[Number]) -> FiberMatrix:
    _require_normalized(a)
    n, k = a.n, a.k
    if len(V) != n + k:
        raise ValueError(f"V needs n + k = {n + k} coordinates")
    full = (Fraction(0),) + tuple(Fraction(x) for x in V)
    rows = [
        [a.hyperplanes[n + j].covector[i] * (full[n + j] - full[i]) for i in range(n + 1)]
        for j in range(1, k + 1)
    ]
    return FiberMatrix(RatMatrix.from_rows(rows, n + 1))


@dataclass(frozen=True)
class Fiber:
    """Base locus of ``Phi^-1(V)``: ``points`` span a linear subspace of P^n; ``direction`` is forced."""

    equations: tuple[tuple[Fraction, ...], ...]
    points: tuple[tuple[int, ...], ...]
    direction: tuple[Fraction, ...]

    @property
    def empty(self) -> bool:
        return not self.points

    @property
    def dim(self) -> int:
        return len(self.points) - 1

    def contains(self, z: Sequence[Number]) -> bool:
        pt = (Fraction(1),) + tuple(Fraction(x) for x in z)
        return all(sum((c * x for c, x in zip(eq, pt)), Fraction(0)) == 0 for eq in self.equations)


def fiber(a: Arrangement, V: Sequence[Number]) -> Fiber:
    """Equations ``sum_i a_i^j (V_i - V_{n+j}) z_i = 0``; empty when ``M(V)`` has rank n+1."""
    m = fiber_matrix(a, V).entries
    eqs = tuple(tuple(-x for x in m.row(j)) for j in range(m.rows))
    pts = tuple(kernel_basis(m))
    return Fiber(eqs, pts, tuple(Fraction(x) for x in V[: a.n]))


def symbolic_fiber_matrix(a: Arrangement) -> list[list[Poly]]:
    """``M`` with entries linear forms in ``V_1..V_{n+k}`` (variable ``r`` is ``V_{r+1}``)."""
    _require_normalized(a)
    n, k = a.n, a.k
    nv = n + k

    def var(i: int) -> Poly:
        return Poly(nv) if i == 0 else Poly.variable(nv, i - 1)

    return [
        [(var(n + j) - var(i)) * a.hyperplanes[n + j].covector[i] for i in range(n + 1)]
        for j in range(1, k + 1)
    ]


def image_minors(a: Arrangement) -> list[tuple[tuple[int, ...], Poly]]:
    """All maximal minors of ``M``, keyed by their (0-based) row subsets; empty when ``k <= n``."""
    _require_normalized(a)
    if a.k < a.n + 1:
        return []
    M = symbolic_fiber_matrix(a)
    return [(rows, poly_det([M[r] for r in rows])) for rows in combinations(range(a.k), a.n + 1)]


def random_log_direction(a: Arrangement, rng: random.Random, height: int = 100) -> LogDirection:
    """Seeded direction based at a point off every hyperplane."""
    n = a.n
    while True:
        z = tuple(random_nonzero_rational(rng, height) for _ in range(n))
        if all(v != 0 for v in chart_values(a, z)):
            break
    while True:
        xi = tuple(random_nonzero_rational(rng, height) for _ in range(n))
        if any(xi):
            return LogDirection(z, xi)


@dataclass(frozen=True)
class BigResult:
    big: bool
    generic_fiber_dim: int
    generic_rank: int

    def __bool__(self) -> bool:
        return self.big


def is_big(a: Arrangement, seed: int | random.Random = 0, height: int = 100, samples: int = 5) -> BigResult:
    """Bigness from the threshold ``c >= 2n+1``, cross-checked by the generic rank of ``M``.

    The generic rank is certified from below: the largest rank seen over a
    few seeded image points.
    """
    if not a.general_position:
        raise DegenerateArrangementError("bigness is classified only in general position")
    if a.c < a.n + 2:
        raise DegenerateArrangementError(f"need c >= n+2 = {a.n + 2} hyperplanes, got {a.c}")
    b = a if a.normalized else normalize(a)[0]
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    target = min(b.k, b.n)
    best = -1
    for _ in range(samples):
        V = phi_eval(b, random_log_direction(b, rng, height))
        best = max(best, fiber_matrix(b, V).rank)
        if best >= target:
            break
    dim = b.n - best
    big = b.c >= 2 * b.n + 1
    if big != (dim == 0):
        raise InconsistencyError(
            f"c = {b.c} gives big = {big} but the generic fibre has dimension {dim}"
        )
    return BigResult(big, dim, best)
