"""Hyperplane arrangements in P^n over the rationals."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Any, Iterable, Sequence

from .errors import DegenerateArrangementError, ParseError
from .exact import (
    Number,
    RatMatrix,
    det,
    dot,
    format_rational,
    inverse,
    parse_rational,
    primitive,
    random_int_vector,
    rank,
)


@dataclass(frozen=True)
class Hyperplane:
    """Zero set of a linear form; the covector is kept primitive with positive leading entry."""

    covector: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "covector", primitive(self.covector))

    def __call__(self, point: Sequence[Number]) -> Fraction:
        return dot(self.covector, point)

    @property
    def dim(self) -> int:
        return len(self.covector) - 1


@dataclass(frozen=True)
class ProjPoint:
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", primitive(self.coords))

    def __iter__(self):
        return iter(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, i: int) -> int:
        return self.coords[i]


StratumIndex = tuple[int, ...]


@dataclass(frozen=True)
class Arrangement:
    """Ordered list of distinct hyperplanes in P^n.

    Hyperplane order matters: normalization, strata coordinates and the
    orbifold index families all refer to positions in this list.
    """

    n: int
    hyperplanes: tuple[Hyperplane, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("ambient dimension must be positive")
        hs = tuple(h if isinstance(h, Hyperplane) else Hyperplane(tuple(h)) for h in self.hyperplanes)
        if not hs:
            raise ValueError("an arrangement needs at least one hyperplane")
        seen: dict[tuple[int, ...], int] = {}
        for i, h in enumerate(hs):
            if len(h.covector) != self.n + 1:
                raise ParseError(f"expected {self.n + 1} coefficients, got {len(h.covector)}", i)
            if h.covector in seen:
                raise ParseError(f"proportional to hyperplane {seen[h.covector]}", i)
            seen[h.covector] = i
        object.__setattr__(self, "hyperplanes", hs)

    @classmethod
    def from_covectors(cls, n: int, covectors: Iterable[Sequence[Number]]) -> "Arrangement":
        return cls(n, tuple(Hyperplane(tuple(v)) for v in covectors))

    @property
    def c(self) -> int:
        return len(self.hyperplanes)

    @property
    def k(self) -> int:
        """Number of hyperplanes beyond the first n+1 (so ``c = n + k + 1``)."""
        return self.c - self.n - 1

    @property
    def covectors(self) -> list[tuple[int, ...]]:
        return [h.covector for h in self.hyperplanes]

    @cached_property
    def normalized(self) -> bool:
        if self.c < self.n + 1:
            return False
        return all(
            self.hyperplanes[i].covector == tuple(int(i == j) for j in range(self.n + 1))
            for i in range(self.n + 1)
        )

    @property
    def coefficients(self) -> list[tuple[int, ...]]:
        """The block ``a_i^j``: row ``j-1`` holds the covector of hyperplane ``n+j``."""
        if not self.normalized:
            raise DegenerateArrangementError("coefficients are defined for normalized arrangements")
        return [h.covector for h in self.hyperplanes[self.n + 1:]]

    @cached_property
    def general_position(self) -> bool:
        return is_general_position(self)

    def contains_point(self, point: Sequence[Number]) -> list[int]:
        """Indices of the hyperplanes through ``point``."""
        return [i for i, h in enumerate(self.hyperplanes) if h(point) == 0]

    def reorder(self, order: Sequence[int]) -> "Arrangement":
        if sorted(order) != list(range(self.c)):
            raise ValueError("order must be a permutation of the hyperplane indices")
        return Arrangement(self.n, tuple(self.hyperplanes[i] for i in order))

    def to_json(self) -> dict[str, Any]:
        return {"n": self.n, "hyperplanes": [[format_rational(x) for x in h.covector] for h in self.hyperplanes]}


def is_general_position(a: Arrangement) -> bool:
    """Every ``min(c, n+1)`` of the covectors are linearly independent."""
    size = min(a.c, a.n + 1)
    if a.c <= a.n + 1:
        return rank(a.covectors) == a.c
    return all(det([a.covectors[i] for i in subset]) != 0 for subset in combinations(range(a.c), size))


def _require_general(a: Arrangement) -> None:
    if not a.general_position:
        raise DegenerateArrangementError("arrangement is not in general position")


def _transform(a: Arrangement, basis: Sequence[int]) -> tuple[RatMatrix, list[list[Fraction]]]:
    """Change coordinates so the hyperplanes in ``basis`` become ``x'_0, ..., x'_n``.

    Returns ``A`` (with ``x' = A x``) and every covector rewritten as ``l A^-1``.
    """
    change = RatMatrix.from_rows([a.hyperplanes[i].covector for i in basis], a.n + 1)
    inv = inverse(change)
    cols = [inv.column(j) for j in range(a.n + 1)]
    return change, [[dot(h.covector, col) for col in cols] for h in a.hyperplanes]


def normalize(a: Arrangement) -> tuple[Arrangement, RatMatrix]:
    """Make hyperplanes ``0..n`` the coordinate hyperplanes.

    Returns the new arrangement and the matrix ``A`` with ``x' = A x``; each
    new covector is ``l A^-1`` up to the canonical positive-integer scaling.
    Only the first ``n+1`` covectors need to be independent.
    """
    if a.c < a.n + 1:
        raise DegenerateArrangementError(f"normalization needs at least n+1 = {a.n + 1} hyperplanes, got {a.c}")
    if rank(a.covectors[: a.n + 1]) <= a.n:
        raise DegenerateArrangementError("the first n+1 hyperplanes are linearly dependent")
    change, covs = _transform(a, range(a.n + 1))
    return Arrangement.from_covectors(a.n, covs), change


def dual_points(a: Arrangement) -> list[ProjPoint]:
    return [ProjPoint(h.covector) for h in a.hyperplanes]


def restrict_to_stratum(a: Arrangement, I: Iterable[int]) -> Arrangement:
    """Induced arrangement on ``D_I`` (a copy of P^(n-|I|)), hyperplanes ``j not in I`` in input order.

    Coordinates on ``D_I``: the hyperplanes of ``I`` followed by the first
    remaining ones are made coordinate hyperplanes, then the coordinates of
    ``I`` are deleted.
    """
    I = tuple(I)
    idx = sorted(set(I))
    if len(idx) != len(I):
        raise ValueError("stratum index has repeated entries")
    if not idx:
        return a
    if any(not 0 <= i < a.c for i in idx):
        raise ValueError(f"stratum index {idx} out of range for {a.c} hyperplanes")
    if len(idx) >= a.n:
        raise DegenerateArrangementError(f"stratum |I| = {len(idx)} must be below n = {a.n}")
    _require_general(a)
    rest = [j for j in range(a.c) if j not in idx]
    basis = idx + rest[: a.n + 1 - len(idx)]
    _, covs = _transform(a, basis)
    r = len(idx)
    induced = []
    for j in rest:
        v = covs[j][r:]
        if not any(v):
            raise DegenerateArrangementError(f"hyperplane {j} contains the stratum {tuple(idx)}")
        induced.append(v)
    out = Arrangement.from_covectors(a.n - r, induced)
    if not out.general_position:
        raise DegenerateArrangementError(f"restriction to stratum {tuple(idx)} is not in general position")
    return out


# --------------------------------------------------------------------------
# Input


def parse_arrangement(doc: Any) -> tuple[Arrangement, list[int | float] | None]:
    """Parse the JSON arrangement format; returns the arrangement and optional multiplicities.

    Accepts a JSON string or an already-decoded mapping.  Errors name the
    offending hyperplane.
    """
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("top-level JSON value must be an object")
    n = doc.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError("'n' must be a positive integer")
    raw = doc.get("hyperplanes")
    if not isinstance(raw, list) or not raw:
        raise ParseError("'hyperplanes' must be a non-empty list")
    covs = []
    for i, row in enumerate(raw):
        if not isinstance(row, list):
            raise ParseError("coefficients must be a list", i)
        if len(row) != n + 1:
            raise ParseError(f"expected {n + 1} coefficients, got {len(row)}", i)
        try:
            vec = [parse_rational(x) for x in row]
        except ValueError as exc:
            raise ParseError(str(exc), i) from None
        if not any(vec):
            raise ParseError("zero covector", i)
        covs.append(vec)
    arr = Arrangement.from_covectors(n, covs)
    mults = doc.get("multiplicities")
    if mults is not None:
        mults = parse_multiplicities(mults, arr.c)
    return arr, mults


def parse_multiplicities(raw: Any, c: int) -> list[int | float]:
    """Integers ``>= 1`` or ``"inf"``; a comma-separated string is also accepted."""
    if isinstance(raw, str):
        raw = [x.strip() for x in raw.split(",")]
    if not isinstance(raw, list) or len(raw) != c:
        raise ParseError(f"expected {c} multiplicities")
    out: list[int | float] = []
    for i, m in enumerate(raw):
        if isinstance(m, str) and m.lower() in ("inf", "infinity", "oo"):
            out.append(float("inf"))
            continue
        try:
            val = int(m)
        except (TypeError, ValueError):
            raise ParseError(f"multiplicity {m!r} is not an integer or 'inf'", i) from None
        if isinstance(m, float) or val < 1:
            raise ParseError(f"multiplicity {m!r} must be an integer >= 1", i)
        out.append(val)
    return out


def load_arrangement(path: str) -> tuple[Arrangement, list[int | float] | None]:
    with open(path, encoding="utf-8") as fh:
        return parse_arrangement(fh.read())


# --------------------------------------------------------------------------
# Sampling


def random_arrangement(
    n: int,
    c: int,
    rng: random.Random,
    height: int = 100,
    normalized: bool = True,
) -> Arrangement:
    """Seeded random arrangement in general position.

    With ``normalized`` the first ``n+1`` hyperplanes are the coordinate
    ones and only the remaining covectors are random.
    """
    if c < 1:
        raise ValueError("c must be positive")
    for _ in range(1000):
        if normalized:
            covs = [tuple(int(i == j) for j in range(n + 1)) for i in range(min(c, n + 1))]
        else:
            covs = []
        while len(covs) < c:
            covs.append(random_int_vector(rng, n + 1, height))
        try:
            arr = Arrangement.from_covectors(n, covs)
        except ParseError:
            continue
        if arr.general_position:
            return arr
    raise DegenerateArrangementError("failed to sample a general arrangement")
