"""Full positivity classification of an arrangement, with witnesses and diagnostics."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Any

from .arrangement import Arrangement, StratumIndex, dual_points, restrict_to_stratum
from .errors import DegenerateArrangementError
from .lines import ProjLine, SamplingStats, build_psi, cross_check, sample_superjumping_locus, scroll_from_psi
from .morphism import is_big
from .quadrics import (
    DEFAULT_BUDGET,
    DEFAULT_HEIGHT,
    DualSurfaceWitness,
    Quadric,
    ample_mod_boundary_criterion,
    conditions_rank,
    dual_quadric,
    is_reducible,
    low_rank_witness,
    quadrics_through,
    rational_rulings,
)

SCHEMA = "logtangent/1"


@dataclass(frozen=True)
class BaseLocusDim:
    """Dimension of the image of the augmented base locus in P^n.

    ``kind`` is ``"empty"`` (boundary only), ``"exact"``, ``"full"`` or
    ``"interval"`` (``low <= dim <= high``, used when the arrangement is not
    general enough for the exact formula).
    """

    kind: str
    low: int | None = None
    high: int | None = None

    @property
    def value(self) -> int | None:
        return self.low if self.kind == "exact" else None

    def to_json(self) -> Any:
        if self.kind in ("empty", "full"):
            return self.kind
        if self.kind == "exact":
            return self.low
        return {"interval": [self.low, self.high]}

    def __str__(self) -> str:
        if self.kind == "exact":
            return str(self.low)
        if self.kind == "interval":
            return f"[{self.low}, {self.high}]"
        return self.kind


@dataclass(frozen=True)
class LineWitness:
    line: ProjLine
    section: tuple[int, ...]
    psi: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    scroll: Quadric | None = None

    def to_json(self) -> dict:
        out: dict[str, Any] = {"line": self.line.to_json(), "section": list(self.section)}
        if self.psi is not None:
            out["psi"] = {"alpha": list(self.psi[0]), "beta": list(self.psi[1])}
        if self.scroll is not None:
            out["scroll"] = self.scroll.to_json()
        return out


@dataclass
class PositivityReport:
    n: int
    c: int
    general_position: bool
    big: bool | None = None
    generic_fiber_dim: int | None = None
    ample_mod_boundary: bool | None = None
    almost_ample: bool | None = None
    conditions_rank: int | None = None
    base_locus_image_dim: BaseLocusDim | None = None
    upstairs_dim_bound: int | None = None
    quadric_space_dim: int | None = None
    quadrics: list[Quadric] = field(default_factory=list)
    dual_surfaces: list[DualSurfaceWitness] = field(default_factory=list)
    lines: list[LineWitness] = field(default_factory=list)
    sampling: SamplingStats | None = None
    strata: list[tuple[StratumIndex, bool]] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)

    @property
    def threshold(self) -> int:
        return 4 * self.n - 2

    def to_json(self) -> dict[str, Any]:
        s = self.sampling
        return {
            "n": self.n,
            "c": self.c,
            "general_position": self.general_position,
            "big": self.big,
            "generic_fiber_dim": self.generic_fiber_dim,
            "ample_mod_boundary": self.ample_mod_boundary,
            "almost_ample": self.almost_ample,
            "conditions_rank": self.conditions_rank,
            "threshold": self.threshold,
            "base_locus_image_dim": None if self.base_locus_image_dim is None else self.base_locus_image_dim.to_json(),
            "upstairs_dim_bound": self.upstairs_dim_bound,
            "quadric_space_dim": self.quadric_space_dim,
            "witnesses": {
                "quadrics": [{"gram": q.to_json(), "rank": q.rank} for q in self.quadrics],
                "dual_surfaces": [w.to_json() for w in self.dual_surfaces],
                "superjumping_lines": [w.to_json() for w in self.lines],
            },
            "sampling": None if s is None else {
                "trials": s.trials,
                "hits": s.hits,
                "boundary_hits": s.boundary_hits,
                "stratum_lines": s.stratum_lines,
            },
            "strata": [{"I": list(I), "passes": ok} for I, ok in self.strata],
            "flags": list(self.flags),
        }

    def to_text(self) -> str:
        n, c = self.n, self.c
        out = [f"arrangement of c = {c} hyperplanes in P^{n}"]
        if not self.general_position:
            out.append("not in general position: no classification")
            out.extend(f"flag: {f}" for f in self.flags)
            return "\n".join(out)
        out.append(f"Theorem C: big iff c >= 2n+1 = {2 * n + 1}: big = {self.big}"
                   + (f" (generic fibre dimension {self.generic_fiber_dim})" if self.generic_fiber_dim is not None else ""))
        rel = ">=" if self.ample_mod_boundary else "<"
        out.append(f"Theorem B criterion: rank {self.conditions_rank} {rel} 4n-2 = {self.threshold}: "
                   f"ample modulo boundary = {self.ample_mod_boundary}")
        out.append(f"Theorem A: almost ample = {self.almost_ample}")
        out.append(f"image of augmented base locus: dimension {self.base_locus_image_dim}")
        if self.upstairs_dim_bound is not None:
            out.append(f"augmented base locus upstairs: dimension <= {self.upstairs_dim_bound}")
        for q in self.quadrics:
            out.append(f"quadric witness of rank {q.rank}: {q.to_json()}")
        for w in self.dual_surfaces:
            out.append(f"dual surface of rank {w.surface.rank} on the span of {[list(v) for v in w.carrier_basis]}: {w.surface.to_json()}")
        for lw in self.lines:
            out.append(f"superjumping line through {list(lw.line.p)} and {list(lw.line.q)}")
        if self.sampling is not None:
            s = self.sampling
            out.append(f"sampled lines: {s.hits}/{s.trials} superjumping ({s.boundary_hits} in the boundary)")
        failed = [I for I, ok in self.strata if not ok]
        if self.strata:
            out.append(f"strata checked: {len(self.strata)}, failing: {failed}")
        out.extend(f"flag: {f}" for f in self.flags)
        return "\n".join(out)


def check_strata(a: Arrangement, depth: int) -> list[tuple[StratumIndex, bool]]:
    """Criterion on every stratum restriction with ``1 <= |I| <= depth``.

    Strata of dimension at most 1 (``|I| >= n-1``) pass automatically.
    """
    if not a.general_position:
        raise DegenerateArrangementError("strata are checked only in general position")
    if not 0 <= depth < a.n:
        raise ValueError(f"depth must satisfy 0 <= depth < n = {a.n}")
    out = []
    for size in range(1, depth + 1):
        for I in combinations(range(a.c), size):
            if size >= a.n - 1:
                out.append((I, True))
            else:
                out.append((I, ample_mod_boundary_criterion(restrict_to_stratum(a, I))))
    return out


def base_locus_dim(n: int, c: int, r: int, ample: bool) -> tuple[BaseLocusDim, list[str]]:
    if ample:
        return BaseLocusDim("empty"), []
    if c <= 3 * n - 1:
        return BaseLocusDim("full", n, n), []
    expected = 4 * n - 1 - c
    if r == min(c, comb(n + 2, 2)) and c <= 4 * n - 3:
        return BaseLocusDim("exact", expected, expected), []
    low = max(expected, 2)
    flag = (f"exact dimension formula needs c <= 4n-3 = {4 * n - 3} and rank = min(c, {comb(n + 2, 2)}); "
            f"got c = {c}, rank {r}: reporting bounds only")
    if low >= n:
        return BaseLocusDim("full", n, n), [flag]
    return BaseLocusDim("interval", low, n), [flag]


def analyze(
    a: Arrangement,
    seed: int = 0,
    samples: int = 100,
    height: int = 100,
    witness_height: int = DEFAULT_HEIGHT,
    budget: int = DEFAULT_BUDGET,
    strata_depth: int | None = None,
    rulings: int = 2,
) -> PositivityReport:
    """Classify ``a``; deterministic for a given ``seed``.

    Every sampled line is tested by both the tangency system and the
    quadric system; a disagreement raises
    :class:`~logtangent.errors.InconsistencyError`.
    """
    n, c = a.n, a.c
    rep = PositivityReport(n, c, a.general_position)
    if not rep.general_position:
        rep.flags.append("not in general position")
        return rep
    rng = random.Random(seed)
    if c >= n + 2:
        b = is_big(a, rng, height)
        rep.big, rep.generic_fiber_dim = b.big, b.generic_fiber_dim
    else:
        rep.big = False
        rep.flags.append(f"c = {c} < n+2: the log cotangent bundle is not big")
    points = dual_points(a)
    r = conditions_rank(points)
    rep.conditions_rank = r
    rep.ample_mod_boundary = r >= 4 * n - 2
    rep.almost_ample = rep.ample_mod_boundary
    rep.base_locus_image_dim, flags = base_locus_dim(n, c, r, rep.ample_mod_boundary)
    rep.flags.extend(flags)
    if n + 2 <= c <= 3 * n - 1:
        rep.upstairs_dim_bound = 4 * n - 1 - c

    space = quadrics_through(points, n=n)
    rep.quadric_space_dim = space.dim
    if not space.is_empty():
        q = low_rank_witness(space, 4, rng, witness_height, budget)
        if q is None and not rep.ample_mod_boundary:
            if space.dim == 1:
                rep.flags.append("condition-star disagreement: criterion fails but the only quadric has rank > 4")
            else:
                rep.flags.append("no quadric of rank <= 4 found within the search budget")
        elif q is not None:
            if rep.ample_mod_boundary:
                rep.flags.append("condition-star disagreement: criterion holds but a rank <= 4 quadric contains the dual points")
            rep.quadrics.append(q)
            if is_reducible(q):
                rep.flags.append("reducible quadric witness (rank <= 2)")
            if q.rank in (3, 4):
                rep.dual_surfaces.append(dual_quadric(q))
                coords = [p.coords for p in points]
                for ruling in rational_rulings(q, coords, rulings, rng, avoid=coords, height=witness_height):
                    l = ProjLine(*ruling.line)
                    res = cross_check(a, l)
                    if not res or res.witness is None:
                        rep.flags.append(f"ruling line {l.to_json()} is not superjumping")
                        continue
                    psi = build_psi(a, l, res.witness)
                    rep.lines.append(LineWitness(l, res.witness, (psi.alpha, psi.beta), scroll_from_psi(l, psi, a)))
                if q.rank == 4 and not rep.lines and rulings > 0:
                    rep.flags.append("rulings of the rank-4 witness are not defined over Q; only the quadric is reported")

    if samples > 0:
        stats = sample_superjumping_locus(a, samples, rng, height)
        rep.sampling = stats
        off = stats.hits - stats.boundary_hits
        if rep.ample_mod_boundary and off:
            rep.flags.append(f"error: {off} superjumping lines off the boundary although the criterion holds")
        if stats.stratum_lines:
            rep.flags.append(f"{stats.stratum_lines} sampled lines meet a stratum; their test is not certified")
        if not rep.ample_mod_boundary and not rep.lines:
            for l, w in stats.witnesses[:rulings]:
                psi = build_psi(a, l, w)
                rep.lines.append(LineWitness(l, w, (psi.alpha, psi.beta), scroll_from_psi(l, psi, a)))

    depth = max(n - 2, 0) if strata_depth is None else strata_depth
    if depth > 0:
        rep.strata = check_strata(a, depth)
        failed = [I for I, ok in rep.strata if not ok]
        if failed:
            level = "error" if rep.ample_mod_boundary else "info"
            rep.flags.append(f"{level}: {len(failed)} strata fail the criterion, first {list(failed[0])}")
    return rep
