"""Acceptance suite: one marker per criterion, summarized at the end of the run."""

import json
import random
import time

import pytest

from logtangent.arrangement import Arrangement, dual_points
from logtangent.lines import (
    build_psi,
    cross_check,
    is_superjumping,
    is_superjumping_dual,
    lines_tangent_to_conic,
    psi_incidence_holds,
    random_line,
    sample_superjumping_locus,
)
from logtangent.morphism import is_big
from logtangent.orbifold import INF, OrbifoldDivisor, build_form, fermat_cover, orbifold_certificate
from logtangent.quadrics import (
    Quadric,
    ample_mod_boundary_criterion,
    conditions_rank,
    low_rank_witness,
    quadrics_through,
    random_rank4_quadric,
    tangent_dim_minors,
    tangent_dim_orbit,
)
from logtangent.report import analyze, check_strata

from conftest import CONIC_POINTS, NOGUCHI, seeded_arrangement

crit = pytest.mark.criterion

CONIC = Quadric.from_monomials(2, [0, 0, 1, -1, 0, 0])
SEVENTH_POINT = (1, 7, 49)


def conic_arrangement() -> Arrangement:
    return Arrangement.from_covectors(2, CONIC_POINTS)


def tangent_witnesses():
    """(arrangement, line, section) for the conic tangent and the low-c sampling runs."""
    out = []
    a = conic_arrangement()
    (l,) = lines_tangent_to_conic(CONIC, [SEVENTH_POINT])
    out.append((a, l, cross_check(a, l).witness))
    for a in low_c_arrangements():
        stats = sample_superjumping_locus(a, 100, seed=5)
        out.extend((a, l, w) for l, w in stats.witnesses)
    return out


def low_c_arrangements():
    return [seeded_arrangement(2, 4, 11), seeded_arrangement(3, 6, 12)]


@crit(1, "Noguchi sextic: ample modulo boundary, no superjumping among 200 lines, under 5 s")
def test_noguchi():
    start = time.perf_counter()
    a = Arrangement.from_covectors(2, NOGUCHI)
    assert conditions_rank(dual_points(a)) == 6
    rep = analyze(a, seed=0, samples=200)
    elapsed = time.perf_counter() - start
    assert rep.ample_mod_boundary is True
    assert rep.sampling.trials == 200 and rep.sampling.hits == 0
    assert elapsed < 5, f"took {elapsed:.2f} s"


@crit(2, "conic tangents: rank-3 witness, a further tangent is superjumping by both tests")
def test_conic_tangent():
    a = conic_arrangement()
    rep = analyze(a, samples=0)
    assert rep.ample_mod_boundary is False
    assert rep.quadrics and rep.quadrics[0].rank == 3
    assert all(rep.quadrics[0](p.coords) == 0 for p in dual_points(a))
    (l,) = lines_tangent_to_conic(CONIC, [SEVENTH_POINT])
    direct = is_superjumping(a, l)
    dual = is_superjumping_dual(a, l)
    assert not direct.in_boundary
    assert direct.superjumping is True and dual.superjumping is True


@crit(3, "bigness exactly for c >= 2n+1, generic fibre dimension max(n-k, 0)")
@pytest.mark.parametrize("n", [2, 3, 4])
def test_bigness_threshold(n):
    for c in range(n + 2, 2 * n + 4):
        a = seeded_arrangement(n, c, 100 * n + c)
        res = is_big(a, seed=c)
        k = c - n - 1
        assert res.big == (c >= 2 * n + 1), (n, c)
        assert res.generic_fiber_dim == max(n - k, 0), (n, c)


ORACLE_CASES = {2: [4, 5, 6, 7, 8, 4, 5, 6, 7, 8], 3: [7, 8, 9, 10, 11, 7, 8, 9, 10, 11]}


@crit(4, "tangency and quadric tests agree on 100 lines for 10 arrangements at n = 2, 3")
@pytest.mark.parametrize("n", [2, 3])
def test_oracle_equivalence(n):
    outcomes = set()
    for s, c in enumerate(ORACLE_CASES[n]):
        a = seeded_arrangement(n, c, 2000 + 10 * n + s)
        outcomes.add(ample_mod_boundary_criterion(a))
        rng = random.Random(s)
        for _ in range(100):
            l = random_line(n, rng)
            direct = is_superjumping(a, l)
            if direct.in_boundary:
                continue
            assert direct.superjumping == is_superjumping_dual(a, l).superjumping, (c, s, l.to_json())
    assert outcomes == {True, False}


@crit(5, "every sampled line is superjumping for n=2, c=4 and n=3, c=6")
@pytest.mark.parametrize("a", low_c_arrangements(), ids=["n2c4", "n3c6"])
def test_all_lines_superjumping(a):
    stats = sample_superjumping_locus(a, 100, seed=5)
    assert stats.hits == 100
    assert len(stats.witnesses) + stats.boundary_hits == 100


@crit(6, "n=3, c=9: unique quadric of rank 4, base locus image of dimension 2")
def test_unique_quadric():
    a = seeded_arrangement(3, 9, 0)
    space = quadrics_through(dual_points(a), n=3)
    assert space.dim == 1
    assert space.basis[0].rank == 4
    rep = analyze(a, samples=0)
    assert rep.base_locus_image_dim.to_json() == 2 == 4 * 3 - 1 - 9


@crit(7, "rank <= 4 quadrics have projective dimension 4n-3 at a rank-4 point (n = 3, 4)")
@pytest.mark.parametrize("n", [3, 4])
def test_rank4_tangent_dimension(n):
    q = random_rank4_quadric(n, random.Random(n), height=5)
    assert q.rank == 4
    assert tangent_dim_orbit(q) == 4 * n - 3
    assert tangent_dim_minors(q) == 4 * n - 3


@crit(8, "psi maps exist for every witness of the conic and low-c regimes, incidences exact")
def test_psi_contract():
    witnesses = tangent_witnesses()
    assert len(witnesses) >= 201
    for a, l, w in witnesses:
        assert w is not None
        psi = build_psi(a, l, w)
        assert psi_incidence_holds(a, l, psi), l.to_json()


@crit(9, "symmetric form for n=2, c=7: identity on 50 points, simple poles, exponent sign flips at m = 4")
def test_orbifold_form():
    a = seeded_arrangement(2, 7, 0)
    w = build_form(a, seed=0, samples=50)
    assert w.identity_samples == 50
    assert max(w.pole_profile.values()) <= 1
    for monos in w.monomial_orders.values():
        assert all(order <= 1 for _, order in monos)
    twisted = [i for i in w.pole_support() if i in w.twist]
    assert twisted
    for m in [2, 3, 4, 5, 6, 8, INF]:
        exps = w.holomorphy_exponents(m)
        for i in twisted:
            if m != INF:
                assert exps[i] == m - 2 * a.n
            assert (exps[i] >= 0) == (m >= 4), (m, i)


@crit(10, "orbifold and hyperbolicity certificates for Noguchi with m = 4, refusals otherwise")
def test_certificates():
    a = Arrangement.from_covectors(2, NOGUCHI)
    cert = orbifold_certificate(OrbifoldDivisor.constant(a, 4), forms=False)
    assert cert.issued
    cover = fermat_cover(OrbifoldDivisor.constant(a, 4), forms=False)
    assert cover.k == 3 and cover.n + cover.k == 5
    assert len(cover.equations) == 3 and all(eq.degree() == 4 for eq in cover.equations)
    assert cover.hyperbolic is True
    for i in range(6):
        ms = [4] * 6
        ms[i] = 3
        refused = orbifold_certificate(OrbifoldDivisor(a, ms), forms=False)
        assert not refused.issued and refused.failed_clause == "i" and f"m_{i}" in refused.reason
    conic = orbifold_certificate(OrbifoldDivisor.constant(conic_arrangement(), 4), forms=False)
    assert not conic.issued and conic.failed_clause == "ii"
    assert fermat_cover(OrbifoldDivisor.constant(conic_arrangement(), 4), forms=False).hyperbolic is False


@crit(11, "strata of 20 criterion-passing arrangements at n=3 pass up to depth n-2")
def test_stratum_closure():
    count = 0
    seed = 0
    while count < 20:
        a = seeded_arrangement(3, 10 + seed % 3, 3000 + seed)
        seed += 1
        if not ample_mod_boundary_criterion(a):
            continue
        count += 1
        strata = check_strata(a, 3 - 2)
        assert len(strata) == a.c
        assert all(ok for _, ok in strata), a.covectors


@crit(12, "analyze JSON is byte-identical across runs with the same seed")
@pytest.mark.parametrize("a", [conic_arrangement(), seeded_arrangement(3, 8, 7)], ids=["conic", "n3c8"])
def test_determinism(a):
    first = json.dumps(analyze(a, seed=9, samples=30).to_json(), indent=2)
    second = json.dumps(analyze(a, seed=9, samples=30).to_json(), indent=2)
    assert first == second
