"""Orbifold divisors, minor-derived symmetric forms with pole audits, Fermat covers, certificates.

Forms are handled through the tautological coordinates: ``V_b`` stands
for the log 1-form ``d log(l_b / l_0)`` of the normalized arrangement, so a
polynomial in ``V`` is a symmetric log differential.  Pole orders are
measured in a holomorphic frame ``dy_1..dy_n`` along a seeded curve
crossing one hyperplane transversally.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arrangement import Arrangement, dual_points, normalize
from .errors import DegenerateArrangementError, InconsistencyError, TruncationError
from .exact import (
    INFINITY,
    Poly,
    RatMatrix,
    TruncSeries,
    dot,
    format_rational,
    inverse,
    kernel_basis,
    poly_det,
    random_nonzero_rational,
    rank,
    series_valuation,
)
from .morphism import LogDirection, chart_values, phi_eval, symbolic_fiber_matrix
from .quadrics import conditions_rank

INF = math.inf
DEFAULT_IDENTITY_SAMPLES = 50


@dataclass(frozen=True)
class OrbifoldDivisor:
    """``sum (1 - 1/m_i) H_i`` with integer ``m_i >= 1`` or :data:`INF`."""

    arrangement: Arrangement
    multiplicities: tuple[int | float, ...]

    def __post_init__(self) -> None:
        ms = tuple(self.multiplicities)
        if len(ms) != self.arrangement.c:
            raise ValueError(f"expected {self.arrangement.c} multiplicities, got {len(ms)}")
        for i, m in enumerate(ms):
            if m != INF and (not isinstance(m, int) or isinstance(m, bool) or m < 1):
                raise ValueError(f"multiplicity {i} must be an integer >= 1 or infinity, got {m!r}")
        object.__setattr__(self, "multiplicities", ms)

    @classmethod
    def constant(cls, a: Arrangement, m: int | float) -> "OrbifoldDivisor":
        return cls(a, (m,) * a.c)

    def coefficient(self, i: int) -> Fraction | float:
        m = self.multiplicities[i]
        return 1.0 if m == INF else 1 - Fraction(1, m)


# --------------------------------------------------------------------------
# Symmetric forms in a holomorphic frame


SeriesForm = dict  # exponent tuple over dy_1..dy_n -> TruncSeries


def _form_mul(f: SeriesForm, g: SeriesForm, order: int) -> SeriesForm:
    out: SeriesForm = {}
    for e1, s1 in f.items():
        for e2, s2 in g.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            term = s1 * s2
            out[e] = out[e] + term if e in out else term
    return out


def _linear_form(coeffs: Sequence[TruncSeries]) -> SeriesForm:
    n = len(coeffs)
    return {tuple(int(r == s) for s in range(n)): c for r, c in enumerate(coeffs)}


def _substitute(poly: Poly, v_forms: Sequence[SeriesForm], n: int, order: int) -> SeriesForm:
    """``poly(V)`` with each variable replaced by a 1-form with series coefficients."""
    total: SeriesForm = {}
    for exps, c in poly.sorted_terms():
        term: SeriesForm = {(0,) * n: TruncSeries.one(order).scale(c)}
        for b, k in enumerate(exps):
            for _ in range(k):
                term = _form_mul(term, v_forms[b], order)
        for e, s in term.items():
            total[e] = total[e] + s if e in total else s
    return total


def _form_power(f: SeriesForm, k: int, n: int, order: int) -> SeriesForm:
    out: SeriesForm = {(0,) * n: TruncSeries.one(order)}
    for _ in range(k):
        out = _form_mul(out, f, order)
    return out


@dataclass(frozen=True)
class PoleAudit:
    """Pole orders of a form along one hyperplane: overall and per ``dy`` monomial."""

    hyperplane: int
    order: int
    monomials: tuple[tuple[tuple[int, ...], int], ...]


@dataclass(frozen=True)
class SymmetricFormWitness:
    """The form ``omega = Pi(V) / l_{i1}`` built from an n x n minor of ``M'``.

    ``family`` is the ordered index tuple ``(i0, i1, i2, ..., i2n)`` in the
    input numbering; ``minor_poly`` is in the variables ``V_1..V_{n+k}`` of
    the arrangement reordered as ``family + rest`` and normalized.
    """

    family: tuple[int, ...]
    minor_poly: Poly
    normalized: Arrangement
    order: tuple[int, ...]
    identity_samples: int
    pole_profile: dict[int, int] = field(default_factory=dict)
    monomial_orders: dict[int, tuple[tuple[tuple[int, ...], int], ...]] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.normalized.n

    @property
    def excluded_column(self) -> int:
        return self.family[1]

    @property
    def power(self) -> int:
        return 2 * self.n

    @property
    def twist(self) -> tuple[int, ...]:
        """Hyperplanes whose forms multiply ``omega^{2n}`` in ``eta``: ``(i0, i2, ..., i2n)``."""
        return (self.family[0],) + self.family[2:]

    def pole_support(self) -> list[int]:
        return sorted(i for i, o in self.pole_profile.items() if o > 0)

    def untwisted_poles(self) -> list[int]:
        return [i for i in self.pole_support() if i not in self.twist]

    def holomorphy_exponents(self, m: int | float) -> dict[int, int | float]:
        """Exponent of ``X_i`` in the pull-back of ``eta`` to the degree-``m`` Fermat cover.

        A component with twist ``t`` (1 if in :attr:`twist`, else 0) and
        ``omega^{2n}`` pole order ``p`` contributes at least ``m t - p``.
        """
        out = {}
        for i, o in sorted(self.pole_profile.items()):
            if o == 0:
                continue
            t = 1 if i in self.twist else 0
            out[i] = (m * t if m != INF else (INF if t else 0)) - self.power * o
        return out

    def to_json(self) -> dict:
        return {
            "family": list(self.family),
            "excluded_column": self.excluded_column,
            "power": self.power,
            "twist": list(self.twist),
            "minor_poly": poly_to_json(self.minor_poly),
            "identity_samples": self.identity_samples,
            "pole_profile": {str(k): v for k, v in sorted(self.pole_profile.items())},
        }


def poly_to_json(p: Poly) -> list[list]:
    return [[list(e), format_rational(c)] for e, c in p.sorted_terms()]


def _prepare(a: Arrangement, family: Sequence[int] | None) -> tuple[tuple[int, ...], tuple[int, ...], Arrangement]:
    n = a.n
    if a.c < 2 * n + 1:
        raise DegenerateArrangementError(f"k = {a.c - n - 1} < n = {n}: M' has no n x n minor")
    if family is None:
        family = tuple(range(2 * n + 1))
    family = tuple(family)
    if len(family) != 2 * n + 1 or len(set(family)) != len(family):
        raise ValueError(f"index family must list {2 * n + 1} distinct hyperplanes (i0, i1, ..., i{2 * n})")
    if any(not 0 <= i < a.c for i in family):
        raise ValueError("index family out of range")
    order = family + tuple(i for i in range(a.c) if i not in family)
    b, _ = normalize(a.reorder(order))
    return family, order, b


def form_minor(b: Arrangement) -> Poly:
    """Determinant of the first ``n`` rows of ``M`` with column 1 removed."""
    n = b.n
    M = symbolic_fiber_matrix(b)
    rows = [[M[j][i] for i in range(n + 1) if i != 1] for j in range(n)]
    return poly_det(rows)


def _boundary_direction(b: Arrangement, rng: random.Random, height: int) -> LogDirection:
    n = b.n
    while True:
        z = (Fraction(0),) + tuple(random_nonzero_rational(rng, height) for _ in range(n - 1))
        if all(v != 0 for v in chart_values(b, z)):
            break
    xi = tuple(random_nonzero_rational(rng, height) for _ in range(n))
    return LogDirection(z, xi)


def verify_identity(b: Arrangement, minor: Poly, samples: int, rng: random.Random, height: int = 100) -> None:
    """``Pi(Phi(z, xi)) = 0`` at seeded log directions based on ``H_1`` (``z_1 = 0``)."""
    for _ in range(samples):
        d = _boundary_direction(b, rng, height)
        V = phi_eval(b, d, boundary=True)
        if minor.evaluate(V) != 0:
            raise InconsistencyError(f"minor does not vanish at Phi(z, xi) for z = {d.z} on H_1")


def build_form(
    a: Arrangement,
    family: Sequence[int] | None = None,
    seed: int | random.Random = 0,
    samples: int = DEFAULT_IDENTITY_SAMPLES,
    order: int | None = None,
    audit: bool = True,
) -> SymmetricFormWitness:
    """Build ``omega`` for the index family ``(i0, i1, ..., i2n)`` and audit its poles.

    Default family ``(0, 1, ..., 2n)``.  The hyperplanes are reordered to
    ``family + rest`` and normalized, so ``i1`` becomes ``Z_1``.
    """
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    family, perm, b = _prepare(a, family)
    minor = form_minor(b)
    if minor.is_zero():
        raise DegenerateArrangementError("the minor Pi vanishes identically")
    verify_identity(b, minor, samples, rng)
    w = SymmetricFormWitness(family, minor, b, perm, samples)
    if audit:
        audit_poles(w, a, seed=rng, order=order)
    return w


def _transverse_curve(b: Arrangement, target: int, rng: random.Random, height: int = 20):
    """Chart matrix and a line ``P0 + t P1`` with ``P0`` on ``H_target`` only and ``Y_0`` constant on it."""
    n = b.n
    cov = b.hyperplanes[target].covector
    plane = kernel_basis([cov], n + 1)
    for _ in range(1000):
        A = [[rng.randint(-height, height) for _ in range(n + 1)] for _ in range(n + 1)]
        if rank(A) < n + 1:
            continue
        P0 = [sum(rng.randint(-height, height) * v[i] for v in plane) for i in range(n + 1)]
        if dot(A[0], P0) == 0 or any(h(P0) == 0 for s, h in enumerate(b.hyperplanes) if s != target):
            continue
        ybase = kernel_basis([A[0]], n + 1)
        P1 = [sum(rng.randint(-height, height) * v[i] for v in ybase) for i in range(n + 1)]
        if dot(cov, P1) == 0:
            continue
        return RatMatrix.from_rows(A, n + 1), P0, P1
    raise DegenerateArrangementError(f"could not find a transverse curve to hyperplane {target}")


def _v_forms(b: Arrangement, A: RatMatrix, P0, P1, target: int, order: int) -> list[SeriesForm]:
    """``t * V_b`` for ``b = 1..n+k`` in the frame ``dy_r``, ``y_r = mu_r / Y_0``."""
    n = b.n
    Ainv = inverse(A)
    cols = [Ainv.column(j) for j in range(n + 1)]
    y0 = dot(A.row(0), P0)
    tdlog = []
    for s, h in enumerate(b.hyperplanes):
        lam = [dot(h.covector, c) for c in cols]
        c0, c1 = h(P0) / y0, h(P1) / y0
        if s == target:
            # lambda~(t) = c1 t, so t / lambda~ = 1 / c1
            inv_t = TruncSeries.one(order).scale(1 / c1)
        else:
            inv_t = TruncSeries.linear(c0, c1, order).inverse() * TruncSeries.linear(0, 1, order)
        tdlog.append([inv_t.scale(lam[r]) for r in range(1, n + 1)])
    return [_linear_form([x - y for x, y in zip(tdlog[s], tdlog[0])]) for s in range(1, b.c)]


def _audit_component(w: SymmetricFormWitness, target: int, rng: random.Random, order: int, power: int = 1) -> PoleAudit:
    b = w.normalized
    n = b.n
    A, P0, P1 = _transverse_curve(b, target, rng)
    forms = _v_forms(b, A, P0, P1, target, order)
    omega_t = _substitute(w.minor_poly, forms, n, order)  # t^n * Pi(V)
    y0 = dot(A.row(0), P0)
    c0, c1 = b.hyperplanes[1](P0) / y0, b.hyperplanes[1](P1) / y0
    if target == 1:
        shift = n + 1
        twist = TruncSeries.one(order).scale(1 / c1)
    else:
        shift = n
        twist = TruncSeries.linear(c0, c1, order).inverse()
    omega_t = {e: s * twist for e, s in omega_t.items()}
    if power > 1:
        omega_t = _form_power(omega_t, power, n, order)
        shift *= power
    if order < shift:
        raise TruncationError(f"truncation order {order} is below the pole shift {shift}; increase it")
    monos = []
    for e in sorted(omega_t):
        v = series_valuation(omega_t[e])
        monos.append((e, 0 if v == INFINITY else max(shift - v, 0)))
    original = w.order[target]
    return PoleAudit(original, max((o for _, o in monos), default=0), tuple(monos))


def audit_poles(
    w: SymmetricFormWitness,
    a: Arrangement,
    seed: int | random.Random = 0,
    order: int | None = None,
    power: int = 1,
) -> dict[int, int]:
    """Pole order of ``omega^power`` along every hyperplane, keyed by input index.

    Fills ``w.pole_profile`` and ``w.monomial_orders`` when ``power == 1``.
    """
    if w.normalized.c != a.c:
        raise ValueError("witness was built for a different arrangement")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    T = order if order is not None else 4 * a.n + 2
    if power > 1 and order is None:
        T = max(T, power * (a.n + 1))
    profile = {}
    monos = {}
    for target in range(a.c):
        res = _audit_component(w, target, rng, T, power)
        profile[res.hyperplane] = res.order
        monos[res.hyperplane] = res.monomials
    profile = dict(sorted(profile.items()))
    if power == 1:
        w.pole_profile.clear()
        w.pole_profile.update(profile)
        w.monomial_orders.clear()
        w.monomial_orders.update(sorted(monos.items()))
    return profile


def index_families(c: int, n: int) -> list[tuple[int, ...]]:
    """Cyclic families ``(s, s+1, ..., s+2n) mod c``, one per starting index."""
    if c < 2 * n + 1:
        return []
    return [tuple((s + r) % c for r in range(2 * n + 1)) for s in range(c)]


# --------------------------------------------------------------------------
# Certificates


@dataclass
class Certificate:
    issued: bool
    failed_clause: str | None
    reason: str
    conditions_rank: int | None = None
    threshold: int | None = None
    strata: list[tuple[tuple[int, ...], bool]] = field(default_factory=list)
    forms: list[SymmetricFormWitness] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.issued

    def to_json(self) -> dict:
        return {
            "issued": self.issued,
            "failed_clause": self.failed_clause,
            "reason": self.reason,
            "rank_transcript": {"conditions_rank": self.conditions_rank, "threshold": self.threshold},
            "strata": [{"I": list(I), "passes": ok} for I, ok in self.strata],
            "forms": [f.to_json() for f in self.forms],
        }


def orbifold_certificate(
    d: OrbifoldDivisor,
    seed: int | random.Random = 0,
    forms: bool = True,
    samples: int = DEFAULT_IDENTITY_SAMPLES,
) -> Certificate:
    """Clauses in order: (i) finite ``m_i >= 2n``; (ii) rank criterion; (iii) strata to full depth."""
    from .report import check_strata

    a = d.arrangement
    n = a.n
    low = [i for i, m in enumerate(d.multiplicities) if m != INF and m < 2 * n]
    if low:
        i = low[0]
        return Certificate(False, "i", f"multiplicity m_{i} = {d.multiplicities[i]} < 2n = {2 * n}")
    if not a.general_position:
        return Certificate(False, "ii", "arrangement is not in general position")
    r = conditions_rank(dual_points(a))
    threshold = 4 * n - 2
    if r < threshold:
        return Certificate(False, "ii", f"conditions rank {r} < 4n-2 = {threshold}", r, threshold)
    strata = check_strata(a, n - 1)
    bad = [I for I, ok in strata if not ok]
    if bad:
        return Certificate(False, "iii", f"stratum {bad[0]} fails the criterion", r, threshold, strata)
    cert = Certificate(True, None, f"conditions rank {r} >= 4n-2 = {threshold}; all m_i >= 2n; strata pass",
                       r, threshold, strata)
    if forms:
        rng = seed if isinstance(seed, random.Random) else random.Random(seed)
        cert.forms = [build_form(a, fam, rng, samples) for fam in index_families(a.c, n)]
    return cert


@dataclass(frozen=True)
class FermatCover:
    """Complete intersection ``X_{n+j}^m = sum_i a_i^j X_i^m`` in P^{n+k}."""

    m: int
    n: int
    k: int
    equations: tuple[Poly, ...]
    normalized: Arrangement
    certificate: Certificate

    @property
    def hyperbolic(self) -> bool:
        """Certificate issued and ``c >= 4n - 2``."""
        return self.certificate.issued and self.normalized.c >= 4 * self.n - 2

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "ambient_dim": self.n + self.k,
            "equations": [poly_to_json(p) for p in self.equations],
            "hyperbolic": self.hyperbolic,
            "certificate": self.certificate.to_json(),
        }


def fermat_equations(b: Arrangement, m: int) -> tuple[Poly, ...]:
    n, k = b.n, b.k
    nv = n + k + 1
    X = [Poly.variable(nv, i) for i in range(nv)]
    eqs = []
    for j in range(1, k + 1):
        cov = b.hyperplanes[n + j].covector
        rhs = Poly(nv)
        for i in range(n + 1):
            rhs = rhs + X[i] ** m * cov[i]
        eqs.append(X[n + j] ** m - rhs)
    return tuple(eqs)


def fermat_cover(d: OrbifoldDivisor, seed: int | random.Random = 0, forms: bool = True) -> FermatCover:
    ms = set(d.multiplicities)
    if len(ms) != 1:
        raise ValueError("the Fermat cover needs equal multiplicities")
    m = ms.pop()
    if m == INF:
        raise ValueError("the Fermat cover needs a finite multiplicity")
    a = d.arrangement
    b = a if a.normalized else normalize(a)[0]
    cert = orbifold_certificate(OrbifoldDivisor(b, d.multiplicities), seed=seed, forms=forms)
    return FermatCover(m, b.n, b.k, fermat_equations(b, m), b, cert)
