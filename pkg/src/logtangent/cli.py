"""Command-line front end: ``logtangent <command> --input FILE [options]``.

Exit status is 0 on success, 2 when the input is malformed or not in
general position, and 1 when two independent computations disagree.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Any, Sequence

from .arrangement import Arrangement, dual_points, load_arrangement, parse_multiplicities
from .errors import DegenerateArrangementError, InconsistencyError, ParseError, WitnessError
from .exact import parse_rational
from .lines import ProjLine, build_psi, cross_check, is_superjumping_dual, sample_superjumping_locus, scroll_from_psi
from .orbifold import OrbifoldDivisor, build_form, fermat_cover, orbifold_certificate
from .quadrics import DEFAULT_BUDGET, DEFAULT_HEIGHT, conditions_rank, dual_quadric, low_rank_witness, quadrics_through
from .report import SCHEMA, analyze, check_strata

COMMANDS = ("analyze", "superjumping", "quadrics", "forms", "fermat", "strata")


class UsageError(Exception):
    pass


def parse_line(text: str, n: int) -> ProjLine:
    """``"p0,p1,...;q0,q1,..."`` with rational coordinates."""
    parts = text.split(";")
    if len(parts) != 2:
        raise UsageError("--line expects two points separated by ';'")
    pts = []
    for part in parts:
        try:
            coords = [parse_rational(x.strip()) for x in part.split(",")]
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"--line: {exc}") from None
        if len(coords) != n + 1:
            raise UsageError(f"--line: points need {n + 1} coordinates")
        if not any(coords):
            raise UsageError("--line: zero vector is not a point")
        pts.append(coords)
    try:
        return ProjLine(*pts)
    except ValueError as exc:
        raise UsageError(f"--line: {exc}") from None


def _require_general(a: Arrangement) -> None:
    if not a.general_position:
        raise DegenerateArrangementError("arrangement is not in general position")


# --------------------------------------------------------------------------
# Commands: each returns (payload, text lines, exit status)


def cmd_analyze(a: Arrangement, args: argparse.Namespace, mults) -> tuple[dict, list[str], int]:
    rep = analyze(a, seed=args.seed, samples=args.samples, height=args.height,
                  witness_height=args.witness_height, budget=args.budget)
    status = 0 if rep.general_position else 2
    return rep.to_json(), rep.to_text().splitlines(), status


def _line_payload(a: Arrangement, l: ProjLine) -> tuple[dict, list[str]]:
    res = cross_check(a, l)
    out: dict[str, Any] = {
        "line": l.to_json(),
        "superjumping": res.superjumping,
        "kernel_dim": res.kernel_dim,
        "boundary": list(res.boundary),
        "stratum_pairs": [list(p) for p in res.stratum_pairs],
        "witness": None if res.witness is None else list(res.witness),
    }
    text = [f"line through {list(l.p)} and {list(l.q)}: superjumping = {res.superjumping}"
            f" (kernel dimension {res.kernel_dim})"]
    if res.in_boundary:
        out["quadric_test"] = None
        text.append(f"line lies in hyperplanes {list(res.boundary)}")
        return out, text
    dual = is_superjumping_dual(a, l)
    out["quadric_test"] = {"superjumping": dual.superjumping, "space_dim": dual.space.dim}
    text.append(f"quadric test agrees: {dual.space.dim} independent quadrics through the dual points and l*")
    if res.witness is not None:
        psi = build_psi(a, l, res.witness)
        scroll = scroll_from_psi(l, psi, a)
        out["psi"] = psi.to_json()
        out["scroll"] = {"gram": scroll.to_json(), "rank": scroll.rank}
        text.append(f"psi: alpha = {list(psi.alpha)}, beta = {list(psi.beta)}; scroll of rank {scroll.rank}")
    return out, text


def cmd_superjumping(a: Arrangement, args: argparse.Namespace, mults) -> tuple[dict, list[str], int]:
    _require_general(a)
    if args.line is not None:
        payload, text = _line_payload(a, parse_line(args.line, a.n))
        return payload, text, 0
    stats = sample_superjumping_locus(a, args.samples, args.seed, args.height)
    witnesses = [_line_payload(a, l)[0] for l, _ in stats.witnesses[:3]]
    payload = {
        "trials": stats.trials,
        "hits": stats.hits,
        "boundary_hits": stats.boundary_hits,
        "stratum_lines": stats.stratum_lines,
        "witnesses": witnesses,
    }
    text = [f"sampled lines: {stats.hits}/{stats.trials} superjumping ({stats.boundary_hits} in the boundary)"]
    text += [f"superjumping line through {w['line'][0]} and {w['line'][1]}" for w in witnesses]
    return payload, text, 0


def cmd_quadrics(a: Arrangement, args: argparse.Namespace, mults) -> tuple[dict, list[str], int]:
    _require_general(a)
    n = a.n
    points = dual_points(a)
    r = conditions_rank(points)
    space = quadrics_through(points, n=n)
    rng = random.Random(args.seed)
    q = None if space.is_empty() else low_rank_witness(space, 4, rng, args.witness_height, args.budget)
    payload: dict[str, Any] = {
        "conditions_rank": r,
        "threshold": 4 * n - 2,
        "criterion": r >= 4 * n - 2,
        "space_dim": space.dim,
        "basis": [g.to_json() for g in space.basis],
        "low_rank_witness": None if q is None else {"gram": q.to_json(), "rank": q.rank},
        "dual_surface": None,
    }
    rel = ">=" if r >= 4 * n - 2 else "<"
    text = [f"Theorem B criterion: rank {r} {rel} 4n-2 = {4 * n - 2}",
            f"quadrics through the dual points: dimension {space.dim}"]
    if q is not None:
        text.append(f"quadric of rank {q.rank}: {q.to_json()}")
        if q.rank in (3, 4):
            w = dual_quadric(q)
            payload["dual_surface"] = w.to_json()
            text.append(f"dual surface: {w.surface.to_json()}")
    return payload, text, 0


def _family(args: argparse.Namespace) -> tuple[int, ...] | None:
    if args.family is None:
        return None
    try:
        return tuple(int(x) for x in args.family.split(","))
    except ValueError:
        raise UsageError("--family expects comma-separated hyperplane indices") from None


def cmd_forms(a: Arrangement, args: argparse.Namespace, mults) -> tuple[dict, list[str], int]:
    _require_general(a)
    w = build_form(a, _family(args), seed=args.seed, samples=args.samples)
    payload = w.to_json()
    text = [f"family {list(w.family)}: column {w.excluded_column} dropped, "
            f"Pi o Phi = 0 on {w.identity_samples} points of H_{w.excluded_column}",
            f"pole orders: {dict(sorted(w.pole_profile.items()))}",
            f"twist {list(w.twist)} for omega^{w.power}"]
    if w.untwisted_poles():
        text.append(f"untwisted poles along {w.untwisted_poles()}")
    m = _constant_mult(mults)
    if m is not None:
        exps = w.holomorphy_exponents(m)
        payload["holomorphy_exponents"] = {str(i): (e if e != float("inf") else "inf") for i, e in exps.items()}
        text.append(f"holomorphy exponents for m = {m}: {exps}")
    return payload, text, 0


def _constant_mult(mults) -> int | float | None:
    if not mults:
        return None
    vals = set(mults)
    return vals.pop() if len(vals) == 1 else None


def _divisor(a: Arrangement, mults) -> OrbifoldDivisor:
    if mults is None:
        raise UsageError("multiplicities required: pass --mult or put them in the input file")
    return OrbifoldDivisor(a, mults)


def cmd_fermat(a: Arrangement, args: argparse.Namespace, mults) -> tuple[dict, list[str], int]:
    d = _divisor(a, mults)
    if _constant_mult(mults) is None:
        # Non-constant multiplicities: certificate only, no cover.
        cert = orbifold_certificate(d, seed=args.seed, forms=args.forms)
        text = [f"Theorem D certificate: {'issued' if cert.issued else 'refused'}"
                + ("" if cert.issued else f" (clause {cert.failed_clause})") + f": {cert.reason}"]
        return {"cover": None, "certificate": cert.to_json()}, text, 0
    _require_general(a)
    try:
        cover = fermat_cover(d, seed=args.seed, forms=args.forms)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cert = cover.certificate
    text = [f"Fermat cover of degree {cover.m}: {cover.k} equations in P^{cover.n + cover.k}",
            f"Theorem D certificate: {'issued' if cert.issued else 'refused'}"
            + ("" if cert.issued else f" (clause {cert.failed_clause})") + f": {cert.reason}",
            f"Theorem E hyperbolicity: {cover.hyperbolic}"]
    return {"cover": cover.to_json()}, text, 0


def cmd_strata(a: Arrangement, args: argparse.Namespace, mults) -> tuple[dict, list[str], int]:
    _require_general(a)
    depth = a.n - 1 if args.depth is None else args.depth
    if not 0 <= depth < a.n:
        raise UsageError(f"--depth must satisfy 0 <= depth < n = {a.n}")
    res = check_strata(a, depth)
    failed = [list(I) for I, ok in res if not ok]
    payload = {"depth": depth, "strata": [{"I": list(I), "passes": ok} for I, ok in res], "failed": failed}
    text = [f"{len(res)} strata up to depth {depth}; failing: {failed}"]
    return payload, text, 0


HANDLERS = {
    "analyze": cmd_analyze,
    "superjumping": cmd_superjumping,
    "quadrics": cmd_quadrics,
    "forms": cmd_forms,
    "fermat": cmd_fermat,
    "strata": cmd_strata,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="logtangent", description="Positivity of log cotangent bundles of hyperplane arrangements.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--input", "-i", required=True, help="arrangement JSON file")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--samples", type=int, help="sampled lines (default 100) or identity checks for forms (default 50)")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    parser.add_argument("--height", type=int, default=100, help="height of random sample coordinates")
    parser.add_argument("--witness-height", type=int, default=DEFAULT_HEIGHT)
    parser.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="low-rank quadric search budget")
    parser.add_argument("--line", help='explicit line "p0,..,pn;q0,..,qn"')
    parser.add_argument("--mult", help="multiplicities m1,m2,... (integers or inf)")
    parser.add_argument("--family", help="index family i0,i1,...,i2n for forms")
    parser.add_argument("--depth", type=int, help="stratum depth")
    parser.add_argument("--no-forms", dest="forms", action="store_false", help="skip form witnesses in certificates")
    return parser


def _emit(payload: dict, text: Sequence[str], args: argparse.Namespace) -> None:
    if args.format == "json":
        doc = {"schema": SCHEMA, "seed": args.seed, "command": args.command, "result": payload}
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        sys.stdout.write("\n".join(text) + "\n")


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.samples is None:
        args.samples = 50 if args.command == "forms" else 100
    try:
        a, mults = load_arrangement(args.input)
        if args.mult is not None:
            mults = parse_multiplicities(args.mult, a.c)
        payload, text, status = HANDLERS[args.command](a, args, mults)
    except (ParseError, UsageError, DegenerateArrangementError, WitnessError) as exc:
        print(f"logtangent: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"logtangent: error: {exc}", file=sys.stderr)
        return 2
    except InconsistencyError as exc:
        print(f"logtangent: internal inconsistency: {exc}", file=sys.stderr)
        return 1
    _emit(payload, text, args)
    return status


if __name__ == "__main__":
    sys.exit(main())
