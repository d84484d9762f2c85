"""Command-line front end: ``qtruth <command> [--format json|text] [--tol EPS]``."""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

import numpy as np

from . import serialize as ser
from .classical import (
    algebra_element,
    CoarseGraining,
    FinitePhaseSpace,
    Indicator,
    classical_truth_eval,
    energy_ellipse_indicator,
    indicator_and,
    indicator_not,
    universal_truth_functional,
)
from .compat import PropositionOutcome, common_refinement, conjunction, single_framework_check
from .errors import InvalidInput, QTruthError
from .framework import enumerate_quantum_truth_functionals
from .linalg import DEFAULT_EPS, Tolerance, rank
from .nogo import (
    LABELS,
    SignAssignment,
    build_mermin_square,
    score_assignment,
    search_sign_assignments,
    utf_search,
    verify_square_identities,
    weak_c_demo,
)


@dataclass
class CommandResult:
    status: str
    payload: dict
    diagnostics: list[str] = field(default_factory=list)
    text: str = ""

    @property
    def exit_code(self) -> int:
        return 0 if self.status == "ok" else 1


def _sign(s) -> str:
    return {1: "+I", -1: "-I"}.get(s, "?")


def cmd_mermin_verify(args, tol) -> CommandResult:
    r = verify_square_identities(build_mermin_square())
    payload = {
        "passed": r.passed,
        "gaussian_integer_entries": r.gaussian_integer_entries,
        "row_products": [_sign(s) for s in r.row_products],
        "column_products": [_sign(s) for s in r.column_products],
        "rows_commute": list(r.row_commute),
        "columns_commute": list(r.column_commute),
        "squares_to_identity": [list(row) for row in r.squares_to_identity],
        "doubly_degenerate_pm1": [list(row) for row in r.doubly_degenerate],
        "failures": list(r.failures),
    }
    lines = [
        "magic square identities: " + ("all pass" if r.passed else "FAILED"),
        "row products: " + " ".join(payload["row_products"]),
        "column products: " + " ".join(payload["column_products"]),
        "rows commute: " + " ".join("yes" if b else "no" for b in r.row_commute),
        "columns commute: " + " ".join("yes" if b else "no" for b in r.column_commute),
        "all ops square to I: " + ("yes" if all(all(row) for row in r.squares_to_identity) else "no"),
        "spectra +-1 doubly degenerate: " + ("yes" if all(all(row) for row in r.doubly_degenerate) else "no"),
    ]
    lines += [f"  failure: {f}" for f in r.failures]
    return CommandResult("ok", payload, text="\n".join(lines))


def cmd_mermin_search(args, tol) -> CommandResult:
    r = search_sign_assignments()
    c = r.certificate
    payload = {
        "solutions": [[list(row) for row in a.values] for a in r.solutions],
        "checked": r.checked,
        "min_violations": r.min_violations,
        "parity_certificate": {"required": c.required, "forced": c.forced},
    }
    text = (
        f"{len(r.solutions)} solutions / {r.checked} checked\n"
        f"minimum number of violated rules: {r.min_violations}\n"
        f"parity certificate: product of the six targets is {c.required:+d}, "
        f"product of all line products is forced to {c.forced:+d} (each entry squared)"
    )
    return CommandResult("ok", payload, text=text)


def cmd_mermin_score(args, tol) -> CommandResult:
    obj = ser.load_json(args.assignment)
    values = obj["values"] if isinstance(obj, dict) and "values" in obj else obj
    try:
        a = SignAssignment(values)
    except (ValueError, TypeError) as exc:
        raise InvalidInput(f"bad assignment: {exc}") from None
    violated = score_assignment(a)
    payload = {"assignment": [list(r) for r in a.values], "violated": violated}
    text = "violated rules: " + (", ".join(violated) if violated else "none")
    return CommandResult("ok", payload, text=text)


def cmd_mermin_weak_c(args, tol) -> CommandResult:
    r = weak_c_demo(tol)
    payload = {
        "theta_prime": {"framework": "row 1", "cell": r.theta_prime_cell, "values": r.theta_prime_values},
        "theta_double_prime": {"framework": "column 1", "cell": r.theta_double_prime_cell,
                               "values": r.theta_double_prime_values},
        "agree_on_a_x": r.shared_value_agrees,
        "frameworks_compatible": r.frameworks_compatible,
        "witness": list(r.witness) if r.witness else None,
    }
    fmt = lambda d: ", ".join(f"{k}={v:+g}" for k, v in d.items())  # noqa: E731
    text = (
        f"theta'  (row 1, cell {r.theta_prime_cell}): {fmt(r.theta_prime_values)}\n"
        f"theta'' (column 1, cell {r.theta_double_prime_cell}): {fmt(r.theta_double_prime_values)}\n"
        f"agree on a_x: {'yes' if r.shared_value_agrees else 'no'}\n"
        f"frameworks compatible: {'yes' if r.frameworks_compatible else 'no'}"
        + (f" (cells {r.witness[0]} and {r.witness[1]} do not commute)" if r.witness else "")
    )
    return CommandResult("ok", payload, text=text)


def cmd_truth_functionals(args, tol) -> CommandResult:
    d = ser.decomposition_from_json(ser.load_json(args.input), tol)
    tables = enumerate_quantum_truth_functionals(d, exhaustive=args.exhaustive)
    n = len(d)
    entries = []
    for t in tables:
        cells = [k for k in range(n) if t[1 << k]]
        entries.append({"cell": cells[0] if len(cells) == 1 else None, "table": list(t)})
    payload = {
        "cells": n,
        "mode": "exhaustive" if args.exhaustive else "constructive",
        "candidates": 2 ** (2 ** n) if args.exhaustive else None,
        "functionals": entries,
    }
    text = f"{len(tables)} truth functionals on a {n}-cell decomposition ({payload['mode']})\n"
    text += "\n".join(f"  selects cell {e['cell']}" for e in entries)
    return CommandResult("ok", payload, text=text)


def cmd_refine(args, tol) -> CommandResult:
    d1 = ser.decomposition_from_json(ser.load_json(args.a), tol)
    d2 = ser.decomposition_from_json(ser.load_json(args.b), tol)
    r = common_refinement(d1, d2)
    if r.compatible:
        ranks = [rank(c) for c in r.refinement.cells]
        text = f"compatible: common refinement has {len(ranks)} cells, ranks {ranks}"
    else:
        text = f"incompatible: cell {r.witness[0]} of A does not commute with cell {r.witness[1]} of B"
    return CommandResult("ok", ser.report_to_json(r), text=text)


def cmd_conjunction(args, tol) -> CommandResult:
    obj = ser.load_json(args.input)
    try:
        p, q = ser.matrix_from_json(obj["p"]), ser.matrix_from_json(obj["q"])
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"pair file needs 'p' and 'q' matrices: {exc}") from None
    out = conjunction(p, q, tol)
    if isinstance(out, PropositionOutcome):
        payload = {"outcome": out.tag.value, "projector": None}
        text = "outcome: MEANINGLESS (the projectors do not commute)"
    else:
        payload = {"outcome": "PROJECTOR", "projector": ser.matrix_to_json(out)}
        text = f"outcome: projector of rank {rank(out)}"
    return CommandResult("ok", payload, text=text)


def cmd_framework_check(args, tol) -> CommandResult:
    obj = ser.load_json(args.input)
    try:
        props = [ser.matrix_from_json(m) for m in obj["projectors"]]
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"properties file needs a 'projectors' list: {exc}") from None
    r = single_framework_check(props, tol)
    payload = {
        "result": "PASS" if r.passed else "VIOLATION",
        "violations": [list(v) for v in r.violations],
        "framework": ser.decomposition_to_json(r.framework) if r.framework is not None else None,
    }
    if r.passed:
        text = f"PASS: a single framework with {len(r.framework)} cells contains every property"
    else:
        text = "VIOLATION: noncommuting pairs " + ", ".join(f"({i},{j})" for i, j in r.violations)
    return CommandResult("ok", payload, text=text)


def cmd_utf_search(args, tol) -> CommandResult:
    fc = ser.collection_from_json(ser.load_json(args.input), tol)
    r = utf_search(fc)
    payload = ser.utf_result_to_json(r)
    payload["shared_projectors"] = [[list(m) for m in g] for g in fc.shared]
    if r.sat:
        text = f"SAT: {len(r.solutions)} consistent choices of truth functionals"
    else:
        text = f"UNSAT: no universal truth functional ({r.trace.nodes} nodes visited)"
    return CommandResult("ok", payload, text=text)


def cmd_classical_demo(args, tol) -> CommandResult:
    rng = np.random.default_rng(args.seed)
    space = FinitePhaseSpace.square_grid(args.grid, args.half_width)
    n = len(space)
    gamma0 = space.points[int(rng.integers(n))]
    theta0 = universal_truth_functional(space, gamma0)
    one = Indicator.ones(space)

    failures = 0
    if theta0(one) != 1:
        failures += 1
    for _ in range(args.pairs):
        p = Indicator(space, rng.integers(0, 2, n))
        q = Indicator(space, rng.integers(0, 2, n))
        if theta0(indicator_not(p)) != 1 - theta0(p):
            failures += 1
        if theta0(indicator_and(p, q)) != theta0(p) * theta0(q):
            failures += 1

    # Energy shells give a natural coarse graining of the oscillator.
    energy = np.array([pt.x ** 2 + pt.p ** 2 for pt in space.points])
    edges = np.quantile(energy, np.linspace(0, 1, args.shells + 1)[1:-1])
    g = CoarseGraining.from_labels(space, [int(v) for v in np.searchsorted(edges, energy, side="right")])
    k = g.cell_of(gamma0)
    restricted_ok = all(
        theta0(e) == classical_truth_eval(g, k, e)
        for e in (algebra_element(g, m) for m in range(1 << len(g)))
    )
    inside = theta0(energy_ellipse_indicator(space, args.energy))
    payload = {
        "points": n,
        "gamma0": [gamma0.x, gamma0.p],
        "pairs_checked": args.pairs,
        "violations": failures,
        "energy_threshold": args.energy,
        "gamma0_inside_ellipse": inside,
        "shells": len(g),
        "gamma0_cell": k,
        "restriction_matches_cell_functional": restricted_ok,
    }
    status = "ok" if failures == 0 and restricted_ok else "error"
    text = (
        f"{n}-point phase space, gamma0 = ({gamma0.x:.4g}, {gamma0.p:.4g})\n"
        f"truth-functional rules checked on {args.pairs} random pairs: {failures} violations\n"
        f"energy below {args.energy:g}: {'true' if inside else 'false'}\n"
        f"restricted to {len(g)} energy shells it selects shell {k}: "
        f"{'consistent' if restricted_ok else 'INCONSISTENT'}"
    )
    return CommandResult(status, payload, text=text)


def _positive_tol(s: str) -> Tolerance:
    try:
        return Tolerance(float(s))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--tol", type=_positive_tol, default=Tolerance(DEFAULT_EPS), metavar="EPS")

    parser = argparse.ArgumentParser(prog="qtruth", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classical-demo", parents=[common], help="point-based truth functional on an oscillator grid")
    p.add_argument("--grid", type=int, default=20, help="grid points per axis")
    p.add_argument("--half-width", type=float, default=2.0)
    p.add_argument("--energy", type=float, default=1.0)
    p.add_argument("--shells", type=int, default=4)
    p.add_argument("--pairs", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_classical_demo)

    p = sub.add_parser("truth-functionals", parents=[common], help="list truth functionals of a decomposition")
    p.add_argument("--input", required=True)
    p.add_argument("--exhaustive", action="store_true", help="filter all 2^(2^N) candidate maps")
    p.set_defaults(func=cmd_truth_functionals)

    p = sub.add_parser("refine", parents=[common], help="common refinement of two decompositions")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(func=cmd_refine)

    p = sub.add_parser("conjunction", parents=[common], help="P AND Q, or MEANINGLESS")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_conjunction)

    p = sub.add_parser("framework-check", parents=[common], help="single-framework rule for a set of projectors")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_framework_check)

    p = sub.add_parser("utf-search", parents=[common], help="search for a universal truth functional")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_utf_search)

    m = sub.add_parser("mermin", help="magic-square commands")
    msub = m.add_subparsers(dest="action", required=True)
    msub.add_parser("verify", parents=[common]).set_defaults(func=cmd_mermin_verify)
    msub.add_parser("search", parents=[common]).set_defaults(func=cmd_mermin_search)
    p = msub.add_parser("score", parents=[common])
    p.add_argument("--assignment", required=True)
    p.set_defaults(func=cmd_mermin_score)
    msub.add_parser("weak-c", parents=[common]).set_defaults(func=cmd_mermin_weak_c)
    return parser


def run(argv: list[str] | None = None) -> CommandResult:
    args = build_parser().parse_args(argv)
    try:
        result = args.func(args, args.tol)
    except QTruthError as exc:
        result = CommandResult(
            "error",
            {"error": type(exc).__name__, "message": str(exc)},
            diagnostics=[str(exc)],
            text=f"error: {type(exc).__name__}: {exc}",
        )
    if args.format == "json":
        print(ser.dumps({"status": result.status, "payload": result.payload, "diagnostics": result.diagnostics}))
    else:
        print(result.text, file=sys.stdout if result.status == "ok" else sys.stderr)
    return result


def main(argv: list[str] | None = None) -> int:
    return run(argv).exit_code


if __name__ == "__main__":
    sys.exit(main())
