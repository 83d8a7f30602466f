"""Command-line surface: single queries, table scans, search, comparison.

All emitted integers are produced by exact floors; TSV cells carry exact
rational or quadratic-irrational renderings, and ``--json`` switches to a
JSON array of objects with the same exact strings.  Identical inputs produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import classical, order3, refine2
from .classical import BoundReport, CurveParams
from .errors import (
    BelowIharaRange,
    CurveBoundsError,
    DomainError,
    EmptySearch,
    IntegralityViolation,
    InvalidCut,
    NoRealRoot,
    NotPositiveDefinite,
    NotPSD,
    OutOfIharaRange,
    UncertifiedCut,
)
from .qext import Quad, render_quad

EXIT_OK = 0
EXIT_RANGE = 1
EXIT_USAGE = 2

_RANGE_ERRORS = (BelowIharaRange, OutOfIharaRange, NoRealRoot, EmptySearch)
_INPUT_ERRORS = (
    DomainError,
    InvalidCut,
    UncertifiedCut,
    NotPositiveDefinite,
    NotPSD,
    IntegralityViolation,
)

STATUS_NEW = "new-record"
STATUS_MEETS = "meets-record"
STATUS_WORSE = "worse-than-record"
STATUS_NONE = "no-record-data"


@dataclass(frozen=True)
class RecordRow:
    """One best-known bound ingested from a records CSV snapshot."""

    q: int
    g: int
    best_upper: int
    best_lower: Optional[int] = None
    source: Optional[str] = None


@dataclass(frozen=True)
class TableEntry:
    q: int
    g: int
    ihara_n: int
    ihara_serre_n: int
    improved: bool
    record_status: str = STATUS_NONE


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Quad):
        return render_quad(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, tuple) and len(value) == 2:
        return f"[{value[0]}, {value[1]}]"
    return str(value)


def _emit(rows: list[dict], columns: Sequence[str], as_json: bool, out) -> None:
    if as_json:
        payload = [{col: _cell(row[col]) for col in columns} for row in rows]
        print(json.dumps(payload, indent=2), file=out)
    else:
        print("\t".join(columns), file=out)
        for row in rows:
            print("\t".join(_cell(row[col]) for col in columns), file=out)


def _report_row(params: CurveParams, report: BoundReport) -> dict:
    return {
        "q": params.q,
        "g": params.g,
        "method": report.method,
        "t1_lower": report.t1_lower,
        "n1_upper": report.n1_upper,
        "in_validity_range": report.in_validity_range,
        "notes": report.notes,
    }


REPORT_COLUMNS = ("q", "g", "method", "t1_lower", "n1_upper", "in_validity_range", "notes")


def _precision(bits: int) -> Fraction:
    if bits < 1:
        raise DomainError(f"--precision-bits must be >= 1, got {bits}")
    return Fraction(1, 2**bits)


def _budget(args) -> order3.SearchBudget:
    try:
        return order3.SearchBudget(
            scale_grid=args.scales, d_max=args.dmax, neighborhood=args.neighborhood
        )
    except ValueError as exc:
        raise DomainError(str(exc)) from exc


def ihara_serre_report(params: CurveParams) -> BoundReport:
    trace = refine2.ihara_serre_trace(params)
    notes = ""
    if refine2.ihara_alpha(params).is_integer():
        notes = "alpha integral; coincides with Ihara"
    in_range = params.g <= classical.g3_threshold(params.q).integer
    if not in_range:
        tail = "beyond the order-2 optimality range; order 3 is sharper"
        notes = f"{notes}; {tail}" if notes else tail
    return BoundReport.from_trace("ihara-serre", params, trace, in_range, notes)


def wo3_serre_report(params: CurveParams, budget: order3.SearchBudget) -> BoundReport:
    result = order3.search_matrix3(params, budget)
    lit = result.matrix.literal()
    notes = "matrix " + json.dumps(lit, sort_keys=True)
    in_range = params.g >= classical.g3_threshold(params.q).integer
    if not in_range:
        notes += "; below the order-3 optimality threshold"
    return BoundReport.from_trace("wo3-serre", params, result.t1_lower, in_range, notes)


def _matrix2_report(params: CurveParams, literal: dict) -> BoundReport:
    try:
        mat = refine2.RefineMatrix2(
            int(literal["d"]), Fraction(int(literal["two_a"]), 2), int(literal["b"])
        )
    except KeyError as exc:
        raise DomainError(f"--matrix for bound-a2 needs keys d, two_a, b (missing {exc})")
    trace = refine2.matrix_bound2(params, mat)
    return BoundReport.from_trace("bound-a2", params, trace)


def _matrix3_report(params: CurveParams, literal: dict) -> BoundReport:
    try:
        mat = order3.RefineMatrix3.from_literal(params.q, literal)
    except KeyError as exc:
        raise DomainError(f"--matrix for wo3 refinement needs keys d, two_a, b_x, b_y (missing {exc})")
    bound = order3.matrix_bound3(params, mat)
    in_range = params.g >= classical.g3_threshold(params.q).integer
    return BoundReport.from_trace("wo3-serre", params, bound, in_range,
                                  "matrix " + json.dumps(mat.literal(), sort_keys=True))


def best_report(params: CurveParams, precision: Fraction, budget: order3.SearchBudget) -> BoundReport:
    candidates = [
        classical.weil_serre_report(params),
        classical.weil_report(params),
    ]
    if params.g >= classical.g2_threshold(params.q).integer:
        candidates.append(ihara_serre_report(params))
        candidates.append(classical.ihara_report(params))
    if params.g >= classical.g3_threshold(params.q).integer:
        candidates.append(order3.wo3_report(params, precision))
        candidates.append(wo3_serre_report(params, budget))
    best = min(candidates, key=lambda r: r.n1_upper)
    notes = f"best of {len(candidates)} applicable methods ({best.method})"
    if best.notes:
        notes += "; " + best.notes
    return BoundReport(best.method, best.t1_lower, best.n1_upper, best.in_validity_range, notes)


def cmd_bound(args, out) -> int:
    params = CurveParams(args.q, args.g, check_prime_power=not args.no_check)
    literal = json.loads(args.matrix) if args.matrix else None
    precision = _precision(args.precision_bits)
    budget = _budget(args)
    method = args.method
    if method == "weil":
        report = classical.weil_report(params)
    elif method == "weil-serre":
        report = classical.weil_serre_report(params)
    elif method == "ihara":
        report = classical.ihara_report(params)
    elif method == "ihara-serre":
        report = ihara_serre_report(params)
    elif method == "bound-a2":
        if literal is None:
            raise DomainError("--matrix is required for method bound-a2")
        report = _matrix2_report(params, literal)
    elif method == "wo3":
        report = order3.wo3_report(params, precision)
    elif method == "wo3-serre":
        if literal is not None:
            report = _matrix3_report(params, literal)
        else:
            report = wo3_serre_report(params, budget)
    else:
        report = best_report(params, precision, budget)
    _emit([_report_row(params, report)], REPORT_COLUMNS, args.json, out)
    return EXIT_OK


def improvement_grid(qmax: int, gmax: int) -> list[TableEntry]:
    """All (q, g) on the grid where the refinement lowers the N1 floor.

    The genus runs from the order-2 threshold up to min(gmax, ceil(g3)); the
    partial genus at the top of the order-2 range is included.
    """
    entries = []
    for q in classical.prime_powers(2, qmax):
        lo = classical.g2_threshold(q).integer
        hi = min(gmax, classical.g3_threshold(q).exact.ceil())
        for g in range(lo, hi + 1):
            params = CurveParams(q, g)
            n_ihara = classical.ihara_report(params).n1_upper
            n_refined = BoundReport.from_trace(
                "ihara-serre", params, refine2.ihara_serre_trace(params)
            ).n1_upper
            if n_refined < n_ihara:
                entries.append(TableEntry(q, g, n_ihara, n_refined, True))
    return entries


TABLE_COLUMNS = ("q", "g", "ihara_n", "ihara_serre_n", "improved", "record_status")


def _table_rows(entries: list[TableEntry]) -> list[dict]:
    return [
        {
            "q": e.q,
            "g": e.g,
            "ihara_n": e.ihara_n,
            "ihara_serre_n": e.ihara_serre_n,
            "improved": e.improved,
            "record_status": e.record_status,
        }
        for e in entries
    ]


def cmd_table1(args, out) -> int:
    entries = improvement_grid(args.qmax, args.gmax)
    _emit(_table_rows(entries), TABLE_COLUMNS, args.json, out)
    return EXIT_OK


def cmd_rec3(args, out) -> int:
    rows = []
    for (q, g, _), report in zip(order3.RECORD3_MATRICES, order3.record_table3()):
        rows.append({
            "q": q,
            "g": g,
            "t1_lower": report.t1_lower,
            "n1_upper": report.n1_upper,
        })
    _emit(rows, ("q", "g", "t1_lower", "n1_upper"), args.json, out)
    return EXIT_OK


def cmd_scan_a3(args, out) -> int:
    params = CurveParams(args.q, args.g, check_prime_power=not args.no_check)
    result = order3.search_matrix3(params, _budget(args))
    lit = result.matrix.literal()
    n1 = (Quad(params.q + 1) - result.t1_lower).floor()
    rows = [{
        "q": params.q,
        "g": params.g,
        "d": lit["d"],
        "two_a": lit["two_a"],
        "b_x": lit["b_x"],
        "b_y": lit["b_y"],
        "t1_lower": result.t1_lower,
        "n1_upper": n1,
    }]
    _emit(rows, ("q", "g", "d", "two_a", "b_x", "b_y", "t1_lower", "n1_upper"), args.json, out)
    return EXIT_OK


def cmd_seq4q(args, out) -> int:
    rows = []
    for q in classical.prime_powers(34, args.qmax):
        rows.append({
            "q": q,
            "gain": refine2.gain_at_4q(q),
            "cap": refine2.gain_cap_at_4q(q),
        })
    _emit(rows, ("q", "gain", "cap"), args.json, out)
    return EXIT_OK


def cmd_asym(args, out) -> int:
    q = args.q
    if not args.no_check and not classical.is_prime_power(q):
        raise DomainError(f"q = {q} is not a prime power")
    lo = classical.g2_threshold(q).integer
    rows = []
    for g in range(lo, args.gmax + 1):
        rows.append({"g": g, "gain": refine2.serre_gain(CurveParams(q, g, check_prime_power=False))})
    _emit(rows, ("g", "gain"), args.json, out)
    return EXIT_OK


def load_records_csv(path: str) -> dict[tuple[int, int], RecordRow]:
    """Parse a records snapshot: header q,g,best_upper[,best_lower[,source]]."""
    records: dict[tuple[int, int], RecordRow] = {}
    try:
        handle = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DomainError(f"cannot read records CSV: {exc}") from exc
    with handle:
        header: Optional[list[str]] = None
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = next(csv.reader([line]))
            fields = [f.strip() for f in fields]
            if header is None:
                expected = ("q", "g", "best_upper", "best_lower", "source")
                if tuple(fields) != expected[: len(fields)] or len(fields) < 3:
                    raise DomainError(
                        f"line {lineno}: header must be q,g,best_upper[,best_lower[,source]]"
                    )
                header = fields
                continue
            if len(fields) < 3 or len(fields) > len(header):
                raise DomainError(f"line {lineno}: expected {len(header)} fields, got {len(fields)}")
            try:
                q, g = int(fields[0]), int(fields[1])
                best_upper = int(fields[2])
                best_lower = (
                    int(fields[3]) if len(fields) > 3 and fields[3] != "" else None
                )
            except ValueError as exc:
                raise DomainError(f"line {lineno}: {exc}") from exc
            source = fields[4] if len(fields) > 4 and fields[4] != "" else None
            if g < 0:
                raise DomainError(f"line {lineno}: g must be >= 0, got {g}")
            if not classical.is_prime_power(q):
                raise DomainError(f"line {lineno}: q = {q} is not a prime power")
            if best_lower is not None and best_lower > best_upper:
                raise DomainError(
                    f"line {lineno}: best_lower {best_lower} exceeds best_upper {best_upper}"
                )
            records[(q, g)] = RecordRow(q, g, best_upper, best_lower, source)
        if header is None:
            raise DomainError("line 1: empty records CSV")
    return records


def cmd_compare(args, out, err) -> int:
    records = load_records_csv(args.records)
    entries = improvement_grid(args.qmax, args.gmax)
    rows = []
    for entry in entries:
        rec = records.get((entry.q, entry.g))
        if rec is None:
            status = STATUS_NONE
        elif entry.ihara_serre_n < rec.best_upper:
            status = STATUS_NEW
        elif entry.ihara_serre_n == rec.best_upper:
            status = STATUS_MEETS
        else:
            status = STATUS_WORSE
        if rec is not None and rec.best_lower is not None and entry.ihara_serre_n < rec.best_lower:
            print(
                f"warning: computed bound {entry.ihara_serre_n} for "
                f"(q={entry.q}, g={entry.g}) is below the recorded lower bound "
                f"{rec.best_lower}; this indicates a bug somewhere",
                file=err,
            )
        rows.append({
            "q": entry.q,
            "g": entry.g,
            "ihara_n": entry.ihara_n,
            "ihara_serre_n": entry.ihara_serre_n,
            "improved": entry.improved,
            "record_status": status,
            "best_upper": "" if rec is None else rec.best_upper,
            "best_lower": "" if rec is None or rec.best_lower is None else rec.best_lower,
        })
    columns = TABLE_COLUMNS + ("best_upper", "best_lower")
    _emit(rows, columns, args.json, out)
    return EXIT_OK


def cmd_selftest(args, out) -> int:
    failures = 0

    def check(name: str, ok: bool) -> None:
        nonlocal failures
        print(f"{'PASS' if ok else 'FAIL'}: {name}", file=out)
        if not ok:
            failures += 1

    reports = order3.record_table3()
    expected = [
        (Fraction(-1723, 36), 53),
        (Fraction(-12348, 179), 76),
        (Fraction(-23352, 193), 129),
        (Fraction(-33580, 221), 163),
    ]
    ok = all(
        rep.t1_lower == Quad(t) and rep.n1_upper == n
        for rep, (t, n) in zip(reports, expected)
    )
    check("order-3 record bounds reproduce exactly", ok)

    params = CurveParams(11, 8)
    n_i = classical.ihara_report(params).n1_upper
    n_is = BoundReport.from_trace("ihara-serre", params, refine2.ihara_serre_trace(params)).n1_upper
    check("refinement lowers the (11, 8) floor by one", (n_i, n_is) == (56, 55))

    from . import verify

    ok = all(verify.check_affine_ineq(q, refine2.serre_cut(q).coeffs).holds for q in (2, 3, 5, 7))
    check("linear trace cut certifies for small non-square q", ok)

    u = Quad(-70, 66, 5)
    check("exact floor of a quadratic irrational", u.floor() == 77 and u.sign() > 0)

    rep = order3.wo3_report(CurveParams(5, 19))
    check("order-3 baseline floor at (5, 19)", rep.n1_upper == 54)
    found = order3.search_matrix3(CurveParams(5, 19))
    check(
        "matrix search reaches the (5, 19) record",
        found.t1_lower >= Quad(Fraction(-1723, 36)),
    )
    return EXIT_OK if failures == 0 else EXIT_RANGE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curvebounds",
        description="Exact upper bounds on point counts of curves over finite fields.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--json", action="store_true", help="emit JSON instead of TSV")
        p.add_argument("--no-check", action="store_true", help="skip the prime-power test on q")

    def add_budget(p: argparse.ArgumentParser) -> None:
        p.add_argument("--dmax", type=int, default=4, help="largest top-left entry to try")
        p.add_argument("--scales", type=int, default=32, help="kernel scale grid per unit d")
        p.add_argument("--neighborhood", type=int, default=2, help="rounding slack around targets")

    p = sub.add_parser("bound", help="one bound for one (q, g)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument(
        "--method",
        default="best",
        choices=["weil", "weil-serre", "ihara", "ihara-serre", "bound-a2", "wo3", "wo3-serre", "best"],
    )
    p.add_argument("--matrix", help="matrix literal JSON, e.g. '{\"d\":1,\"two_a\":7,\"b_x\":28,\"b_y\":-7}'")
    p.add_argument("--precision-bits", type=int, default=order3.DEFAULT_PRECISION_BITS)
    add_budget(p)
    add_common(p)

    p = sub.add_parser("table1", help="grid of floor-level improvements over the order-2 bound")
    p.add_argument("--qmax", type=int, default=100)
    p.add_argument("--gmax", type=int, default=50)
    add_common(p)

    p = sub.add_parser("rec3", help="the four order-3 record bounds")
    add_common(p)

    p = sub.add_parser("scan-a3", help="kernel-seeded order-3 matrix search")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    add_budget(p)
    add_common(p)

    p = sub.add_parser("seq4q", help="gain and cap along the family g = 4q")
    p.add_argument("--qmax", type=int, required=True)
    add_common(p)

    p = sub.add_parser("asym", help="gain as a function of g for fixed q")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--gmax", type=int, required=True)
    add_common(p)

    p = sub.add_parser("compare", help="join the improvement grid against a records CSV")
    p.add_argument("--records", required=True, help="CSV: q,g,best_upper[,best_lower[,source]]")
    p.add_argument("--qmax", type=int, default=100)
    p.add_argument("--gmax", type=int, default=50)
    add_common(p)

    p = sub.add_parser("selftest", help="quick internal consistency battery")
    add_common(p)

    return parser


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0,) else EXIT_OK
    try:
        if args.command == "bound":
            return cmd_bound(args, out)
        if args.command == "table1":
            return cmd_table1(args, out)
        if args.command == "rec3":
            return cmd_rec3(args, out)
        if args.command == "scan-a3":
            return cmd_scan_a3(args, out)
        if args.command == "seq4q":
            return cmd_seq4q(args, out)
        if args.command == "asym":
            return cmd_asym(args, out)
        if args.command == "compare":
            return cmd_compare(args, out, err)
        if args.command == "selftest":
            return cmd_selftest(args, out)
        raise AssertionError(f"unhandled command {args.command}")  # pragma: no cover
    except _RANGE_ERRORS as exc:
        print(f"error: {exc}", file=err)
        return EXIT_RANGE
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except (json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except CurveBoundsError as exc:  # pragma: no cover - catch-all
        print(f"error: {exc}", file=err)
        return EXIT_RANGE


def run() -> None:  # console-script entry point
    raise SystemExit(main())
