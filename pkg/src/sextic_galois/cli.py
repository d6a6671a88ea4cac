"""Command-line front end.

    sextic-galois classify --field Q -- 1 1
    sextic-galois subfields --field "Q(sqrt -3)" -- 0 -5
    sextic-galois verify --field Q --prime-bound 10000 -- 0 2
    sextic-galois scan --fields F3,F5,F7 --format tsv

Exit status is 0 on success, 1 on user error and 2 when an internal
consistency check fails.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from math import lcm
from typing import Any, Sequence

from .classifier import ClassificationReport, Reducible, classify, finite_irreducibility
from .errors import (
    AmbiguityError,
    EmptySample,
    InternalInconsistency,
    ModelConstructionError,
    NoCandidate,
    SexticError,
)
from .fields import Field, FiniteField, Rationals, make_field
from .oracle import (
    ALL_TAGS,
    build_model,
    canonical_model,
    exhaustive_scan,
    ff_splitting_degree,
    frobenius_sample,
    identify,
)
from .poly import factor_degrees, trinomial
from .subfields import (
    catalog,
    degree_histogram,
    galois_invariance_check,
    numeric_instance,
    verify_catalog,
)

SCHEMA = 1
DEFAULT_PRIME_BOUND = 10_000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class _Inconsistent(Exception):
    """Raised after output is written when an oracle disagrees."""


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sextic-galois", description="Galois groups of x^6 + a x^3 + b.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def coefficients(p):
        p.add_argument("--field", default="Q", help='"Q", "Q(sqrt D)", "F{p}" or "F{p^k}"')
        p.add_argument("--format", choices=("json", "text"), default=None)
        p.add_argument("a", help="coefficient of x^3 (put -- before negative values)")
        p.add_argument("b", help="constant coefficient")

    coefficients(sub.add_parser("classify", help="classify the Galois group"))
    p = sub.add_parser("subfields", help="list intermediate fields")
    coefficients(p)
    p.add_argument("--check", action="store_true", help="verify the catalog numerically")
    p = sub.add_parser("verify", help="cross-check the classification with the oracles")
    coefficients(p)
    p.add_argument("--prime-bound", type=int, default=DEFAULT_PRIME_BOUND)
    p = sub.add_parser("scan", help="exhaustive irreducibility scan over finite fields")
    p.add_argument("--fields", required=True, help="comma-separated list, e.g. F3,F5,F{5^2}")
    p.add_argument("--format", choices=("json", "text", "tsv"), default=None)
    p.add_argument("--workers", type=int, default=1)
    return parser


# -- rendering ---------------------------------------------------------------------


def _fmt(K: Field, x) -> str | None:
    return None if x is None else K.format(x)


def _predicates_json(report: ClassificationReport) -> dict | None:
    p = report.predicates
    if p is None:
        return None
    K = report.field
    return {
        "delta": K.format(p.delta),
        "resolvent": str(p.resolvent),
        "zeta3_in_K": p.zeta3_in_K,
        "neg3delta_square": p.neg3delta_square,
        "n": _fmt(K, p.n),
        "b_is_cube": p.b_is_cube,
        "cbrt_b": _fmt(K, p.cbrt_b),
        "r_irreducible": p.r_irreducible,
        "r_root": _fmt(K, p.r_root),
        "separable": p.separable,
    }


def report_json(report: ClassificationReport) -> dict:
    K = report.field
    group = report.group
    out: dict[str, Any] = {
        "schema": SCHEMA,
        "group": group.tag if group else None,
        "case": group.theorem_case if group else None,
        "order": group.order if group else None,
        "branch": group.branch if group else None,
        "field": K.spec,
        "a": K.format(report.a),
        "b": K.format(report.b),
        "irreducible": group is not None,
    }
    res = report.result
    if isinstance(res, Reducible):
        out["factor_degrees"] = res.degrees
        out["factors"] = [str(f) for f in res.factors] if res.factors else None
    elif group is None:
        out["reason"] = getattr(res, "reason", None)
    out["predicates"] = _predicates_json(report)
    return out


def report_text(report: ClassificationReport) -> str:
    K = report.field
    head = f"x^6 + ({K.format(report.a)}) x^3 + ({K.format(report.b)}) over {K.spec}"
    lines = [head]
    group = report.group
    res = report.result
    if group:
        lines.append(f"group: {group.tag} (order {group.order}), case {group.theorem_case}, {group.branch}")
    elif isinstance(res, Reducible):
        lines.append(f"reducible, factor degrees {res.degrees}")
        if res.factors:
            lines.append("factors: " + " * ".join(f"({f})" for f in res.factors))
    else:
        lines.append(f"unsupported: {res.reason}")
    preds = _predicates_json(report)
    if preds:
        lines.extend(f"  {k}: {v}" for k, v in preds.items())
    return "\n".join(lines)


def dump_json(obj) -> str:
    return json.dumps(obj, ensure_ascii=False)


def _emit(obj: dict, text: str, fmt: str) -> None:
    print(dump_json(obj) if fmt == "json" else text)


def _default_format(requested: str | None, fallback: str = "json") -> str:
    if requested:
        return requested
    return "text" if sys.stdout.isatty() else fallback


# -- commands ------------------------------------------------------------------


def _parse_instance(args) -> tuple[Field, Any, Any]:
    K = make_field(args.field)
    return K, K.parse(args.a), K.parse(args.b)


def cmd_classify(args) -> int:
    K, a, b = _parse_instance(args)
    report = classify(a, b, K)
    _emit(report_json(report), report_text(report), _default_format(args.format))
    return 0


def _catalog_check(report: ClassificationReport) -> dict:
    group = report.group
    model = build_model(group)
    inst = numeric_instance(report)
    result = verify_catalog(catalog(report), model, inst)
    out = {
        "passed": result.passed,
        "precision_bits": result.prec,
        "failures": [{"entry": c.entry.label(), "problems": list(c.problems)} for c in result.failures],
        "duplicate_stabilizers": [list(p) for p in result.duplicate_stabilizers],
    }
    try:
        out["model_invariance"] = galois_invariance_check(model, inst)
    except ValueError:
        out["model_invariance"] = None
    return out


def cmd_subfields(args) -> int:
    K, a, b = _parse_instance(args)
    report = classify(a, b, K)
    entries = catalog(report)
    group = report.group
    summary = f"{len(entries)} proper subfields"
    obj = {
        "schema": SCHEMA,
        "group": group.tag,
        "case": group.theorem_case,
        "order": group.order,
        "branch": group.branch,
        "field": K.spec,
        "a": K.format(a),
        "b": K.format(b),
        "count": len(entries),
        "histogram": {str(k): v for k, v in degree_histogram(entries).items()},
        "summary": summary,
        "entries": [e.to_dict() for e in entries],
    }
    rows = [f"{e.degree}\t{'normal' if e.normal else '-'}\t{e.label()}" for e in entries]
    failed = False
    if args.check:
        if K.characteristic != 0:
            raise UsageError("--check needs a characteristic-zero field")
        obj["check"] = _catalog_check(report)
        failed = not obj["check"]["passed"] or obj["check"]["model_invariance"] is False
        rows.append("check: " + ("passed" if not failed else "FAILED"))
    rows.append(summary)
    _emit(obj, "\n".join(rows), _default_format(args.format))
    if failed:
        raise _Inconsistent("subfield catalog failed verification")
    return 0


def _integral_over_q(a: Fraction, b: Fraction) -> tuple[int, int]:
    # x -> x/L keeps the splitting field and clears denominators
    L = lcm(a.denominator, b.denominator)
    return int(a * L**3), int(b * L**6)


def cmd_verify(args) -> int:
    K, a, b = _parse_instance(args)
    report = classify(a, b, K)
    fmt = _default_format(args.format)
    group = report.group
    obj: dict[str, Any] = {
        "schema": SCHEMA,
        "group": group.tag if group else None,
        "case": group.theorem_case if group else None,
        "order": group.order if group else None,
        "field": K.spec,
        "a": K.format(a),
        "b": K.format(b),
    }
    lines = [report_text(report)]
    consistent = True
    if isinstance(K, FiniteField):
        f = trinomial(a, b, K)
        degs = factor_degrees(f)
        criterion = finite_irreducibility(a, b, K)
        split = ff_splitting_degree(f)
        obj["method"] = "splitting-degree"
        obj["factor_degrees"] = degs
        obj["splitting_degree"] = split
        obj["criterion_irreducible"] = criterion
        consistent = criterion == (degs == [6])
        if group is not None:
            consistent = consistent and split == 6 and group.tag == "C6"
        lines.append(f"factor degrees {degs}, splitting degree {split}, criterion says irreducible={criterion}")
    else:
        if group is None:
            raise UsageError("verify needs an irreducible trinomial in characteristic 0")
        if isinstance(K, Rationals):
            sa, sb = _integral_over_q(a, b)
            sample = frobenius_sample(sa, sb, args.prime_bound)
        else:
            sample = frobenius_sample(a, b, args.prime_bound, field=K)
        verdict = identify(sample, [canonical_model(t) for t in ALL_TAGS])
        obj["method"] = "frobenius"
        obj["prime_bound"] = args.prime_bound
        obj["samples"] = verdict.samples
        obj["observed"] = {
            ",".join(map(str, t)): n for t, n in sorted(sample.items(), reverse=True)
        }
        obj["status"] = verdict.status
        obj["ranking"] = [{"group": t, "distance": round(d, 6)} for t, d in verdict.ranking]
        obj["excluded"] = verdict.excluded
        obj["agrees"] = group.tag in verdict.top
        obj["catalog"] = _catalog_check(report)
        consistent = (
            group.tag not in verdict.excluded
            and obj["catalog"]["passed"]
            and obj["catalog"]["model_invariance"] is not False
        )
        lines.append(f"frobenius: {verdict.samples} primes, {verdict.status}, top {verdict.top}")
        lines.extend(f"  {t}: {d:.4f}" for t, d in verdict.ranking)
        if verdict.excluded:
            lines.append(f"  excluded: {', '.join(verdict.excluded)}")
        lines.append(f"catalog check: {'passed' if obj['catalog']['passed'] else 'FAILED'}")
    obj["consistent"] = consistent
    lines.append("consistent" if consistent else "INCONSISTENT")
    _emit(obj, "\n".join(lines), fmt)
    if not consistent:
        raise _Inconsistent("oracle disagrees with the classification")
    return 0


def cmd_scan(args) -> int:
    qs = []
    for spec in args.fields.split(","):
        K = make_field(spec.strip())
        if not isinstance(K, FiniteField):
            raise UsageError(f"scan needs finite fields, got {spec!r}")
        qs.append(K.q)
    report = exhaustive_scan(qs, workers=args.workers)
    fmt = _default_format(args.format, fallback="tsv")
    if fmt == "tsv":
        sys.stdout.write(report.to_tsv())
    else:
        obj = {
            "schema": SCHEMA,
            "rows": [
                {
                    "q": r.q,
                    "total_pairs": r.total_pairs,
                    "irreducible_count": r.irreducible_count,
                    "disagreements": r.disagreements,
                }
                for r in report.rows
            ],
            "offending": [list(o) for r in report.rows for o in r.offending],
        }
        text = report.to_tsv().rstrip("\n")
        _emit(obj, text, fmt)
    for r in report.rows:
        for q, a, b, reason in r.offending:
            print(f"F_{q}: a={a} b={b}: {reason}", file=sys.stderr)
    if report.disagreements:
        raise _Inconsistent(f"{report.disagreements} disagreements")
    return 0


COMMANDS = {
    "classify": cmd_classify,
    "subfields": cmd_subfields,
    "verify": cmd_verify,
    "scan": cmd_scan,
}


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return COMMANDS[args.command](args)
    except (InternalInconsistency, ModelConstructionError, NoCandidate, AmbiguityError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2
    except _Inconsistent as exc:
        print(f"inconsistent: {exc}", file=sys.stderr)
        return 2
    except (UsageError, SexticError, ValueError, EmptySample) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
