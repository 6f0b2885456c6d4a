"""Command line: ``expand``, ``verify`` and ``relations``.

Exit codes: 0 everything passed, 1 a check failed, 2 usage error,
3 arithmetic error (coefficient overflow).
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence

from . import bailey, characters, heckerogers, qkernel, relations
from .report import FAIL, PASS, SIGN_FLIPPED_PASS, Stopwatch, VerificationReport, compare, locate
from .series import CoefficientOverflowError, TruncSeries, format_dump

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_ARITH = 0, 1, 2, 3
DEFAULT_TERMS = 500

BAILEY_N_MAX = 40
CONJ_N_MAX = 30
EX10_K_MAX = 10


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# expand

_EXPANDABLE: Dict[str, Callable[[int], TruncSeries]] = {
    **{name: (lambda n, name=name: qkernel.mock_series(name, n)) for name in qkernel.MOCK_IDS},
    **{fid: (lambda n, fid=fid: qkernel.normalized(fid, n)) for fid in qkernel.NORMALIZED_IDS},
    "eta": qkernel.eta,
}


def cmd_expand(args) -> int:
    if args.id not in _EXPANDABLE:
        raise UsageError(f"unknown series {args.id!r}; expected one of {', '.join(_EXPANDABLE)}")
    text = format_dump(_EXPANDABLE[args.id](args.terms))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def _chi01a(order: int) -> VerificationReport:
    """Printed left side is ``(q)_inf (chi0 - 2) = -C0``; the opposite sign is reported, not hidden."""
    clock = Stopwatch()
    rhs = heckerogers.chi0_hecke(order)
    printed = -qkernel.normalized("C0", order)
    miss = locate(printed, rhs)
    if miss is None:
        return VerificationReport("chi01a", order, PASS, None, clock.ms, "orientation: (q)_inf (chi0 - 2) as printed")
    if locate(-printed, rhs) is None:
        return VerificationReport(
            "chi01a", order, SIGN_FLIPPED_PASS, None, clock.ms, "orientation: double sums equal (q)_inf (2 - chi0)"
        )
    return VerificationReport("chi01a", order, FAIL, miss, clock.ms, "matches neither orientation")


def _hecke(identity: str, target: str) -> Callable[[int], VerificationReport]:
    def run(order: int) -> VerificationReport:
        clock = Stopwatch()
        return compare(identity, heckerogers.hecke_series(identity, order), qkernel.normalized(target, order), clock)

    return run


def _theta(spec_name: str, target: str, report_id: str) -> Callable[[int], VerificationReport]:
    def run(order: int) -> VerificationReport:
        clock = Stopwatch()
        spec = characters.theta_spec(spec_name)
        return compare(report_id, characters.eval_theta(spec, order), qkernel.normalized(target, order), clock)

    return run


def _bailey_pair(name: str) -> Callable[[int], VerificationReport]:
    return lambda order: bailey.verify_bailey_pair(bailey.slater_pair(name), BAILEY_N_MAX, order)


def _transform(name: str) -> Callable[[int], VerificationReport]:
    return lambda order: bailey.chain_check(bailey.slater_pair(name), order)


def _pentagonal(order: int) -> VerificationReport:
    clock = Stopwatch()
    return compare(
        "pentagonal",
        qkernel.euler_product_pentagonal(order),
        qkernel.pochhammer(qkernel.PochSpec(1), order),
        clock,
    )


def _eulerian_forms(order: int) -> VerificationReport:
    clock = Stopwatch()
    firsts = {"chi0": qkernel.chi0, "chi1": qkernel.chi1, "F0": qkernel.F0, "F1": qkernel.F1, "F2": qkernel.F2}
    seconds = {
        "chi0": qkernel.chi0_second,
        "chi1": qkernel.chi1_second,
        "F0": qkernel.F0_second,
        "F1": qkernel.F1_second,
        "F2": qkernel.F2_second,
    }
    for name in qkernel.MOCK_IDS:
        miss = locate(firsts[name](order), seconds[name](order))
        if miss is not None:
            return VerificationReport("eulerian-forms", order, FAIL, miss, clock.ms, f"{name}: forms differ")
    return VerificationReport("eulerian-forms", order, PASS, None, clock.ms, "chi0 chi1 F0 F1 F2")


VERIFIERS: Dict[str, Callable[[int], VerificationReport]] = {
    "chi01a": _chi01a,
    "chi01b": _hecke("chi01b", "C1"),
    "F0id": _hecke("F0id", "f0"),
    "F1id": _hecke("F1id", "f1"),
    "F2id": _hecke("F2id", "f2"),
    "zagier:chi0": _theta("zagier_chi0", "C0", "zagier:chi0"),
    "zagier:chi1": _theta("zagier_chi1", "C1", "zagier:chi1"),
    "char:chi0": _theta("char_chi0", "C0", "char:chi0"),
    "char:chi1": _theta("char_chi1", "C1", "char:chi1"),
    "char:F0": _theta("char_F0", "f0", "char:F0"),
    "char:F1": _theta("char_F1", "f1", "char:F1"),
    "char:F2": _theta("char_F2", "f2", "char:F2"),
    **{f"bailey:{p}": _bailey_pair(p) for p in bailey.SLATER_PAIRS},
    "conjpair": lambda order: bailey.verify_conjugate_pair(CONJ_N_MAX, order),
    **{f"transform:{p}": _transform(p) for p in bailey.SLATER_PAIRS},
    "andrews-ex10": lambda order: bailey.andrews_ex10_check(EX10_K_MAX, order),
    "pentagonal": _pentagonal,
    "eulerian-forms": _eulerian_forms,
}


def run_verifications(ids: Sequence[str], order: int, workers: Optional[int] = None) -> List[VerificationReport]:
    """Run the named checks concurrently; reports come back sorted by id."""
    for i in ids:
        if i not in VERIFIERS:
            raise UsageError(f"unknown identity {i!r}")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        reports = list(pool.map(lambda i: VERIFIERS[i](order), ids))
    return sorted(reports, key=lambda r: r.identity_id)


def _write_json(path: str, items: List[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(items, fh, indent=2, ensure_ascii=False)
        fh.write("\n")


def cmd_verify(args) -> int:
    ids = sorted(VERIFIERS) if args.id == "all" else [args.id]
    if args.id != "all" and args.id not in VERIFIERS:
        raise UsageError(f"unknown identity {args.id!r}; try 'all' or one of {', '.join(sorted(VERIFIERS))}")
    reports = run_verifications(ids, args.terms)
    for r in reports:
        print(r.line())
    if args.json:
        _write_json(args.json, [r.to_dict() for r in reports])
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


# ---------------------------------------------------------------------------
# relations


def _required_order(args) -> int:
    if args.which == "f25":
        return relations.f25_order(args.nmax)
    if args.which == "chirels":
        return relations.chirels_order(args.prime, args.nmax, args.vanish_to)
    order = relations.mock7rels_order(args.prime, args.nmax)
    return max(order, args.vanish_to or 0)


def cmd_relations(args) -> int:
    if args.which != "f25" and args.prime is None:
        raise UsageError(f"relations {args.which} needs --prime")
    try:
        needed = _required_order(args)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.terms is not None and args.terms < needed:
        raise UsageError(f"--terms {args.terms} is too small: this check needs the series to q^{needed}")
    if args.which == "f25":
        report = relations.check_f25(args.nmax)
    elif args.which == "chirels":
        report = relations.check_chirels(args.prime, args.nmax, args.vanish_to)
    else:
        report = relations.check_mock7rels(args.prime, args.nmax, args.vanish_to)
    print(report.line())
    if args.json:
        _write_json(args.json, [report.to_dict()])
    return EXIT_OK if report.passed else EXIT_FAIL


# ---------------------------------------------------------------------------


def _nonnegative(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"{text} is negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mocktheta", description="Exact q-series checks for mock theta identities.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="print coefficients of a series")
    p.add_argument("id", help=", ".join(_EXPANDABLE))
    p.add_argument("--terms", type=_nonnegative, default=DEFAULT_TERMS, help="truncation order N")
    p.add_argument("--out", help="write the dump here instead of stdout")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("verify", help="check an identity (or 'all') exactly to q^N")
    p.add_argument("id")
    p.add_argument("--terms", type=_nonnegative, default=DEFAULT_TERMS, help="truncation order N")
    p.add_argument("--json", help="write the reports as a JSON array")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("relations", help="coefficient relations and vanishing sweeps")
    p.add_argument("which", choices=("chirels", "mock7", "f25"))
    p.add_argument("--prime", type=int)
    p.add_argument("--nmax", type=_nonnegative, default=20)
    p.add_argument("--terms", type=_nonnegative, help="refuse to run if this is below the needed order")
    p.add_argument("--vanish-to", type=_nonnegative, default=None, help="upper n for the vanishing sweep")
    p.add_argument("--json", help="write the report as a JSON array")
    p.set_defaults(func=cmd_relations)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "which", None) == "chirels" and args.vanish_to is None:
        args.vanish_to = 1500
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CoefficientOverflowError as exc:
        print(f"arithmetic error: {exc}", file=sys.stderr)
        return EXIT_ARITH


if __name__ == "__main__":
    sys.exit(main())
