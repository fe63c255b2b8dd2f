"""Command-line surface.

Exit codes: 0 success/pass, 1 verification failure, 2 usage error,
3 density violation or infeasible depth.  Outputs are deterministic:
identical argv and input files produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import analysis
from .correlation import sarnak_demo
from .errors import (
    AlignmentError,
    ChecksumError,
    DensityViolation,
    EmptyCoreError,
    IncompleteDataError,
    InconsistencyError,
    InfeasibleDepth,
    InvalidParameterError,
    VersionError,
    WindowRangeError,
)
from .realization import TargetSequence, realize, verify_realization
from .schedule import build_schedule
from .sparse import SparseSetSpec
from .words import Alphabet


def _parse_range(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    try:
        return (int(lo), int(hi))
    except ValueError:
        raise InvalidParameterError(f"bad range {text!r}, expected LO:HI") from None


def _parse_target(text: str, alphabet: Alphabet) -> TargetSequence:
    if text == "mu-indicator":
        return TargetSequence.mu_indicator(alphabet)
    if text == "mu-sign":
        return TargetSequence.mu_sign(alphabet)
    if text.startswith("file:"):
        body = Path(text.split(":", 1)[1]).read_text().split()
        return TargetSequence.from_text("".join(body), alphabet, description=text)
    if text.startswith("text:"):
        return TargetSequence.from_text(text.split(":", 1)[1], alphabet, description=text)
    raise InvalidParameterError(f"cannot parse target sequence {text!r}")


def _fill_convention(profile: str, cycle_start: int) -> str:
    tail = "cycle-lex-restart" if profile == "faithful" else "pool-splitmix64"
    return f"pillar-first-ltr,{tail}@{cycle_start}"


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


# --- subcommands -------------------------------------------------------


def _cmd_schedule(args) -> int:
    sched = build_schedule(Alphabet(args.alphabet), SparseSetSpec.parse(args.sparse),
                           args.depth, profile=args.profile, seed=args.seed)
    print(f"profile: {sched.profile}")
    print(f"verified-range: {sched.verified_range[0]}:{sched.verified_range[1]}")
    print(f"{'k':<3} {'m_k':<12} {'|A_k|':<32} w_k")
    for k, m, card, digest in sched.describe_rows():
        print(f"{k:<3} {m:<12} {card:<32} {digest}")
    return 0


def _cmd_realize(args) -> int:
    alphabet = Alphabet(args.alphabet)
    sparse = SparseSetSpec.parse(args.sparse)
    sched = build_schedule(alphabet, sparse, args.depth, profile=args.profile,
                           seed=args.seed)
    u = _parse_target(args.u, alphabet)
    window = _parse_range(args.window) if args.window else None
    x = realize(u, sched, args.depth, window=window, cycle_start=args.cycle_start)
    from .windowfile import save_window

    save_window(args.out, x, alphabet=alphabet, profile=sched.profile,
                depth=args.depth, m_list=[sched.m(k) for k in range(args.depth + 1)],
                sparse=sparse.describe(), u=args.u,
                fill=_fill_convention(sched.profile, args.cycle_start),
                seed=args.seed)
    print(f"wrote {args.out}: offset={x.start} length={len(x)}")
    return 0


def _cmd_verify(args) -> int:
    from .windowfile import load_window

    rows: list[tuple[str, str, str]] = []
    try:
        wf = load_window(args.path)
    except (VersionError, ChecksumError, InconsistencyError) as exc:
        print(f"load      FAIL  {exc}")
        return 1
    rows.append(("checksum", "PASS", "payload matches recorded sha256-64"))

    sparse = SparseSetSpec.parse(wf.sparse)
    sched = build_schedule(wf.alphabet, sparse, wf.depth, profile=wf.profile,
                           seed=wf.seed)
    built = tuple(sched.m(k) for k in range(wf.depth + 1))
    if built == wf.m_list:
        rows.append(("m-list", "PASS", ",".join(str(m) for m in built)))
    else:
        rows.append(("m-list", "FAIL", f"rebuilt {built}, header {wf.m_list}"))

    try:
        u = _parse_target(wf.u, wf.alphabet)
    except (InvalidParameterError, FileNotFoundError):
        u = None
    if u is None:
        rows.append(("realization", "SKIP", f"target {wf.u!r} unavailable"))
    else:
        rep = verify_realization(wf.window, u, sparse)
        rows.append(("realization", "PASS" if rep.passed else "FAIL", rep.describe()))

    adm = analysis.window_admissibility_report(wf.window, sched, wf.depth)
    rows.append(("admissibility", "PASS" if adm.ok else "FAIL", adm.summary()))

    if wf.window.is_fully_defined():
        mini = analysis.minimality_witnesses(wf.window, sched, wf.depth)
        rows.append(("minimality", "PASS" if mini.ok else "FAIL",
                     "; ".join(f"{n}:{s}" for n, s, _ in mini.rows())))
    else:
        rows.append(("minimality", "SKIP", "window not fully defined"))

    for name, status, detail in rows:
        print(f"{name:<14}{status:<6}{detail}")
    return 0 if all(s != "FAIL" for _, s, _ in rows) else 1


def _cmd_complexity(args) -> int:
    from .windowfile import load_window

    wf = load_window(args.path)
    block_lengths = [m for m in wf.m_list if 1 < m <= args.nmax]
    report = analysis.complexity_profile(wf.window, args.nmax,
                                         aligned_lengths=block_lengths)
    if args.format == "json":
        _emit_json({
            "window_length": report.window_length,
            "source": report.source,
            "counts": {str(n): c for n, c in sorted(report.counts.items())},
            "aligned": {str(n): c for n, c in sorted(report.aligned.items())},
        })
    else:
        print("n,distinct")
        for n in sorted(report.counts):
            print(f"{n},{report.counts[n]}")
        for n in sorted(report.aligned):
            print(f"aligned-{n},{report.aligned[n]}")
    return 0


def _cmd_demo(args) -> int:
    demo = sarnak_demo(profile=args.profile, depth=args.depth, count=args.N,
                       seed=args.seed)
    if args.format == "json":
        _emit_json({"report": demo.report.as_dict(), "provenance": demo.provenance})
    else:
        print("N,numerator,denominator,value")
        for n, f in demo.report.rows:
            print(f"{n},{f.numerator},{f.denominator},{float(f)}")
    return 0


def _cmd_density(args) -> int:
    sparse = SparseSetSpec.parse(args.sparse)
    rng = _parse_range(args.range)
    count, _ = sparse.max_window_count(args.L, rng)
    quotient = count / args.L
    threshold = args.L / (3 * args.mk)
    ok = count < threshold
    verdict = "satisfies" if ok else "violates"
    print(f"max={count} quotient={quotient:.4f} {verdict} 1/(3·{args.mk})")
    return 0 if ok else 3


# --- parser ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blockshift",
        description="Finite windows of a minimal zero-entropy subshift with "
                    "prescribed values along a sparse set.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("schedule", help="print the level table (m_k, |A_k|, w_k)")
    p.add_argument("--alphabet", default="01")
    p.add_argument("--sparse", required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--profile", choices=("faithful", "fast"), default="faithful")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_schedule)

    p = sub.add_parser("realize", help="build a window file realizing a target")
    p.add_argument("--alphabet", default="01")
    p.add_argument("--sparse", required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--u", required=True,
                   help="mu-indicator | mu-sign | text:SYMBOLS | file:PATH")
    p.add_argument("--out", required=True)
    p.add_argument("--profile", choices=("faithful", "fast"), default="faithful")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cycle-start", type=int, default=0)
    p.add_argument("--window", default=None, help="LO:HI hull instead of the central block")
    p.set_defaults(func=_cmd_realize)

    p = sub.add_parser("verify", help="recheck a window file end to end")
    p.add_argument("path")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("complexity", help="distinct-subword profile of a window file")
    p.add_argument("path")
    p.add_argument("--nmax", type=int, default=24)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=_cmd_complexity)

    p = sub.add_parser("demo-sarnak", help="end-to-end correlation counterexample demo")
    p.add_argument("--profile", choices=("faithful", "fast"), default="faithful")
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--N", type=int, default=832)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.set_defaults(func=_cmd_demo)

    p = sub.add_parser("density", help="max window count and quotient for a sparse set")
    p.add_argument("--sparse", required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--range", required=True, help="LO:HI")
    p.add_argument("--mk", type=int, default=1)
    p.set_defaults(func=_cmd_density)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except (DensityViolation, InfeasibleDepth) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (VersionError, ChecksumError, InconsistencyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (InvalidParameterError, IncompleteDataError, AlignmentError,
            WindowRangeError, EmptyCoreError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
