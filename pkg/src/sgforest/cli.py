"""Command-line interface.

Exit codes: 0 success with no Wilf violations, 1 when violations were found
(their gap sets are printed), 2 on usage/configuration errors, 3 on I/O
errors.  All error messages carry the machine-parsable prefix ``error:``.

``--max-genus`` is the exploration depth; ``--bound-genus`` is the bound G
used inside the trim inequalities (defaults to the depth).  Keeping them
separate lets a shallow run reproduce the exact prefix of a deeply bounded
trimmed enumeration, because the cut predicates depend only on the node and
on G.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from decimal import ROUND_HALF_EVEN, Decimal

from . import oracle
from .explore import (
    CheckpointError,
    CounterOverflowError,
    ExplorationReport,
    WorkerError,
    explore_parallel,
)
from .state import format_gap_set
from .trim import TrimPolicy

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2
EXIT_IO = 3

WORKERS_ENV = "SGFOREST_WORKERS"
THIN_SPACE = " "


@dataclasses.dataclass
class RunConfig:
    """Validated configuration of a count/wilf run."""

    command: str
    max_genus: int
    bound_genus: int
    denominator: int | None
    special_rule: bool
    left_size_rule: bool
    trim_ordinary_embedding: bool
    workers: int
    frontier_genus: int | None
    out: str | None
    format: str
    checkpoint: str | None
    checkpoint_interval: float
    resume: str | None

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        if args.max_genus < 0:
            raise ValueError(f"--max-genus must be >= 0, got {args.max_genus}")
        bound = args.bound_genus
        if bound is None:
            bound = max(args.max_genus, 1)
        elif bound < args.max_genus:
            raise ValueError(
                f"--bound-genus {bound} must not be below --max-genus "
                f"{args.max_genus}")
        raw_d = args.trim_denominator.strip().lower()
        if raw_d == "none":
            denominator = None
        else:
            try:
                denominator = int(raw_d)
            except ValueError:
                raise ValueError(
                    f"--trim-denominator must be 'none' or an integer >= 3, "
                    f"got {args.trim_denominator!r}") from None
            if denominator < 3:
                raise ValueError(
                    f"--trim-denominator must be >= 3, got {denominator}")
        workers = args.workers
        if workers is None:
            env = os.environ.get(WORKERS_ENV, "").strip()
            if env:
                try:
                    workers = int(env)
                except ValueError:
                    raise ValueError(
                        f"{WORKERS_ENV}={env!r} is not an integer") from None
            else:
                workers = 1
        if workers < 1:
            raise ValueError(f"--workers must be >= 1, got {workers}")
        if args.frontier_genus is not None and not (
                0 <= args.frontier_genus <= args.max_genus):
            raise ValueError(
                f"--frontier-genus must be in [0, {args.max_genus}], "
                f"got {args.frontier_genus}")
        if args.checkpoint_interval < 0:
            raise ValueError("--checkpoint-interval must be >= 0")
        return cls(
            command=args.command,
            max_genus=args.max_genus,
            bound_genus=bound,
            denominator=denominator,
            special_rule=args.special_trim,
            left_size_rule=args.left_size_trim,
            trim_ordinary_embedding=args.trim_ordinary_embedding,
            workers=workers,
            frontier_genus=args.frontier_genus,
            out=args.out,
            format=args.format,
            checkpoint=args.checkpoint,
            checkpoint_interval=args.checkpoint_interval,
            resume=args.resume,
        )

    def policy(self) -> TrimPolicy:
        return TrimPolicy(
            genus_bound=self.bound_genus,
            denominator=self.denominator,
            left_size_rule=self.left_size_rule,
            special_rule=self.special_rule,
            trim_ordinary_embedding=self.trim_ordinary_embedding,
        )


def _group_digits(n: int) -> str:
    return f"{n:,}".replace(",", THIN_SPACE)


def emit_counts(report: ExplorationReport, fmt: str = "csv") -> str:
    """Counts table, one row per genus 0..depth; header ``g,count``."""
    rows = list(enumerate(report.counts))
    if fmt == "csv":
        lines = ["g,count"] + [f"{g},{c}" for g, c in rows]
    elif fmt == "tsv":
        lines = ["g\tcount"] + [f"{g}\t{c}" for g, c in rows]
    elif fmt == "pretty":
        cells = [(str(g), _group_digits(c)) for g, c in rows]
        wg = max(len("g"), *(len(a) for a, _ in cells))
        wc = max(len("count"), *(len(b) for _, b in cells))
        lines = [f"{'g':>{wg}}  {'count':>{wc}}"]
        lines += [f"{a:>{wg}}  {b:>{wc}}" for a, b in cells]
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return "\n".join(lines) + "\n"


def _parse_counts_csv(text: str) -> list[int]:
    lines = [line for line in text.split("\n") if line.strip()]
    if not lines or lines[0].strip() != "g,count":
        raise ValueError("malformed counts CSV: expected header 'g,count'")
    counts = []
    for i, line in enumerate(lines[1:]):
        parts = line.strip().split(",")
        try:
            g, c = int(parts[0]), int(parts[1])
        except (ValueError, IndexError):
            raise ValueError(
                f"malformed counts CSV at data row {i + 1}: {line!r}") from None
        if g != i or c < 0:
            raise ValueError(
                f"malformed counts CSV at data row {i + 1}: expected genus {i}")
        counts.append(c)
    if not counts:
        raise ValueError("counts CSV has no data rows")
    return counts


def emit_ratios(counts_csv: str) -> str:
    """Consecutive-genus growth ratios at 6 decimal places (half-even)."""
    counts = _parse_counts_csv(counts_csv)
    lines = ["g,count,ratio"]
    quantum = Decimal("0.000001")
    for g, c in enumerate(counts):
        if g == 0 or counts[g - 1] == 0:
            ratio = ""
        else:
            ratio = str((Decimal(c) / Decimal(counts[g - 1]))
                        .quantize(quantum, rounding=ROUND_HALF_EVEN))
        lines.append(f"{g},{c},{ratio}")
    return "\n".join(lines) + "\n"


def fibonacci_check(counts_csv: str) -> str:
    """Report every genus where count[g] < count[g-1] + count[g-2]."""
    counts = _parse_counts_csv(counts_csv)
    lines = []
    for g in range(2, len(counts)):
        lhs, rhs = counts[g], counts[g - 1] + counts[g - 2]
        if lhs < rhs:
            lines.append(
                f"violation at g={g}: {lhs} < {counts[g - 1]} + {counts[g - 2]}")
    if not lines:
        lines = ["no violations"]
    return "\n".join(lines) + "\n"


def _write_output(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _cmd_explore(args) -> int:
    cfg = RunConfig.from_args(args)
    report = explore_parallel(
        cfg.policy(),
        cfg.max_genus,
        workers=cfg.workers,
        frontier_genus=cfg.frontier_genus,
        checkpoint_path=cfg.checkpoint,
        checkpoint_interval=cfg.checkpoint_interval,
        resume_path=cfg.resume,
    )
    _write_output(cfg.out, emit_counts(report, cfg.format))
    for gaps in report.violations:
        print(f"violation: {format_gap_set(gaps)}", file=sys.stderr)
    return EXIT_VIOLATIONS if report.violations else EXIT_OK


def _cmd_ratios(args) -> int:
    with open(args.input, encoding="utf-8") as fh:
        text = fh.read()
    _write_output(args.out, emit_ratios(text))
    return EXIT_OK


def _cmd_fib_check(args) -> int:
    with open(args.input, encoding="utf-8") as fh:
        text = fh.read()
    _write_output(args.out, fibonacci_check(text))
    return EXIT_OK


def _cmd_oracle_check(args) -> int:
    if args.max_genus < 0 or args.max_genus > oracle.RECOMPUTE_MAX:
        raise ValueError(
            f"--max-genus must be in [0, {oracle.RECOMPUTE_MAX}] for "
            f"oracle-check, got {args.max_genus}")
    discrepancies = oracle.assert_equivalence(args.max_genus)
    for line in discrepancies:
        print(f"discrepancy: {line}", file=sys.stderr)
    if discrepancies:
        print(f"oracle check failed with {len(discrepancies)} discrepancies "
              f"(g <= {args.max_genus})")
        return EXIT_VIOLATIONS
    print(f"oracle check passed (g <= {args.max_genus})")
    return EXIT_OK


def _add_exploration_flags(sub) -> None:
    sub.add_argument("--max-genus", type=int, required=True,
                     help="exploration depth (maximum genus to visit)")
    sub.add_argument("--bound-genus", type=int, default=None,
                     help="bound G inside the trim inequalities "
                          "(default: --max-genus)")
    sub.add_argument("--trim-denominator", default="none", metavar="D",
                     help="'none' for the full tree, or an integer >= 3 to cut "
                          "subtrees with e_l >= m/D or e >= m/D + (G-g)")
    sub.add_argument("--special-trim", action="store_true",
                     help="also cut non-special nodes that cannot have "
                          "special descendants")
    sub.add_argument("--left-size-trim", action="store_true",
                     help="also cut nodes with |L| >= G/3")
    sub.add_argument("--trim-ordinary-embedding",
                     action=argparse.BooleanOptionalAction, default=True,
                     help="apply the embedding-dimension cut to ordinary "
                          "nodes too")
    sub.add_argument("--workers", type=int, default=None,
                     help=f"worker threads (default: ${WORKERS_ENV} or 1)")
    sub.add_argument("--frontier-genus", type=int, default=None,
                     help="genus at which the tree is split into parallel "
                          "tasks (default: min(depth, 22))")
    sub.add_argument("--out", default=None, help="output file (default: stdout)")
    sub.add_argument("--format", choices=("csv", "tsv", "pretty"),
                     default="csv")
    sub.add_argument("--checkpoint", default=None, metavar="PATH",
                     help="write resumable progress snapshots to PATH")
    sub.add_argument("--checkpoint-interval", type=float, default=60.0,
                     metavar="SECONDS")
    sub.add_argument("--resume", default=None, metavar="PATH",
                     help="resume from a checkpoint written by --checkpoint")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sgforest",
        description="Enumerate the tree of numerical semigroups up to a genus "
                    "bound, with subtree trimming and Wilf verification.")
    subs = parser.add_subparsers(dest="command", required=True)

    count = subs.add_parser(
        "count", help="per-genus node counts of the (optionally trimmed) tree")
    _add_exploration_flags(count)
    count.set_defaults(func=_cmd_explore)

    wilf = subs.add_parser(
        "wilf", help="verify e*|L| >= c on every retained node while counting")
    _add_exploration_flags(wilf)
    wilf.set_defaults(func=_cmd_explore)

    ratios = subs.add_parser(
        "ratios", help="growth ratios count[g]/count[g-1] from a counts CSV")
    ratios.add_argument("input", help="counts CSV produced by count/wilf")
    ratios.add_argument("--out", default=None)
    ratios.set_defaults(func=_cmd_ratios)

    fib = subs.add_parser(
        "fib-check",
        help="check count[g] >= count[g-1] + count[g-2] on a counts CSV")
    fib.add_argument("input", help="counts CSV produced by count/wilf")
    fib.add_argument("--out", default=None)
    fib.set_defaults(func=_cmd_fib_check)

    ocheck = subs.add_parser(
        "oracle-check",
        help="cross-check the kernel against the slow reference "
             "implementations")
    ocheck.add_argument("--max-genus", type=int, default=10)
    ocheck.set_defaults(func=_cmd_oracle_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (ValueError, CheckpointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (CounterOverflowError, WorkerError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def entrypoint() -> None:
    raise SystemExit(main(sys.argv[1:]))
