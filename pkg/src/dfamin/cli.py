"""``dfamin`` command line.

Exit codes: 0 on success, 1 for malformed input or flags, 2 when a
verification suite fails.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .automata import AutomatonError, BudgetExceeded, DEFAULT_SUBSET_CAP, accessible_part, complete_dfa
from .experiments import (ALGORITHMS, rows_to_csv, run_iteration_experiment, run_time_benchmark,
                          run_unary_experiment, summarize, summary_to_csv)
from .randgen import MODES, SamplerConfig, SamplerModeError, sample_dfa, sample_unary, stream
from .textio import DfaFormatError, format_dfa, read_dfa, write_dfa
from .verify import SUITES, run_suite


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        values = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _config(args) -> SamplerConfig:
    try:
        return SamplerConfig(seed=args.seed, final_prob=getattr(args, "final_prob", 0.5),
                             exact_threshold=args.exact_threshold, mode=args.mode)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _write(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# -- subcommands --------------------------------------------------------------------------------

def cmd_gen(args) -> int:
    config = _config(args)
    if args.unary and args.k != 1:
        raise UsageError("--unary requires --k 1")
    out = Path(args.out) if args.out else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
    for i in range(args.count):
        rng = stream(args.seed, args.n, i)
        dfa = sample_unary(args.n, rng) if args.unary else sample_dfa(args.n, args.k, rng, config)
        if out:
            write_dfa(dfa, out / f"n{args.n}_k{args.k}_s{args.seed}_{i}.dfa")
        else:
            sys.stdout.write(format_dfa(dfa))
    return 0


def cmd_minimize(args) -> int:
    dfa = accessible_part(complete_dfa(read_dfa(args.input)))
    if args.algo == "brzozowski":
        report = ALGORITHMS["brzozowski"](dfa, args.cap)
    else:
        report = ALGORITHMS[args.algo](dfa)
    _write(format_dfa(report.minimal), args.out)
    if args.stats:
        sink = sys.stdout if args.out else sys.stderr
        print(f"algo={report.algo} input_states={report.input_n} minimal_states={report.minimal.n} "
              f"iterations={report.iterations} operations={report.operations} "
              f"elapsed_ns={report.elapsed_ns}", file=sink)
    return 0


def cmd_bench(args) -> int:
    unknown = [a for a in args.algos if a not in ALGORITHMS]
    if unknown:
        raise UsageError(f"unknown algorithms: {', '.join(unknown)}")
    rows = run_time_benchmark(args.algos, args.sizes, args.samples, args.k, _config(args), args.threads,
                              args.warmup, args.cap)
    _write(rows_to_csv(rows), args.csv)
    if args.summary:
        _write(summary_to_csv(summarize(rows)), args.summary)
    return 0


def cmd_iterations(args) -> int:
    rows = run_iteration_experiment(args.sizes, args.samples, args.k, _config(args), args.threads)
    _write(rows_to_csv(rows), args.csv)
    if args.summary:
        _write(summary_to_csv(summarize(rows)), args.summary)
    return 0


def cmd_unary(args) -> int:
    config = SamplerConfig(seed=args.seed)
    if args.exhaustive and args.n > 16:
        raise UsageError("--exhaustive supports n <= 16")
    row = run_unary_experiment(args.n, args.samples, config, exhaustive=args.exhaustive)
    _write(summary_to_csv([row]), args.csv)
    return 0


def cmd_verify(args) -> int:
    failed = 0
    for check in run_suite(args.suite, args.seed):
        print(check.line())
        failed += not check.passed
    return 2 if failed else 0


# -- parser -----------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dfamin", description="Minimize, generate and study deterministic automata.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def sampling(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--mode", choices=MODES, default="auto")
        p.add_argument("--exact-threshold", type=int, default=200)
        p.add_argument("--final-prob", type=float, default=0.5)

    def threads(p):
        p.add_argument("--threads", type=_positive, default=os.cpu_count() or 1,
                       help="worker processes (default: CPU count)")

    p = sub.add_parser("gen", help="write random automata as .dfa files")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--k", type=_positive, default=2)
    p.add_argument("--count", type=_positive, default=1)
    p.add_argument("--unary", action="store_true", help="uniform unary automata (needs --k 1)")
    p.add_argument("--out", help="output directory (default: stdout)")
    sampling(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("minimize", help="minimize a .dfa file")
    p.add_argument("--algo", choices=sorted(ALGORITHMS), default="hopcroft")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out")
    p.add_argument("--stats", action="store_true")
    p.add_argument("--cap", type=_positive, default=DEFAULT_SUBSET_CAP, help="subset budget for brzozowski")
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("bench", help="time minimizers on shared random inputs")
    p.add_argument("--algos", type=lambda s: s.split(","), default=["moore", "hopcroft"])
    p.add_argument("--sizes", type=_int_list, required=True)
    p.add_argument("--samples", type=_positive, default=10)
    p.add_argument("--k", type=_positive, default=2)
    p.add_argument("--warmup", type=int, default=1)
    p.add_argument("--cap", type=_positive, default=DEFAULT_SUBSET_CAP)
    p.add_argument("--csv")
    p.add_argument("--summary")
    sampling(p)
    threads(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("iterations", help="Moore iteration counts on random automata")
    p.add_argument("--sizes", type=_int_list, required=True)
    p.add_argument("--samples", type=_positive, default=500)
    p.add_argument("--k", type=_positive, default=2)
    p.add_argument("--csv")
    p.add_argument("--summary")
    sampling(p)
    threads(p)
    p.set_defaults(func=cmd_iterations)

    p = sub.add_parser("unary-exp", help="Moore on random unary automata")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=_positive, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_unary)

    p = sub.add_parser("verify", help="run self-check suites")
    p.add_argument("--suite", choices=("all",) + SUITES, default="all")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DfaFormatError, AutomatonError, SamplerModeError, BudgetExceeded, OSError,
            ValueError) as exc:
        print(f"dfamin: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
