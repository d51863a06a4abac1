"""Seeded experiment runners producing CSV-ready rows.

Sample ``i`` at size ``n`` always draws from ``stream(seed, n, i)``, so the
rows are identical whatever the number of worker processes.  Only the
minimization call is timed.  Rows from approximately uniform sampling carry
an ``+approx`` suffix in their ``algo`` field.
"""

from __future__ import annotations

import csv
import io
import math
import statistics
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields
from typing import Iterable, Sequence

import numpy as np

from .automata import DEFAULT_SUBSET_CAP, BudgetExceeded, Dfa
from .brzozowski import brzozowski_minimize
from .hopcroft import hopcroft_minimize
from .moore import moore_minimize
from .oracle import tablefill_minimize
from .randgen import SamplerConfig, longest_run_int, sample_dfa, sample_unary, stream, unary_dfa

ALGORITHMS = {
    "moore": moore_minimize,
    "hopcroft": hopcroft_minimize,
    "brzozowski": brzozowski_minimize,
    "tablefill": tablefill_minimize,
}

ROW_HEADER = "n,k,seed,sample_index,algo,iterations,minimal_size,elapsed_ns"
SUMMARY_HEADER = "n,k,algo,samples,mean_iterations,stddev,mean_elapsed_ns,fraction_minimal"


@dataclass(frozen=True, order=True)
class ExperimentRow:
    n: int
    k: int
    seed: int
    sample_index: int
    algo: str
    iterations: int
    minimal_size: int
    elapsed_ns: int

    def sort_key(self):
        return (self.n, self.algo, self.sample_index)


@dataclass(frozen=True)
class SummaryRow:
    n: int
    k: int
    algo: str
    samples: int
    mean_iterations: float
    stddev: float
    mean_elapsed_ns: float
    fraction_minimal: float | None = None


@dataclass(frozen=True)
class GrowthFit:
    slope_log: float
    intercept_log: float
    residual_log: float
    slope_loglog: float
    intercept_loglog: float
    residual_loglog: float

    @property
    def better(self) -> str:
        return "log" if self.residual_log <= self.residual_loglog else "loglog"


# -- sampling helpers ------------------------------------------------------------------

def _sample_input(n: int, k: int, index: int, config: SamplerConfig) -> tuple[Dfa, bool]:
    dfa = sample_dfa(n, k, stream(config.seed, n, index), config)
    return dfa, config.resolve(n, k) == "approx"


def _tag(algo: str, approx: bool) -> str:
    return algo + "+approx" if approx else algo


def _run_chunk(task):
    kind, n, k, indices, config, algos, cap, warmup = task
    rows = []
    for _ in range(warmup):
        dfa, _approx = _sample_input(n, k, indices[0], config)
        for algo in algos:
            _minimize(algo, dfa, cap)
    for i in indices:
        dfa, approx = _sample_input(n, k, i, config)
        for algo in algos:
            iterations, size, elapsed = _minimize(algo, dfa, cap)
            rows.append(ExperimentRow(n, k, config.seed, i, _tag(algo, approx), iterations, size, elapsed))
    return rows


def _minimize(algo: str, dfa: Dfa, cap: int) -> tuple[int, int, int]:
    if algo == "brzozowski":
        try:
            report = brzozowski_minimize(dfa, cap)
        except BudgetExceeded as exc:
            # budget marker: iterations -1, minimal_size holds the subset count reached
            return -1, exc.created, 0
    else:
        report = ALGORITHMS[algo](dfa)
    return report.iterations, report.minimal.n, report.elapsed_ns


def _execute(tasks, threads: int):
    if threads <= 1 or len(tasks) <= 1:
        results = [_run_chunk(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_run_chunk, tasks))
    rows = [r for chunk in results for r in chunk]
    rows.sort(key=ExperimentRow.sort_key)
    return rows


def _tasks(kind, sizes, samples, k, config, algos, cap, threads, warmup):
    tasks = []
    chunks = max(1, threads)
    for n in sizes:
        idx = list(range(samples))
        for c in range(chunks):
            part = idx[c::chunks]
            if part:
                tasks.append((kind, n, k, part, config, algos, cap, warmup))
    return tasks


def run_iteration_experiment(sizes: Sequence[int], samples_per_size: int, k: int,
                             config: SamplerConfig | None = None, threads: int = 1) -> list[ExperimentRow]:
    """Moore iteration counts on uniform random automata, ``samples_per_size`` per size."""
    config = config or SamplerConfig()
    return _execute(_tasks("iterations", sizes, samples_per_size, k, config, ("moore",),
                           DEFAULT_SUBSET_CAP, threads, 0), threads)


def run_time_benchmark(algos: Sequence[str], sizes: Sequence[int], samples: int, k: int,
                       config: SamplerConfig | None = None, threads: int = 1, warmup: int = 1,
                       cap: int = DEFAULT_SUBSET_CAP) -> list[ExperimentRow]:
    """Wall-clock time per minimization; every algorithm sees the same inputs."""
    unknown = set(algos) - ALGORITHMS.keys()
    if unknown:
        raise ValueError(f"unknown algorithms: {sorted(unknown)}")
    config = config or SamplerConfig()
    return _execute(_tasks("bench", sizes, samples, k, config, tuple(algos), cap, threads, warmup), threads)


# -- unary automata ------------------------------------------------------------------------

def _unary_stats(automata: Iterable[Dfa], n: int, label: str) -> SummaryRow:
    its = []
    minimal = 0
    elapsed = 0
    for dfa in automata:
        report = moore_minimize(dfa)
        its.append(report.iterations)
        minimal += report.minimal.n == n
        elapsed += report.elapsed_ns
    count = len(its)
    return SummaryRow(n, 1, label, count, statistics.fmean(its),
                      statistics.pstdev(its) if count > 1 else 0.0, elapsed / count, minimal / count)


def run_unary_experiment(n: int, samples: int, config: SamplerConfig | None = None,
                         exhaustive: bool = False) -> SummaryRow:
    """Moore iterations and the fraction of minimal automata over unary automata.

    With ``exhaustive`` every one of the ``n * 2^n`` automata is visited once
    and ``samples`` is ignored.
    """
    if n < 2:
        raise ValueError("unary experiments need n >= 2")
    config = config or SamplerConfig()
    if exhaustive:
        if n > 16:
            raise ValueError("exhaustive unary sweep is limited to n <= 16")

        def every():
            for back in range(n):
                for mask in range(1 << n):
                    yield unary_dfa((mask >> np.arange(n)) & 1, back)

        return _unary_stats(every(), n, "moore")

    def sampled():
        for i in range(samples):
            yield sample_unary(n, stream(config.seed, n, i))

    return _unary_stats(sampled(), n, "moore")


# -- longest runs ---------------------------------------------------------------------------

def predicted_run_probability(n: int, h: float) -> float:
    """Limit law for P(longest run of 1s < floor(log2 n + h)) on uniform words of length n."""
    lg = math.log2(n)
    alpha = 2.0 ** (lg - math.floor(lg))
    return math.exp(-alpha * 2.0 ** (-h - 1))


def longest_runs(n: int, samples: int, seed: int, batch: int = 1000) -> np.ndarray:
    """Longest run of 1s in ``samples`` uniform binary words of length ``n``."""
    out = np.empty(samples, dtype=np.int64)
    nbytes = (n + 7) // 8
    trim = nbytes * 8 - n
    for b, lo in enumerate(range(0, samples, batch)):
        rng = stream(seed, n, b)
        for i in range(lo, min(samples, lo + batch)):
            out[i] = longest_run_int(int.from_bytes(rng.bytes(nbytes), "little") >> trim)
    return out


def run_longest_run_experiment(n: int, samples: int, h_values: Sequence[float],
                               config: SamplerConfig | None = None) -> list[tuple[float, float, float]]:
    """``(h, empirical, predicted)`` for P(longest run < floor(log2 n + h))."""
    config = config or SamplerConfig()
    runs = longest_runs(n, samples, config.seed)
    table = []
    for h in h_values:
        threshold = math.floor(math.log2(n) + h)
        empirical = float(np.mean(runs < threshold)) if threshold > 0 else 0.0
        table.append((h, empirical, predicted_run_probability(n, h)))
    return table


# -- aggregation -----------------------------------------------------------------------------

def summarize(rows: Iterable[ExperimentRow]) -> list[SummaryRow]:
    groups: dict[tuple[int, int, str], list[ExperimentRow]] = defaultdict(list)
    for r in rows:
        if r.iterations >= 0:
            groups[(r.n, r.k, r.algo)].append(r)
    out = []
    for (n, k, algo), rs in sorted(groups.items()):
        its = [r.iterations for r in rs]
        out.append(SummaryRow(n, k, algo, len(rs), statistics.fmean(its),
                              statistics.pstdev(its) if len(its) > 1 else 0.0,
                              statistics.fmean(r.elapsed_ns for r in rs)))
    return out


def fit_growth(summary: Sequence[SummaryRow]) -> GrowthFit:
    """Least-squares fits of mean iterations against log2 n and log2 log2 n."""
    sizes = sorted({s.n for s in summary})
    if len(sizes) < 3:
        raise ValueError("growth fit needs at least three distinct sizes")
    if sizes[0] < 3:
        raise ValueError("growth fit needs sizes of at least 3 (log2 log2 n must be positive)")
    n = np.array([s.n for s in summary], dtype=float)
    y = np.array([s.mean_iterations for s in summary], dtype=float)

    def fit(x):
        A = np.column_stack([x, np.ones_like(x)])
        coef, *_ = np.linalg.lstsq(A, y, rcond=None)
        resid = float(np.sum((A @ coef - y) ** 2))
        return float(coef[0]), float(coef[1]), resid

    s1, i1, r1 = fit(np.log2(n))
    s2, i2, r2 = fit(np.log2(np.log2(n)))
    return GrowthFit(s1, i1, r1, s2, i2, r2)


# -- CSV ---------------------------------------------------------------------------------------

def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def rows_to_csv(rows: Iterable[ExperimentRow]) -> str:
    buf = io.StringIO()
    buf.write(ROW_HEADER + "\n")
    for r in rows:
        buf.write(",".join(_fmt(v) for v in astuple(r)) + "\n")
    return buf.getvalue()


def summary_to_csv(rows: Iterable[SummaryRow]) -> str:
    buf = io.StringIO()
    buf.write(SUMMARY_HEADER + "\n")
    for r in rows:
        buf.write(",".join(_fmt(v) for v in astuple(r)) + "\n")
    return buf.getvalue()


def read_rows_csv(text: str) -> list[ExperimentRow]:
    reader = csv.DictReader(io.StringIO(text))
    if ",".join(reader.fieldnames or []) != ROW_HEADER:
        raise ValueError("unexpected CSV header")
    types = {f.name: f.type for f in fields(ExperimentRow)}
    out = []
    for rec in reader:
        out.append(ExperimentRow(**{k: (v if types[k] == "str" else int(v)) for k, v in rec.items()}))
    return out
