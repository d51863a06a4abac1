"""Moore's state minimization by repeated signature refinement.

Each round gives every state the signature
``(π[p], π[p·a_1], ..., π[p·a_k])`` and renumbers states by the rank of
their signature in sorted order.  The loop stops when a round produces no
new class.  Sorting is a least-significant-digit pass per signature
component; every key is a class index, so each pass is a bucket sort over
``count`` buckets and a round costs ``(k+1)(n+count)`` bucket operations.
"""

from __future__ import annotations

import time

import numpy as np

from .automata import AutomatonError, Dfa, Partition, quotient, trivial_dfa
from .report import MinimizeReport


def _check_input(dfa: Dfa) -> None:
    if not dfa.is_complete:
        raise AutomatonError("Moore's algorithm needs a complete automaton; complete it with a sink first")
    if not dfa.ts.is_accessible:
        raise AutomatonError("Moore's algorithm needs an accessible automaton")


def _refine(table: np.ndarray, labels: np.ndarray, count: int) -> tuple[np.ndarray, int, int]:
    """One round: returns (new labels, new class count, bucket operations)."""
    n, k = table.shape
    keys = [labels] + [labels[table[:, a]] for a in range(k)]
    order = np.arange(n)
    for key in reversed(keys):
        order = order[np.argsort(key[order], kind="stable")]
    sig = np.stack([key[order] for key in keys])
    step = np.any(sig[:, 1:] != sig[:, :-1], axis=0)
    ranks = np.zeros(n, dtype=np.int64)
    np.cumsum(step, out=ranks[1:])
    new = np.empty(n, dtype=np.int64)
    new[order] = ranks
    ops = n * (k + 1) + (k + 1) * (n + count) + n
    return new, int(ranks[-1]) + 1, ops


def _initial_labels(dfa: Dfa) -> tuple[np.ndarray, int]:
    labels = dfa.final.astype(np.int64)
    if labels.min() == labels.max():
        return np.zeros(dfa.n, dtype=np.int64), 1
    return labels, 2


def refine_once(dfa: Dfa, part: Partition) -> Partition:
    """Compute π′ from π by sorting signatures (one Moore round)."""
    if part.n != dfa.n:
        raise AutomatonError("partition size does not match automaton")
    labels, count, _ = _refine(dfa.table, part.labels, part.count)
    return Partition._trusted(labels, count)


def zero_equivalence(dfa: Dfa) -> Partition:
    labels, count = _initial_labels(dfa)
    return Partition._trusted(labels, count)


def i_equivalence(dfa: Dfa, i: int) -> Partition:
    """The partition of ``i``-equivalence: agreement on all words of length ≤ i."""
    if i < 0:
        raise ValueError("i must be nonnegative")
    if not dfa.is_complete:
        raise AutomatonError("i-equivalence needs a complete automaton")
    labels, count = _initial_labels(dfa)
    for _ in range(i):
        labels, new_count, _ = _refine(dfa.table, labels, count)
        if new_count == count:
            break
        count = new_count
    return Partition._trusted(labels, count)


def _run(dfa: Dfa, keep_partitions: bool = False):
    table = dfa.table
    labels, count = _initial_labels(dfa)
    partitions = [Partition._trusted(labels, count)] if keep_partitions else None
    round_ops = []
    iterations = 0
    prev_count = None
    while prev_count != count:
        prev_count = count
        labels, count, ops = _refine(table, labels, count)
        iterations += 1
        round_ops.append(ops)
        if keep_partitions:
            partitions.append(Partition._trusted(labels, count))
    return labels, count, iterations, round_ops, partitions


def moore_partitions(dfa: Dfa) -> list[Partition]:
    """π′ after initialization and after every main-loop round.

    Empty for F = ∅ or F = Q, where the algorithm returns before looping.
    """
    _check_input(dfa)
    if not dfa.final.any() or dfa.final.all():
        return []
    return _run(dfa, keep_partitions=True)[4]


def moore_minimize(dfa: Dfa) -> MinimizeReport:
    _check_input(dfa)
    start = time.perf_counter_ns()
    if not dfa.final.any() or dfa.final.all():
        minimal = trivial_dfa(dfa.k, bool(dfa.final.all()))
        return MinimizeReport(minimal, 0, dfa.n, "moore", time.perf_counter_ns() - start, dfa.n)
    labels, count, iterations, round_ops, _ = _run(dfa)
    minimal = quotient(dfa, Partition._trusted(labels, count))
    elapsed = time.perf_counter_ns() - start
    return MinimizeReport(minimal, iterations, dfa.n, "moore", elapsed,
                          sum(round_ops), tuple(round_ops))


def moore_iteration_count(dfa: Dfa) -> int:
    """Number of main-loop rounds, without building the quotient."""
    _check_input(dfa)
    if not dfa.final.any() or dfa.final.all():
        return 0
    return _run(dfa)[2]
