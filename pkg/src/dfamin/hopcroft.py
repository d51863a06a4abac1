"""Hopcroft's minimization with smaller-half splitter selection.

Blocks are contiguous ranges of ``elems``; splitting a block moves its
marked states to the front of the range.  The worklist is FIFO over
``(block, letter)`` pairs, so runs are deterministic for a given input.
"""

from __future__ import annotations

import time
from collections import deque

import numpy as np

from .automata import AutomatonError, Dfa, Partition, quotient, trivial_dfa
from .report import MinimizeReport


class InverseIndex:
    """Predecessor lists ``preds(a, q) = {p : p·a = q}`` in CSR layout."""

    def __init__(self, table: np.ndarray):
        n, k = table.shape
        self.n, self.k = n, k
        self.offsets: list[list[int]] = []
        self.sources: list[list[int]] = []
        for a in range(k):
            targets = table[:, a]
            order = np.argsort(targets, kind="stable")
            counts = np.bincount(targets, minlength=n)
            off = np.zeros(n + 1, dtype=np.int64)
            np.cumsum(counts, out=off[1:])
            self.offsets.append(off.tolist())
            self.sources.append(order.tolist())

    def preds(self, a: int, q: int) -> list[int]:
        off = self.offsets[a]
        return self.sources[a][off[q]:off[q + 1]]

    def edges(self):
        for a in range(self.k):
            for q in range(self.n):
                for p in self.preds(a, q):
                    yield p, a, q


def hopcroft_minimize(dfa: Dfa) -> MinimizeReport:
    """Minimize ``dfa``; ``operations`` counts predecessor touches."""
    if not dfa.is_complete:
        raise AutomatonError("Hopcroft's algorithm needs a complete automaton; complete it with a sink first")
    if not dfa.ts.is_accessible:
        raise AutomatonError("Hopcroft's algorithm needs an accessible automaton")
    start = time.perf_counter_ns()
    n, k = dfa.n, dfa.k
    final = dfa.final
    if not final.any() or final.all():
        minimal = trivial_dfa(k, bool(final.all()))
        return MinimizeReport(minimal, 0, n, "hopcroft", time.perf_counter_ns() - start)

    inv = InverseIndex(dfa.table)
    offsets, sources = inv.offsets, inv.sources

    fin_states = np.flatnonzero(final).tolist()
    non_states = np.flatnonzero(~final).tolist()
    elems = fin_states + non_states
    loc = [0] * n
    for i, s in enumerate(elems):
        loc[s] = i
    nf = len(fin_states)
    first = [0, nf]
    end = [nf, n]
    marked = [0, 0]
    blk = [0] * n
    for s in non_states:
        blk[s] = 1

    # smaller half; on a tie the block holding the initial state
    if nf < n - nf or (nf == n - nf and final[0]):
        seed = 0
    else:
        seed = 1
    waiting = deque((seed, a) for a in range(k))
    in_wait = [[False, False] for _ in range(k)]
    for a in range(k):
        in_wait[a][seed] = True

    extractions = 0
    touched_total = 0
    while waiting:
        splitter, a = waiting.popleft()
        in_wait[a][splitter] = False
        extractions += 1
        off = offsets[a]
        src = sources[a]
        touched = []
        for q in elems[first[splitter]:end[splitter]]:
            lo, hi = off[q], off[q + 1]
            if lo == hi:
                continue
            touched_total += hi - lo
            for p in src[lo:hi]:
                b = blk[p]
                m = marked[b]
                if m == 0:
                    touched.append(b)
                # swap p into the marked prefix of its block
                j = first[b] + m
                i = loc[p]
                other = elems[j]
                elems[j] = p
                loc[p] = j
                elems[i] = other
                loc[other] = i
                marked[b] = m + 1
        for b in touched:
            m = marked[b]
            marked[b] = 0
            lo, hi = first[b], end[b]
            size = hi - lo
            if m == size:
                continue
            # the new block takes the smaller side so relabeling is cheap
            nb = len(first)
            if m <= size - m:
                first.append(lo)
                end.append(lo + m)
                first[b] = lo + m
            else:
                first.append(lo + m)
                end.append(hi)
                end[b] = lo + m
            marked.append(0)
            for s in elems[first[nb]:end[nb]]:
                blk[s] = nb
            small_new = end[nb] - first[nb] <= end[b] - first[b]
            for c in range(k):
                flags = in_wait[c]
                flags.append(False)
                if flags[b]:
                    flags[nb] = True
                    waiting.append((nb, c))
                elif small_new:
                    flags[nb] = True
                    waiting.append((nb, c))
                else:
                    flags[b] = True
                    waiting.append((b, c))

    labels = np.array(blk, dtype=np.int64)
    count = len(first)
    minimal = quotient(dfa, Partition._trusted(labels, count))
    elapsed = time.perf_counter_ns() - start
    return MinimizeReport(minimal, extractions, n, "hopcroft", elapsed, touched_total)
