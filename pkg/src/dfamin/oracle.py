"""Brute-force machinery used to check the minimizers and the counting bounds.

Everything here favors obviousness over speed: table-filling minimization,
exhaustive enumeration of transition structures, word-by-word
``i``-equivalence, and the sets ``F_ℓ(p, q, p', q')`` of final-state sets
for which ``p`` and ``q`` are ``(ℓ-1)``-equivalent yet separated by a word
of length ``ℓ`` leading to ``(p', q')``.

Final-state sets are handled as bitmasks internally (bit ``s`` set means
state ``s`` is final) and returned as frozensets.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .automata import (AutomatonError, Dfa, Partition, TransitionStructure, accessible_states,
                       canonicalize, quotient, trivial_dfa)
from .moore import moore_iteration_count, refine_once, zero_equivalence
from .report import MinimizeReport

TABLEFILL_MAX_N = 1 << 12
ENUMERATION_LIMIT = 1 << 21
VECTOR_ENUMERATION_LIMIT = 1 << 25
FINAL_SET_MAX_N = 20


class SizeLimitError(ValueError):
    pass


# -- table filling -------------------------------------------------------------

def tablefill_minimize(dfa: Dfa) -> MinimizeReport:
    """Pairwise-marking minimization; ``operations`` counts marked pairs."""
    if not dfa.is_complete:
        raise AutomatonError("table filling needs a complete automaton")
    n, k = dfa.n, dfa.k
    if n > TABLEFILL_MAX_N:
        raise SizeLimitError(f"table filling is limited to {TABLEFILL_MAX_N} states")
    if len(accessible_states(dfa.ts)) != n:
        raise AutomatonError("table filling needs an accessible automaton")
    start = time.perf_counter_ns()
    final = dfa.final.tolist()
    if all(final) or not any(final):
        return MinimizeReport(trivial_dfa(k, final[0]), 0, n, "tablefill", time.perf_counter_ns() - start)
    preds = [[[] for _ in range(n)] for _ in range(k)]
    for p, row in enumerate(dfa.table.tolist()):
        for a, q in enumerate(row):
            preds[a][q].append(p)
    distinct = bytearray(n * n)
    stack = []
    for p in range(n):
        for q in range(p + 1, n):
            if final[p] != final[q]:
                distinct[p * n + q] = 1
                stack.append((p, q))
    marked = len(stack)
    while stack:
        p, q = stack.pop()
        for a in range(k):
            for s in preds[a][p]:
                for t in preds[a][q]:
                    if s == t:
                        continue
                    i = s * n + t if s < t else t * n + s
                    if not distinct[i]:
                        distinct[i] = 1
                        marked += 1
                        stack.append((s, t) if s < t else (t, s))
    labels = [-1] * n
    count = 0
    for s in range(n):
        for t in range(s):
            if not distinct[t * n + s]:
                labels[s] = labels[t]
                break
        else:
            labels[s] = count
            count += 1
    minimal = quotient(dfa, Partition(labels))
    return MinimizeReport(minimal, 0, n, "tablefill", time.perf_counter_ns() - start, marked)


# -- enumeration -----------------------------------------------------------------

def enumerate_structures(n: int, k: int) -> list[TransitionStructure]:
    """All canonical accessible complete structures, by brute force over tables."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    if n ** (n * k) > ENUMERATION_LIMIT:
        raise SizeLimitError(f"{n}^{n * k} tables is too many to enumerate")
    seen = set()
    for flat in itertools.product(range(n), repeat=n * k):
        rows = [flat[i * k:(i + 1) * k] for i in range(n)]
        ts = TransitionStructure(rows)
        if len(accessible_states(ts)) != n:
            continue
        seen.add(canonicalize(ts).flat())
    return [TransitionStructure(np.array(f).reshape(n, k)) for f in sorted(seen)]


def count_by_enumeration(n: int, k: int, chunk: int = 1 << 20) -> int:
    """Canonical structure count from all ``n^(kn)`` labeled tables.

    Counts tables whose states are all reachable from state 0 and divides by
    ``(n-1)!``: an accessible pointed deterministic structure has no
    nontrivial automorphism, so each isomorphism class has exactly
    ``(n-1)!`` labelings.
    """
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    if n > 30:
        raise SizeLimitError("bitmask reachability supports at most 30 states")
    total = n ** (n * k)
    if total > VECTOR_ENUMERATION_LIMIT:
        raise SizeLimitError(f"{n}^{n * k} tables is too many to enumerate")
    width = n * k
    accessible = 0
    for lo in range(0, total, chunk):
        codes = np.arange(lo, min(total, lo + chunk), dtype=np.int64)
        digits = np.empty((codes.size, width), dtype=np.int64)
        for pos in range(width - 1, -1, -1):
            codes, digits[:, pos] = np.divmod(codes, n)
        reach = np.ones(digits.shape[0], dtype=np.int64)
        for _ in range(n):
            before = reach
            for s in range(n):
                has = (reach >> s) & 1
                for a in range(k):
                    reach = reach | (has << digits[:, s * k + a])
            if np.array_equal(before, reach):
                break
        accessible += int(np.count_nonzero(reach == (1 << n) - 1))
    labelings = math.factorial(n - 1)
    if accessible % labelings:
        raise AssertionError("accessible table count is not a multiple of (n-1)!")
    return accessible // labelings


def all_dfas(ts: TransitionStructure):
    """Every automaton ``(ts, F)`` for ``F`` ranging over all subsets."""
    for mask in range(1 << ts.n):
        yield Dfa(ts, mask_to_array(mask, ts.n))


def mask_to_array(mask: int, n: int) -> np.ndarray:
    return ((mask >> np.arange(n)) & 1).astype(bool)


def mask_to_set(mask: int) -> frozenset[int]:
    return frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)


# -- word-level definitions ----------------------------------------------------------

def words(k: int, max_len: int, min_len: int = 0):
    for length in range(min_len, max_len + 1):
        yield from itertools.product(range(k), repeat=length)


def word_equivalence(dfa: Dfa, i: int) -> Partition:
    """``i``-equivalence straight from its definition, enumerating all words."""
    return word_equivalence_chain(dfa, i)[-1]


def word_equivalence_chain(dfa: Dfa, length: int) -> list[Partition]:
    """``[~0, ..., ~length]`` from the word definition.

    State ``s`` at level ``i`` is labeled by the finality of ``s·w`` for every
    word ``w`` of length at most ``i``; layer ``d`` holds ``s·w`` for the
    ``k^d`` words of length exactly ``d``.
    """
    if length < 0:
        raise ValueError("length must be nonnegative")
    rows = dfa.table.tolist()
    final = dfa.final.tolist()
    k = dfa.k
    layers = [[s] for s in range(dfa.n)]
    signatures = [(final[s],) for s in range(dfa.n)]
    out = [_partition_of(signatures)]
    for _ in range(length):
        layers = [[rows[p][a] for p in layer for a in range(k)] for layer in layers]
        signatures = [sig + tuple(final[p] for p in layer) for sig, layer in zip(signatures, layers)]
        out.append(_partition_of(signatures))
    return out


def _partition_of(signatures) -> Partition:
    index: dict[tuple, int] = {}
    return Partition([index.setdefault(sig, len(index)) for sig in signatures])


def equivalence_chain(dfa: Dfa, length: int) -> list[Partition]:
    """``[~0, ~1, ..., ~length]`` via repeated signature refinement."""
    chain = [zero_equivalence(dfa)]
    for _ in range(length):
        chain.append(refine_once(dfa, chain[-1]))
    return chain


def nerode_violations(dfa: Dfa) -> list[str]:
    """Check the basic facts about the ``~i`` chain on one automaton.

    ``~i`` is computed twice, by signature refinement and from the word
    definition, and the two must agree for ``i = 0..n``.  On the word-level
    chain: ``~(i+1)`` refines ``~i``; ``p ~(i+1) q`` iff ``p ~i q`` and
    ``p·a ~i q·a`` for every letter; once two consecutive levels agree every
    later level is Myhill-Nerode equivalence; ``~(n-2)`` is already
    Myhill-Nerode equivalence.  The Nerode class count is taken from
    table-filling.  Returns a description of each failure.
    """
    n, k = dfa.n, dfa.k
    by_sig = equivalence_chain(dfa, n)
    by_words = word_equivalence_chain(dfa, n)
    nerode = by_words[n]
    classes = tablefill_minimize(dfa).minimal.n
    rows = dfa.table.tolist()
    out = []
    if nerode.count != classes:
        out.append(f"~{n} has {nerode.count} classes, table-filling finds {classes}")
    for i in range(n + 1):
        if not by_sig[i].same_blocks(by_words[i]):
            out.append(f"signature and word definitions of ~{i} differ")
    for i in range(n):
        cur, nxt = by_words[i].labels.tolist(), by_words[i + 1]
        if not nxt.refines(by_words[i]):
            out.append(f"~{i + 1} does not refine ~{i}")
        step = [(cur[p],) + tuple(cur[rows[p][a]] for a in range(k)) for p in range(n)]
        if not _partition_of(step).same_blocks(nxt):
            out.append(f"~{i + 1} is not the one-letter refinement of ~{i}")
        if nxt.same_blocks(by_words[i]):
            if any(not by_words[j].same_blocks(nerode) for j in range(i, n + 1)):
                out.append(f"~{i} = ~{i + 1} but the chain moves later")
    if n >= 2 and not by_words[n - 2].same_blocks(nerode):
        out.append(f"~{n - 2} is not Myhill-Nerode equivalence")
    return out


def nerode_m(dfa: Dfa) -> int:
    """Least ``m`` such that ``~m`` equals Myhill-Nerode equivalence."""
    chain = equivalence_chain(dfa, max(dfa.n, 1))
    last = chain[-1]
    for m, part in enumerate(chain):
        if part.count == last.count:
            return m
    raise AssertionError("unreachable")


# -- F_ell sets and dependency graphs -------------------------------------------------

@dataclass(frozen=True)
class DependencyGraph:
    """Undirected graph on states ``0..n-1``; edges stored as ``(s, t)`` with ``s <= t``."""

    n: int
    edges: frozenset[tuple[int, int]]

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def has_self_loop(self) -> bool:
        return any(s == t for s, t in self.edges)

    def has_cycle(self) -> bool:
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for s, t in self.edges:
            rs, rt = find(s), find(t)
            if rs == rt:
                return True
            parent[rs] = rt
        return False

    def is_subgraph_of(self, other: "DependencyGraph") -> bool:
        return self.n == other.n and self.edges <= other.edges


def _edge(s: int, t: int) -> tuple[int, int]:
    return (s, t) if s <= t else (t, s)


class FinalSetAnalysis:
    """Per-structure cache for ``F_ℓ`` computations over all ``2^n`` final sets."""

    def __init__(self, ts: TransitionStructure):
        if ts.n > FINAL_SET_MAX_N:
            raise SizeLimitError(f"final-set sweeps are limited to {FINAL_SET_MAX_N} states")
        self.ts = ts
        self.n = ts.n
        self.k = ts.k
        self.rows = ts.table.tolist()

    @cached_property
    def membership(self) -> np.ndarray:
        """``membership[F, s]``: state ``s`` is final in final set ``F``."""
        masks = np.arange(1 << self.n, dtype=np.int64)
        return ((masks[:, None] >> np.arange(self.n)) & 1).astype(bool)

    @cached_property
    def chains(self) -> np.ndarray:
        """``chains[F, i, s]``: class of ``s`` under ``~i`` in ``(ts, F)``, for ``i < n``."""
        n = self.n
        out = np.empty((1 << n, n, n), dtype=np.int64)
        for mask in range(1 << n):
            chain = equivalence_chain(Dfa(self.ts, self.membership[mask]), n - 1)
            for i, part in enumerate(chain):
                out[mask, i] = part.labels
        return out

    @cached_property
    def moore_m(self) -> list[int]:
        """``m`` of every automaton ``(ts, F)``, read off Moore's iteration count."""
        out = []
        for mask in range(1 << self.n):
            it = moore_iteration_count(Dfa(self.ts, self.membership[mask]))
            out.append(max(it - 1, 0))
        return out

    def _pair_step(self, pairs):
        rows = self.rows
        return {(rows[s][a], rows[t][a]) for s, t in pairs for a in range(self.k)}

    @cached_property
    def _forward(self) -> dict[tuple[int, int], list[set]]:
        """``_forward[(p, q)][d]`` = pairs ``(p·u, q·u)`` over words of length exactly ``d``."""
        out = {}
        for p in range(self.n):
            for q in range(self.n):
                if p == q:
                    continue
                levels = [{(p, q)}]
                for _ in range(self.n - 1):
                    levels.append(self._pair_step(levels[-1]))
                out[(p, q)] = levels
        return out

    def _check(self, ell, p, q, p2, q2):
        if not 1 <= ell < self.n:
            raise ValueError(f"ell must satisfy 1 <= ell < n (got {ell}, n={self.n})")
        for s in (p, q, p2, q2):
            if not 0 <= s < self.n:
                raise ValueError(f"state {s} out of range")
        if p == q or p2 == q2:
            raise ValueError("need p != q and p' != q'")

    def connects(self, ell: int, p: int, q: int, p2: int, q2: int) -> bool:
        """Some word ``u`` of length ``ell`` has ``p·u = p2`` and ``q·u = q2``."""
        return (p2, q2) in self._forward[(p, q)][ell]

    def f_ell_masks(self, ell: int, p: int, q: int, p2: int, q2: int) -> np.ndarray:
        self._check(ell, p, q, p2, q2)
        if not self.connects(ell, p, q, p2, q2):
            return np.zeros(0, dtype=np.int64)
        labels = self.chains[:, ell - 1]
        member = self.membership
        ok = (labels[:, p] == labels[:, q]) & (member[:, p2] != member[:, q2])
        return np.flatnonzero(ok)

    def f_ell_set(self, ell, p, q, p2, q2) -> list[frozenset[int]]:
        return [mask_to_set(int(m)) for m in self.f_ell_masks(ell, p, q, p2, q2)]

    def moore_ge_ell_masks(self, ell: int) -> np.ndarray:
        """Final sets for which ``~(ell)`` is not yet Myhill-Nerode equivalence (``m >= ell``)."""
        if ell < 0:
            raise ValueError("ell must be nonnegative")
        return np.flatnonzero(np.array(self.moore_m) >= ell)

    def moore_ge_ell_set(self, ell: int) -> list[frozenset[int]]:
        return [mask_to_set(int(m)) for m in self.moore_ge_ell_masks(ell)]

    def union_f_ell_masks(self, ell: int) -> np.ndarray:
        """Union of ``F_ℓ(p, q, p', q')`` over every admissible quadruple."""
        hit = np.zeros(1 << self.n, dtype=bool)
        for (p, q), levels in self._forward.items():
            for p2, q2 in levels[ell]:
                if p2 != q2:
                    hit[self.f_ell_masks(ell, p, q, p2, q2)] = True
        return np.flatnonzero(hit)

    def quadruples(self):
        n = self.n
        for p, q, p2, q2 in itertools.product(range(n), repeat=4):
            if p != q and p2 != q2:
                yield p, q, p2, q2

    def dependency_graph(self, ell, p, q, p2, q2) -> DependencyGraph:
        masks = self.f_ell_masks(ell, p, q, p2, q2)
        sub = self.membership[masks]
        agree = (sub[:, :, None] == sub[:, None, :]).all(axis=0)
        edges = frozenset((s, t) for s in range(self.n) for t in range(s + 1, self.n) if agree[s, t])
        return DependencyGraph(self.n, edges)

    def lexmin_word(self, ell, p, q, p2, q2) -> tuple[int, ...] | None:
        """Lexicographically least ``u`` of length ``ell`` with ``p·u = p2``, ``q·u = q2``."""
        self._check(ell, p, q, p2, q2)
        rows = self.rows
        n, k = self.n, self.k
        # good[d]: pairs that reach (p2, q2) in exactly d steps
        good = [{(p2, q2)}]
        for _ in range(ell):
            prev = good[-1]
            good.append({(s, t) for s in range(n) for t in range(n)
                         if any((rows[s][a], rows[t][a]) in prev for a in range(k))})
        if (p, q) not in good[ell]:
            return None
        word = []
        s, t = p, q
        for step in range(ell):
            target = good[ell - 1 - step]
            for a in range(k):
                if (rows[s][a], rows[t][a]) in target:
                    word.append(a)
                    s, t = rows[s][a], rows[t][a]
                    break
        return tuple(word)

    def acyclic_witness(self, ell, p, q, p2, q2) -> DependencyGraph | None:
        """Edges ``(p·v, q·v)`` for the strict prefixes ``v`` of the least connecting word."""
        if self.f_ell_masks(ell, p, q, p2, q2).size == 0:
            return None
        word = self.lexmin_word(ell, p, q, p2, q2)
        rows = self.rows
        s, t = p, q
        edges = set()
        for a in word:
            edges.add(_edge(s, t))
            s, t = rows[s][a], rows[t][a]
        return DependencyGraph(self.n, frozenset(edges))


def f_ell_set(ts: TransitionStructure, ell: int, p: int, q: int, p2: int, q2: int) -> list[frozenset[int]]:
    return FinalSetAnalysis(ts).f_ell_set(ell, p, q, p2, q2)


def moore_ge_ell_set(ts: TransitionStructure, ell: int) -> list[frozenset[int]]:
    return FinalSetAnalysis(ts).moore_ge_ell_set(ell)


def dependency_graph(ts: TransitionStructure, ell: int, p: int, q: int, p2: int, q2: int) -> DependencyGraph:
    return FinalSetAnalysis(ts).dependency_graph(ell, p, q, p2, q2)


def acyclic_witness(ts: TransitionStructure, ell: int, p: int, q: int, p2: int, q2: int) -> DependencyGraph | None:
    return FinalSetAnalysis(ts).acyclic_witness(ell, p, q, p2, q2)
