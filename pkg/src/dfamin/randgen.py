"""Uniform random generation of accessible complete deterministic automata.

A canonical structure is identified with its row-major transition list in
which state ``j`` (0-based, ``j >= 1``) first occurs after states
``1..j-1`` and within the rows of states ``0..j-1``.  Reading the list left
to right while tracking how many states are already discovered gives the
recurrence for ``D(p, j)``, the number of ways to fill positions
``p..kn`` (1-based) when ``j`` states are known::

    D(kn+1, j) = [j == n]
    D(p, j)    = j * D(p+1, j) + [j < n] * D(p+1, j+1)   if ceil(p/k) <= j
    D(p, j)    = 0                                        otherwise

``D(1, 1)`` is the number of structures.  Sampling walks the list and picks
"new state" or one of the ``j`` known states proportionally to the counts.

Randomness comes from :func:`stream`, which derives an independent numpy
generator from a master seed and a key (for experiments, the size and the
sample index), so results do not depend on evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .automata import Dfa, TransitionStructure

MODES = ("auto", "exact", "approx", "rejection")
EXACT_TABLE_BITS = 1 << 31
LOG_TABLE_CELLS = 1 << 26


class SamplerModeError(ValueError):
    """Requested sampling mode cannot serve this size."""


@dataclass(frozen=True)
class SamplerConfig:
    seed: int = 0
    final_prob: float = 0.5
    exact_threshold: int = 200
    mode: str = "auto"

    def __post_init__(self):
        if not 0.0 < self.final_prob < 1.0:
            raise ValueError("final_prob must lie strictly between 0 and 1")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def resolve(self, n: int, k: int) -> str:
        """Concrete mode used for size ``n``: ``auto`` counts exactly up to the threshold."""
        if self.mode != "auto":
            return self.mode
        if n <= self.exact_threshold or k == 1:
            return "exact"
        return "rejection"


def stream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for ``(seed, key)``; stream ``i`` is ``stream(seed, i)``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def randbelow(rng: np.random.Generator, bound: int) -> int:
    """Uniform integer in ``[0, bound)`` for arbitrarily large ``bound``."""
    if bound <= 0:
        raise ValueError("bound must be positive")
    if bound < 1 << 62:
        return int(rng.integers(bound))
    bits = (bound - 1).bit_length()
    nbytes = (bits + 7) // 8
    excess = nbytes * 8 - bits
    while True:
        r = int.from_bytes(rng.bytes(nbytes), "little") >> excess
        if r < bound:
            return r


# -- counting ------------------------------------------------------------------

class CountTable:
    """Exact ``D(p, j)`` on the feasible band ``ceil(p/k) <= j <= min(n, p)``.

    ``rows[p]`` holds ``D(p, lo(p)), ..., D(p, hi(p))`` as Python integers,
    for 1-based positions ``p = 1..kn+1``.
    """

    def __init__(self, n: int, k: int):
        if n < 1 or k < 1:
            raise ValueError("n and k must be positive")
        self.n, self.k = n, k
        cells = sum(self.hi(p) - self.lo(p) + 1 for p in range(1, k * n + 1))
        if cells * (k * n * max(1, n.bit_length())) > EXACT_TABLE_BITS:
            raise SamplerModeError(f"exact counts for n={n}, k={k} exceed the table size limit")
        last = k * n + 1
        self.rows: list[list[int] | None] = [None] * (last + 1)
        self.rows[last] = [1]  # only j = n is feasible: lo = hi = n
        for p in range(last - 1, 0, -1):
            lo, hi = self.lo(p), self.hi(p)
            nlo = self.lo(p + 1)
            nxt = self.rows[p + 1]
            nhi = self.hi(p + 1)
            row = []
            for j in range(lo, hi + 1):
                v = 0
                if nlo <= j <= nhi:
                    v = j * nxt[j - nlo]
                if j < n and nlo <= j + 1 <= nhi:
                    v += nxt[j + 1 - nlo]
                row.append(v)
            self.rows[p] = row

    def lo(self, p: int) -> int:
        return -(-p // self.k) if p <= self.k * self.n else self.n

    def hi(self, p: int) -> int:
        return min(self.n, p)

    def __call__(self, p: int, j: int) -> int:
        if not 1 <= p <= self.k * self.n + 1:
            raise IndexError("position out of range")
        lo, hi = self.lo(p), self.hi(p)
        if j < lo or j > hi:
            return 0
        return self.rows[p][j - lo]

    @property
    def total(self) -> int:
        return self(1, 1)

    def unrank(self, rank: int) -> list[int]:
        """Row-major transition list (0-based targets) of the structure with this rank."""
        if not 0 <= rank < self.total:
            raise ValueError("rank out of range")
        n = self.n
        flat = []
        j = 1
        r = rank
        for p in range(1, self.k * n + 1):
            new = self(p + 1, j + 1) if j < n else 0
            if r < new:
                flat.append(j)
                j += 1
                continue
            r -= new
            old, r = divmod(r, self(p + 1, j))
            flat.append(old)
        return flat


@lru_cache(maxsize=8)
def count_table(n: int, k: int) -> CountTable:
    return CountTable(n, k)


def count_structures(n: int, k: int) -> int:
    """Number of accessible complete deterministic structures up to relabeling."""
    return count_table(n, k).total


class LogCountTable:
    """``log D(p, j)`` in double precision on the same band, for approximate sampling."""

    def __init__(self, n: int, k: int):
        if n < 1 or k < 1:
            raise ValueError("n and k must be positive")
        self.n, self.k = n, k
        cells = sum(self.hi(p) - self.lo(p) + 1 for p in range(1, k * n + 1))
        if cells > LOG_TABLE_CELLS:
            raise SamplerModeError(f"approximate counts for n={n}, k={k} need {cells} cells; "
                                   "use rejection mode at this size")
        last = k * n + 1
        self.rows: list[np.ndarray | None] = [None] * (last + 1)
        self.rows[last] = np.zeros(1)
        for p in range(last - 1, 0, -1):
            lo, hi = self.lo(p), self.hi(p)
            nlo, nhi = self.lo(p + 1), self.hi(p + 1)
            nxt = self.rows[p + 1]
            j = np.arange(lo, hi + 1)
            stay = np.full(j.size, -np.inf)
            ok = (j >= nlo) & (j <= nhi)
            stay[ok] = np.log(j[ok]) + nxt[j[ok] - nlo]
            grow = np.full(j.size, -np.inf)
            ok = (j < n) & (j + 1 >= nlo) & (j + 1 <= nhi)
            grow[ok] = nxt[j[ok] + 1 - nlo]
            self.rows[p] = np.logaddexp(stay, grow)

    lo = CountTable.lo
    hi = CountTable.hi

    def __call__(self, p: int, j: int) -> float:
        lo, hi = self.lo(p), self.hi(p)
        if j < lo or j > hi:
            return -math.inf
        return float(self.rows[p][j - lo])


@lru_cache(maxsize=4)
def log_count_table(n: int, k: int) -> LogCountTable:
    return LogCountTable(n, k)


# -- structure samplers -----------------------------------------------------------

def _structure(flat, n: int, k: int) -> TransitionStructure:
    ts = TransitionStructure(np.asarray(flat, dtype=np.int64).reshape(n, k))
    ts.__dict__["is_accessible"] = True
    ts.__dict__["is_canonical"] = True
    return ts


def _sample_exact(n: int, k: int, rng: np.random.Generator) -> TransitionStructure:
    table = count_table(n, k)
    return _structure(table.unrank(randbelow(rng, table.total)), n, k)


def _sample_approx(n: int, k: int, rng: np.random.Generator) -> TransitionStructure:
    table = log_count_table(n, k)
    size = k * n
    coin = rng.random(size)
    pick = rng.random(size)
    flat = []
    j = 1
    for p in range(1, size + 1):
        if j < n:
            p_new = math.exp(table(p + 1, j + 1) - table(p, j))
            if coin[p - 1] < p_new:
                flat.append(j)
                j += 1
                continue
        flat.append(min(int(pick[p - 1] * j), j - 1))
    return _structure(flat, n, k)


def _accessible_size_ratio(k: int) -> float:
    # fixed point of v = 1 - exp(-k v): limiting fraction of reachable states
    v = 1.0
    for _ in range(200):
        v = 1.0 - math.exp(-k * v)
    return v


def _reachable_mask(table: np.ndarray, limit: int) -> np.ndarray | None:
    seen = np.zeros(table.shape[0], dtype=bool)
    seen[0] = True
    frontier = np.array([0])
    total = 1
    while frontier.size:
        nxt = np.unique(table[frontier].ravel())
        nxt = nxt[~seen[nxt]]
        seen[nxt] = True
        total += nxt.size
        if total > limit:
            return None
        frontier = nxt
    return seen


def _canonical_from_table(table: np.ndarray) -> TransitionStructure:
    rows = table.tolist()
    label = {0: 0}
    order = [0]
    head = 0
    flat = []
    while head < len(order):
        for q in rows[order[head]]:
            lq = label.get(q)
            if lq is None:
                lq = label[q] = len(order)
                order.append(q)
            flat.append(lq)
        head += 1
    return _structure(flat, len(order), table.shape[1])


def _sample_rejection(n: int, k: int, rng: np.random.Generator, max_tries: int = 1_000_000) -> TransitionStructure:
    """Accessible part of a uniform random complete DFA, kept when it has ``n`` states.

    Given its size, the accessible part is uniform over canonical structures:
    each structure of size ``n`` arises from the same number of tables.
    """
    if k < 2:
        raise SamplerModeError("rejection sampling needs at least two letters")
    big = max(n + 1, round(n / _accessible_size_ratio(k)))
    for _ in range(max_tries):
        table = rng.integers(big, size=(big, k))
        seen = _reachable_mask(table, n)
        if seen is None or np.count_nonzero(seen) != n:
            continue
        return _canonical_from_table(table)
    raise RuntimeError("rejection sampler did not hit the target size")


def sample_structure(n: int, k: int, rng: np.random.Generator, config: SamplerConfig | None = None) -> TransitionStructure:
    """Canonical accessible complete structure, uniform in ``exact``/``rejection`` mode."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    config = config or SamplerConfig()
    mode = config.resolve(n, k)
    if n == 1:
        return _structure([0] * k, 1, k)
    if mode == "exact":
        if n > config.exact_threshold and config.mode == "exact":
            raise SamplerModeError(f"n={n} exceeds exact_threshold={config.exact_threshold}")
        return _sample_exact(n, k, rng)
    if mode == "approx":
        return _sample_approx(n, k, rng)
    return _sample_rejection(n, k, rng)


def unary_structure(n: int, back: int) -> TransitionStructure:
    """The chain ``q -> q+1`` closed by ``n-1 -> back`` (0-based)."""
    if not 0 <= back < n:
        raise ValueError("back edge target out of range")
    flat = list(range(1, n)) + [back]
    return _structure(flat, n, 1)


# -- final states and unary automata ------------------------------------------------------

def sample_final_masks(n: int, count: int, config: SamplerConfig | None, rng: np.random.Generator) -> np.ndarray:
    """``count`` independent final-state masks, each state final with ``final_prob``."""
    p = (config or SamplerConfig()).final_prob
    if p == 0.5:
        return rng.integers(2, size=(count, n), dtype=np.int8).astype(bool)
    return rng.random((count, n)) < p


def sample_final_set(n: int, config: SamplerConfig | None, rng: np.random.Generator) -> frozenset[int]:
    return frozenset(np.flatnonzero(sample_final_masks(n, 1, config, rng)[0]).tolist())


def sample_dfa(n: int, k: int, rng: np.random.Generator, config: SamplerConfig | None = None) -> Dfa:
    ts = sample_structure(n, k, rng, config)
    return Dfa(ts, sample_final_masks(n, 1, config, rng)[0])


def unary_dfa(bits, back: int) -> Dfa:
    """The unary automaton ``(u, m)``: ``bits[i]`` tells whether state ``i`` is final."""
    bits = np.asarray(bits, dtype=bool)
    return Dfa(unary_structure(bits.size, back), bits)


def sample_unary(n: int, rng: np.random.Generator) -> Dfa:
    """Uniform over the ``n * 2^n`` unary automata with ``n`` states."""
    if n < 1:
        raise ValueError("n must be positive")
    back = int(rng.integers(n))
    bits = rng.integers(2, size=n, dtype=np.int8).astype(bool)
    return unary_dfa(bits, back)


def longest_run(bits) -> int:
    """Length of the longest block of consecutive 1s."""
    if isinstance(bits, str):
        bits = [c == "1" for c in bits]
    best = cur = 0
    for b in bits:
        if b:
            cur += 1
            if cur > best:
                best = cur
        else:
            cur = 0
    return best


def longest_run_int(x: int) -> int:
    """Longest run of set bits in a nonnegative integer."""
    run = 0
    while x:
        x &= x >> 1
        run += 1
    return run
