"""Transition structures, automata and partitions.

States and letters are 0-based everywhere in the Python API; the initial
state is always state 0.  The ``.dfa`` text format (see :mod:`dfamin.textio`)
is 1-based.  All objects are immutable once built.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

UNDEFINED = -1


class AutomatonError(ValueError):
    """Raised when an automaton violates an operation's precondition."""


class BudgetExceeded(RuntimeError):
    """Subset construction created more states than allowed."""

    def __init__(self, cap: int, created: int):
        super().__init__(f"subset construction exceeded budget of {cap} states")
        self.cap = cap
        self.created = created


def _frozen_table(rows) -> np.ndarray:
    table = np.array(rows, dtype=np.int64, copy=True)
    if table.ndim != 2:
        raise AutomatonError("transition table must be two-dimensional")
    table.flags.writeable = False
    return table


class _Table:
    __slots__ = ("table", "__dict__")

    def __init__(self, table):
        object.__setattr__(self, "table", _frozen_table(table))
        n, k = self.table.shape
        if n < 1 or k < 1:
            raise AutomatonError("need at least one state and one letter")

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @property
    def n(self) -> int:
        return self.table.shape[0]

    @property
    def k(self) -> int:
        return self.table.shape[1]

    @property
    def initial(self) -> int:
        return 0

    def __eq__(self, other):
        return type(self) is type(other) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((type(self).__name__, self.table.shape, self.table.tobytes()))

    def rows(self) -> list[list[int]]:
        return self.table.tolist()

    def flat(self) -> tuple[int, ...]:
        """Row-major transition list: state 0's k targets, then state 1's, ..."""
        return tuple(self.table.ravel().tolist())


class TransitionStructure(_Table):
    """Complete deterministic transition table ``table[p, a] = p·a``."""

    def __init__(self, table):
        super().__init__(table)
        t = self.table
        if t.min() < 0 or t.max() >= self.n:
            raise AutomatonError("transition targets must lie in 0..n-1")

    def __repr__(self):
        return f"TransitionStructure({self.rows()!r})"

    @cached_property
    def is_accessible(self) -> bool:
        return len(accessible_states(self)) == self.n

    @cached_property
    def is_canonical(self) -> bool:
        return self.is_accessible and _first_occurrence_order_ok(self.flat(), self.n, self.k)


class PartialTransitionStructure(_Table):
    """Transition table where ``UNDEFINED`` (-1) marks a missing transition."""

    def __init__(self, table):
        super().__init__(table)
        t = self.table
        if t.min() < UNDEFINED or t.max() >= self.n:
            raise AutomatonError("transition targets must lie in 0..n-1 or be UNDEFINED")

    def __repr__(self):
        return f"PartialTransitionStructure({self.rows()!r})"

    @property
    def is_total(self) -> bool:
        return bool((self.table != UNDEFINED).all())


class Dfa:
    """A transition structure together with a set of final states."""

    __slots__ = ("ts", "final", "__dict__")

    def __init__(self, ts: TransitionStructure | PartialTransitionStructure, finals: Iterable[int] | np.ndarray = ()):
        if isinstance(finals, np.ndarray) and finals.dtype == bool:
            if finals.shape != (ts.n,):
                raise AutomatonError("final mask has wrong length")
            mask = finals.copy()
        else:
            mask = np.zeros(ts.n, dtype=bool)
            idx = np.fromiter((int(f) for f in finals), dtype=np.int64)
            if idx.size and (idx.min() < 0 or idx.max() >= ts.n):
                raise AutomatonError("final states must lie in 0..n-1")
            mask[idx] = True
        mask.flags.writeable = False
        object.__setattr__(self, "ts", ts)
        object.__setattr__(self, "final", mask)

    def __setattr__(self, name, value):
        raise AttributeError("Dfa is immutable")

    @property
    def n(self) -> int:
        return self.ts.n

    @property
    def k(self) -> int:
        return self.ts.k

    @property
    def table(self) -> np.ndarray:
        return self.ts.table

    @cached_property
    def finals(self) -> frozenset[int]:
        return frozenset(np.flatnonzero(self.final).tolist())

    @property
    def is_complete(self) -> bool:
        return isinstance(self.ts, TransitionStructure)

    def __eq__(self, other):
        return isinstance(other, Dfa) and self.ts == other.ts and np.array_equal(self.final, other.final)

    def __hash__(self):
        return hash((self.ts, self.final.tobytes()))

    def __repr__(self):
        return f"Dfa({self.ts.rows()!r}, finals={sorted(self.finals)!r})"


class Nfa:
    """Nondeterministic automaton without epsilon moves.

    ``succ[p][a]`` is a bitmask of the successors of ``p`` on letter ``a``;
    ``initials`` and ``finals`` are bitmasks as well.
    """

    __slots__ = ("n", "k", "succ", "initials", "finals")

    def __init__(self, n: int, k: int, succ: Sequence[Sequence[int]], initials: int, finals: int):
        if len(succ) != n or any(len(row) != k for row in succ):
            raise AutomatonError("successor table has wrong shape")
        limit = 1 << n
        if initials >= limit or finals >= limit or any(m >= limit for row in succ for m in row):
            raise AutomatonError("state outside 0..n-1")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "succ", tuple(tuple(row) for row in succ))
        object.__setattr__(self, "initials", initials)
        object.__setattr__(self, "finals", finals)

    def __setattr__(self, name, value):
        raise AttributeError("Nfa is immutable")

    @classmethod
    def from_transitions(cls, n: int, k: int, transitions: Iterable[tuple[int, int, int]],
                         initials: Iterable[int], finals: Iterable[int]) -> "Nfa":
        succ = [[0] * k for _ in range(n)]
        for p, a, q in transitions:
            if not (0 <= p < n and 0 <= q < n and 0 <= a < k):
                raise AutomatonError(f"transition {(p, a, q)} out of range")
            succ[p][a] |= 1 << q
        return cls(n, k, succ, _mask(initials), _mask(finals))

    @property
    def transitions(self) -> frozenset[tuple[int, int, int]]:
        return frozenset((p, a, q) for p, row in enumerate(self.succ)
                         for a, m in enumerate(row) for q in _bits(m))

    def accepts(self, word: Sequence[int]) -> bool:
        current = self.initials
        for a in word:
            if not 0 <= a < self.k:
                raise AutomatonError(f"letter {a} out of range")
            nxt = 0
            for p in _bits(current):
                nxt |= self.succ[p][a]
            current = nxt
        return bool(current & self.finals)


class Partition:
    """Assignment of each state to a class index in ``0..count-1``."""

    __slots__ = ("labels", "count")

    def __init__(self, labels, count: int | None = None):
        arr = np.array(labels, dtype=np.int64, copy=True)
        if arr.ndim != 1 or arr.size == 0:
            raise AutomatonError("partition needs a non-empty label vector")
        c = int(arr.max()) + 1
        if count is not None and count != c:
            raise AutomatonError("class count does not match labels")
        if arr.min() < 0 or np.bincount(arr, minlength=c).min() == 0:
            raise AutomatonError("class indices must be contiguous from 0")
        arr.flags.writeable = False
        object.__setattr__(self, "labels", arr)
        object.__setattr__(self, "count", c)

    def __setattr__(self, name, value):
        raise AttributeError("Partition is immutable")

    @classmethod
    def _trusted(cls, labels: np.ndarray, count: int) -> "Partition":
        part = object.__new__(cls)
        labels.flags.writeable = False
        object.__setattr__(part, "labels", labels)
        object.__setattr__(part, "count", count)
        return part

    @classmethod
    def discrete(cls, n: int) -> "Partition":
        return cls._trusted(np.arange(n, dtype=np.int64), n)

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "Partition":
        labels = np.full(n, -1, dtype=np.int64)
        for i, block in enumerate(blocks):
            for s in block:
                if labels[s] != -1:
                    raise AutomatonError(f"state {s} appears in two blocks")
                labels[s] = i
        if (labels < 0).any():
            raise AutomatonError("blocks do not cover every state")
        return cls(labels)

    @property
    def n(self) -> int:
        return self.labels.size

    def __len__(self):
        return self.count

    def __eq__(self, other):
        return (isinstance(other, Partition) and self.count == other.count
                and np.array_equal(self.labels, other.labels))

    def __hash__(self):
        return hash((self.count, self.labels.tobytes()))

    def __repr__(self):
        return f"Partition({self.labels.tolist()!r})"

    def blocks(self) -> frozenset[frozenset[int]]:
        out: dict[int, list[int]] = {}
        for s, c in enumerate(self.labels.tolist()):
            out.setdefault(c, []).append(s)
        return frozenset(frozenset(b) for b in out.values())

    def same_blocks(self, other: "Partition") -> bool:
        """True when both partitions group states identically, whatever the numbering."""
        # a refinement with as many classes as the coarser partition is equal to it
        return self.n == other.n and self.count == other.count and self.refines(other)

    def refines(self, coarser: "Partition") -> bool:
        """Every class of ``self`` lies inside one class of ``coarser``."""
        rep = np.zeros(self.count, dtype=np.int64)
        rep[self.labels] = coarser.labels
        return bool(np.array_equal(rep[self.labels], coarser.labels))


def _mask(states: Iterable[int]) -> int:
    m = 0
    for s in states:
        m |= 1 << s
    return m


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _first_occurrence_order_ok(flat: Sequence[int], n: int, k: int) -> bool:
    nxt = 1
    for pos, q in enumerate(flat):
        if q == nxt:
            nxt += 1
        elif q > nxt:
            return False
        if nxt < n and pos + 1 >= k * nxt:
            # state nxt must appear within the rows of states 0..nxt-1
            return False
    return nxt == n


# -- structural operations ---------------------------------------------------

def accessible_states(ts: TransitionStructure | PartialTransitionStructure) -> frozenset[int]:
    rows = ts.table.tolist()
    seen = [False] * ts.n
    seen[0] = True
    stack = [0]
    while stack:
        p = stack.pop()
        for q in rows[p]:
            if q >= 0 and not seen[q]:
                seen[q] = True
                stack.append(q)
    return frozenset(i for i, s in enumerate(seen) if s)


def _bfs_order(rows: list[list[int]], n: int) -> list[int]:
    """States in first-occurrence order of the row-major scan (queue order)."""
    label = [-1] * n
    label[0] = 0
    order = [0]
    head = 0
    while head < len(order):
        for q in rows[order[head]]:
            if q >= 0 and label[q] < 0:
                label[q] = len(order)
                order.append(q)
        head += 1
    return order


def canonical_relabeling(ts: TransitionStructure) -> list[int]:
    """``new_label[old_state]`` for the canonical form of an accessible structure."""
    rows = ts.table.tolist()
    order = _bfs_order(rows, ts.n)
    if len(order) != ts.n:
        raise AutomatonError("canonical form requires an accessible structure")
    new = [0] * ts.n
    for i, s in enumerate(order):
        new[s] = i
    return new


def canonicalize(ts: TransitionStructure) -> TransitionStructure:
    """Relabel states by first occurrence in the row-major transition list.

    The initial state keeps label 0; each other state gets the next free label
    when it first shows up as a target while scanning rows in label order.
    Two accessible structures are isomorphic iff their canonical forms are
    equal.
    """
    if "is_canonical" in ts.__dict__ and ts.is_canonical:
        return ts
    new = canonical_relabeling(ts)
    old_of = [0] * ts.n
    for s, i in enumerate(new):
        old_of[i] = s
    remap = np.array(new, dtype=np.int64)
    table = remap[ts.table[old_of]]
    out = TransitionStructure(table)
    out.__dict__["is_accessible"] = True
    out.__dict__["is_canonical"] = True
    return out


def canonicalize_dfa(dfa: Dfa) -> Dfa:
    new = canonical_relabeling(dfa.ts)
    old_of = [0] * dfa.n
    for s, i in enumerate(new):
        old_of[i] = s
    remap = np.array(new, dtype=np.int64)
    ts = TransitionStructure(remap[dfa.table[old_of]])
    ts.__dict__["is_accessible"] = True
    ts.__dict__["is_canonical"] = True
    return Dfa(ts, dfa.final[old_of])


def is_isomorphic(x: Dfa, y: Dfa) -> bool:
    if x.n != y.n or x.k != y.k:
        return False
    return canonicalize_dfa(x) == canonicalize_dfa(y)


def complete_with_sink(pts: PartialTransitionStructure | TransitionStructure) -> TransitionStructure:
    """Route every undefined transition to a fresh non-final sink state ``n``."""
    if isinstance(pts, TransitionStructure):
        return pts
    if pts.is_total:
        return TransitionStructure(pts.table)
    n, k = pts.n, pts.k
    table = np.full((n + 1, k), n, dtype=np.int64)
    table[:n] = np.where(pts.table == UNDEFINED, n, pts.table)
    return TransitionStructure(table)


def complete_dfa(dfa: Dfa) -> Dfa:
    """Sink-complete a possibly partial automaton; the sink is never final."""
    if dfa.is_complete:
        return dfa
    ts = complete_with_sink(dfa.ts)
    return Dfa(ts, dfa.finals)


def accessible_part(dfa: Dfa) -> Dfa:
    """Restriction of a complete automaton to its reachable states, canonically labeled."""
    if not dfa.is_complete:
        raise AutomatonError("accessible_part expects a complete automaton")
    if dfa.ts.is_accessible:
        return dfa
    order = _bfs_order(dfa.table.tolist(), dfa.n)
    remap = np.full(dfa.n, -1, dtype=np.int64)
    remap[order] = np.arange(len(order))
    ts = TransitionStructure(remap[dfa.table[order]])
    ts.__dict__["is_accessible"] = True
    ts.__dict__["is_canonical"] = True
    return Dfa(ts, dfa.final[order])


def accepts(dfa: Dfa, word: Sequence[int]) -> bool:
    rows = dfa.table.tolist()
    p = 0
    for a in word:
        if not 0 <= a < dfa.k:
            raise AutomatonError(f"letter {a} out of range")
        p = rows[p][a]
        if p < 0:
            return False
    return bool(dfa.final[p])


def quotient(dfa: Dfa, part: Partition) -> Dfa:
    """Quotient automaton ``[q]·a = [q·a]``, canonically relabeled.

    ``part`` must be right invariant and must not mix final and non-final
    states inside a class.
    """
    if not dfa.is_complete:
        raise AutomatonError("quotient requires a complete automaton")
    if part.n != dfa.n:
        raise AutomatonError("partition size does not match automaton")
    labels = part.labels
    _, rep = np.unique(labels, return_index=True)
    class_table = labels[dfa.table]
    if not np.array_equal(class_table, class_table[rep][labels]):
        raise AutomatonError("partition is not right invariant")
    fin = dfa.final
    if not np.array_equal(fin, fin[rep][labels]):
        raise AutomatonError("partition mixes final and non-final states")
    # swap the initial state's class into slot 0 before relabeling
    swap = np.arange(len(rep))
    swap[[0, labels[0]]] = swap[[labels[0], 0]]
    q = Dfa(TransitionStructure(swap[class_table[rep[swap]]]), fin[rep[swap]])
    return canonicalize_dfa(q)


def trivial_dfa(k: int, accepting: bool) -> Dfa:
    ts = TransitionStructure(np.zeros((1, k), dtype=np.int64))
    ts.__dict__["is_accessible"] = True
    ts.__dict__["is_canonical"] = True
    return Dfa(ts, [0] if accepting else [])


def reverse(dfa: Dfa) -> Nfa:
    """Flip every edge and swap initial and final states."""
    n, k = dfa.n, dfa.k
    succ = [[0] * k for _ in range(n)]
    for p, row in enumerate(dfa.table.tolist()):
        for a, q in enumerate(row):
            if q >= 0:
                succ[q][a] |= 1 << p
    return Nfa(n, k, succ, _mask(dfa.finals), 1)


def dfa_as_nfa(dfa: Dfa) -> Nfa:
    n, k = dfa.n, dfa.k
    succ = [[(1 << q) if q >= 0 else 0 for q in row] for row in dfa.table.tolist()]
    return Nfa(n, k, succ, 1, _mask(dfa.finals))


DEFAULT_SUBSET_CAP = 1 << 20


def determinize(nfa: Nfa, cap: int = DEFAULT_SUBSET_CAP) -> Dfa:
    """Accessible subset construction starting from the set of initial states.

    The empty subset is a regular (sink) state when reachable, so the result
    is complete.  Raises :class:`BudgetExceeded` past ``cap`` subsets.
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    k = nfa.k
    succ = nfa.succ
    index = {nfa.initials: 0}
    subsets = [nfa.initials]
    rows: list[list[int]] = []
    head = 0
    while head < len(subsets):
        s = subsets[head]
        members = list(_bits(s))
        row = []
        for a in range(k):
            t = 0
            for p in members:
                t |= succ[p][a]
            j = index.get(t)
            if j is None:
                if len(subsets) >= cap:
                    raise BudgetExceeded(cap, len(subsets) + 1)
                j = index[t] = len(subsets)
                subsets.append(t)
            row.append(j)
        rows.append(row)
        head += 1
    fin = nfa.finals
    ts = TransitionStructure(rows)
    # the queue order above is already the canonical labeling
    ts.__dict__["is_accessible"] = True
    ts.__dict__["is_canonical"] = True
    return Dfa(ts, [i for i, s in enumerate(subsets) if s & fin])


def determinize_reversal(dfa: Dfa, cap: int = DEFAULT_SUBSET_CAP) -> Dfa:
    """``determinize(reverse(dfa))`` without materializing the reversed automaton.

    In the reversal, the ``a``-successor of a subset ``S`` is the preimage
    ``{p : p·a in S}``.  Small automata use integer bitmasks; large ones
    compute preimages on boolean arrays.
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    n, k = dfa.n, dfa.k
    if n > 512:
        return _determinize_reversal_arrays(dfa, cap)
    pred = [[0] * n for _ in range(k)]
    for p, row in enumerate(dfa.table.tolist()):
        for a, q in enumerate(row):
            if q >= 0:
                pred[a][q] |= 1 << p
    start = _mask(dfa.finals)
    index = {start: 0}
    subsets = [start]
    rows: list[list[int]] = []
    head = 0
    while head < len(subsets):
        members = list(_bits(subsets[head]))
        row = []
        for a in range(k):
            pa = pred[a]
            t = 0
            for q in members:
                t |= pa[q]
            j = index.get(t)
            if j is None:
                if len(subsets) >= cap:
                    raise BudgetExceeded(cap, len(subsets) + 1)
                j = index[t] = len(subsets)
                subsets.append(t)
            row.append(j)
        rows.append(row)
        head += 1
    ts = TransitionStructure(rows)
    ts.__dict__["is_accessible"] = True
    ts.__dict__["is_canonical"] = True
    return Dfa(ts, [i for i, s in enumerate(subsets) if s & 1])


def _determinize_reversal_arrays(dfa: Dfa, cap: int) -> Dfa:
    n, k = dfa.n, dfa.k
    table = dfa.table
    defined = table >= 0
    safe = np.where(defined, table, 0)
    start = dfa.final.copy()
    index = {start.tobytes(): 0}
    subsets = [start]
    rows: list[list[int]] = []
    head = 0
    while head < len(subsets):
        s = subsets[head]
        row = []
        for a in range(k):
            t = s[safe[:, a]] & defined[:, a]
            key = t.tobytes()
            j = index.get(key)
            if j is None:
                if len(subsets) >= cap:
                    raise BudgetExceeded(cap, len(subsets) + 1)
                j = index[key] = len(subsets)
                subsets.append(t)
            row.append(j)
        rows.append(row)
        head += 1
    ts = TransitionStructure(rows)
    ts.__dict__["is_accessible"] = True
    ts.__dict__["is_canonical"] = True
    return Dfa(ts, [i for i, s in enumerate(subsets) if s[0]])
