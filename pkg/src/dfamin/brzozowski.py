"""Brzozowski's minimization: determinize the reversal, twice."""

from __future__ import annotations

import time

from .automata import DEFAULT_SUBSET_CAP, AutomatonError, BudgetExceeded, Dfa, accessible_states, determinize_reversal
from .report import MinimizeReport


def brzozowski_minimize(dfa: Dfa, cap: int = DEFAULT_SUBSET_CAP) -> MinimizeReport:
    """``determinize(reverse(determinize(reverse(dfa))))``.

    Accepts partial automata too (missing transitions simply have no reversed
    edge), but the input must be accessible.  Raises
    :class:`~dfamin.automata.BudgetExceeded` when either subset construction
    needs more than ``cap`` states; ``created`` on the exception records how
    far it got.
    """
    if len(accessible_states(dfa.ts)) != dfa.n:
        raise AutomatonError("Brzozowski's algorithm needs an accessible automaton")
    start = time.perf_counter_ns()
    first = determinize_reversal(dfa, cap)
    minimal = determinize_reversal(first, cap)
    elapsed = time.perf_counter_ns() - start
    return MinimizeReport(minimal, 0, dfa.n, "brzozowski", elapsed, first.n + minimal.n)


__all__ = ["brzozowski_minimize", "BudgetExceeded"]
