"""Minimization of deterministic finite automata, random generation and checks.

States are numbered ``0..n-1`` with ``0`` the initial state; letters are
``0..k-1``.  The ``.dfa`` text format (see :mod:`dfamin.textio`) is 1-based.
"""

from .automata import (DEFAULT_SUBSET_CAP, UNDEFINED, AutomatonError, BudgetExceeded, Dfa, Nfa, Partition,
                       PartialTransitionStructure, TransitionStructure, accepts, accessible_states, canonicalize,
                       canonicalize_dfa, complete_dfa, complete_with_sink, determinize, determinize_reversal,
                       is_isomorphic, quotient, reverse)
from .brzozowski import brzozowski_minimize
from .hopcroft import hopcroft_minimize
from .moore import i_equivalence, moore_iteration_count, moore_minimize, moore_partitions, refine_once
from .oracle import tablefill_minimize
from .randgen import (SamplerConfig, SamplerModeError, count_structures, longest_run, sample_dfa,
                      sample_structure, sample_unary, stream, unary_dfa)
from .report import MinimizeReport
from .textio import DfaFormatError, format_dfa, parse_dfa, read_dfa, write_dfa

from .experiments import ALGORITHMS as MINIMIZERS

__version__ = "0.1.0"
