import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dfamin import (AutomatonError, BudgetExceeded, Dfa, Nfa, Partition, PartialTransitionStructure,
                    TransitionStructure, accepts, accessible_states, canonicalize, canonicalize_dfa,
                    complete_dfa, complete_with_sink, determinize, determinize_reversal, is_isomorphic,
                    quotient, reverse)
from dfamin.automata import accessible_part, dfa_as_nfa, trivial_dfa
from dfamin.oracle import enumerate_structures, words

from conftest import dfas


def test_table_validation():
    with pytest.raises(AutomatonError):
        TransitionStructure([[0, 2], [0, 0]])
    with pytest.raises(AutomatonError):
        TransitionStructure([[0, -1]])
    with pytest.raises(AutomatonError):
        Dfa(TransitionStructure([[0]]), {1})
    with pytest.raises(AutomatonError):
        Dfa(TransitionStructure([[0]]), np.array([True, False]))


def test_tables_are_immutable():
    ts = TransitionStructure([[1], [0]])
    with pytest.raises(ValueError):
        ts.table[0, 0] = 0
    with pytest.raises(AttributeError):
        ts.foo = 1


def test_accessible_states():
    assert accessible_states(TransitionStructure([[0, 0, 0]])) == {0}
    assert accessible_states(TransitionStructure([[0], [0]])) == {0}
    assert accessible_states(TransitionStructure([[1], [2], [3], [0]])) == {0, 1, 2, 3}
    assert accessible_states(PartialTransitionStructure([[-1], [0]])) == {0}


def test_canonical_form_numbers_states_by_first_occurrence():
    # 0 -> 2 before 1 in the row-major scan, so 2 becomes 1
    ts = TransitionStructure([[2, 0], [1, 1], [1, 0]])
    c = canonicalize(ts)
    assert c.rows() == [[1, 0], [2, 0], [2, 2]]
    assert c.is_canonical
    assert canonicalize(c) == c


def test_canonicalize_n2_fixed():
    ts = TransitionStructure([[0, 1], [1, 1]])
    assert canonicalize(ts) == ts


def test_canonicalize_rejects_inaccessible():
    with pytest.raises(AutomatonError):
        canonicalize(TransitionStructure([[0], [1]]))


def test_twelve_distinct_canonical_forms():
    forms = enumerate_structures(2, 2)
    assert len(forms) == 12
    assert len({canonicalize(f) for f in forms}) == 12
    assert all(f.is_canonical for f in forms)


@given(dfas(max_n=7), st.randoms(use_true_random=False))
def test_canonical_form_ignores_labels(dfa, rnd):
    perm = list(range(1, dfa.n))
    rnd.shuffle(perm)
    perm = np.array([0] + perm)  # old -> new, initial fixed
    inv = np.argsort(perm)
    relabeled = Dfa(TransitionStructure(perm[dfa.table[inv]]), dfa.final[inv])
    assert canonicalize_dfa(relabeled) == canonicalize_dfa(dfa)
    assert is_isomorphic(relabeled, dfa)


def test_complete_with_sink():
    total = TransitionStructure([[0]])
    assert complete_with_sink(total) is total
    assert complete_with_sink(PartialTransitionStructure([[-1]])).rows() == [[1], [1]]
    holed = complete_with_sink(PartialTransitionStructure([[1, 2], [-1, 0], [2, 2]]))
    assert holed.n == 4
    assert holed.rows() == [[1, 2], [3, 0], [2, 2], [3, 3]]


def test_sink_is_never_final():
    dfa = complete_dfa(Dfa(PartialTransitionStructure([[1], [-1]]), {0, 1}))
    assert dfa.finals == {0, 1}
    assert dfa.n == 3
    assert not accepts(dfa, [0, 0])


def test_accepts(cycle4):
    assert accepts(cycle4, [])
    assert accepts(cycle4, [0])
    assert not accepts(cycle4, [0, 0])
    with pytest.raises(AutomatonError):
        accepts(cycle4, [1])


def test_quotient_by_singletons_is_identity(cycle4):
    assert quotient(cycle4, Partition.discrete(4)) == cycle4


def test_quotient_one_class():
    dfa = Dfa(TransitionStructure([[1], [0]]), {0, 1})
    q = quotient(dfa, Partition([0, 0]))
    assert q == trivial_dfa(1, True)


def test_quotient_checks_invariance():
    dfa = Dfa(TransitionStructure([[1], [2], [2]]), {2})
    with pytest.raises(AutomatonError):
        quotient(dfa, Partition([0, 0, 1]))  # 0·a and 1·a in different classes
    with pytest.raises(AutomatonError):
        quotient(dfa, Partition([0, 1, 1]))  # mixes final and non-final


def test_quotient_initial_class_not_first():
    dfa = Dfa(TransitionStructure([[1], [1]]), {1})
    q = quotient(dfa, Partition([1, 0]))
    assert q.n == 2 and q.finals == {1}


def test_partition_validation():
    with pytest.raises(AutomatonError):
        Partition([0, 2])
    p = Partition.from_blocks(4, [[0, 3], [1], [2]])
    assert p.blocks() == {frozenset({0, 3}), frozenset({1}), frozenset({2})}
    assert Partition.discrete(4).refines(p)
    assert not p.refines(Partition.discrete(4))
    with pytest.raises(AutomatonError):
        Partition.from_blocks(3, [[0, 1], [1, 2]])


def test_accessible_part():
    dfa = Dfa(TransitionStructure([[2], [1], [0]]), {1, 2})
    part = accessible_part(dfa)
    assert part.n == 2 and part.finals == {1}


def _reversed_language(dfa, max_len):
    return {w for w in words(dfa.k, max_len) if accepts(dfa, w[::-1])}


def test_determinized_reversal_unary(cycle4):
    det = determinize(reverse(cycle4))
    got = {w for w in words(1, 8) if accepts(det, w)}
    assert got == _reversed_language(cycle4, 8)
    assert determinize_reversal(cycle4) == det


def test_reverse_one_state():
    one = trivial_dfa(2, True)
    assert determinize(reverse(one)) == one


@settings(max_examples=60)
@given(dfas(max_n=6))
def test_double_reversal_preserves_language(dfa):
    back = determinize(reverse(determinize(reverse(dfa))))
    orig = determinize(dfa_as_nfa(dfa))
    for w in words(dfa.k, 6 if dfa.k < 3 else 4):
        assert accepts(back, w) == accepts(orig, w) == accepts(dfa, w)


@settings(max_examples=60)
@given(dfas(max_n=6))
def test_reversal_paths_agree(dfa):
    assert determinize_reversal(dfa) == determinize(reverse(dfa))


def test_subset_budget():
    # the reversal of "letter n-1 from the end is a" needs 2^(n-1) subsets
    n = 8
    rows = [[1, 0]] + [[i + 1, i + 1] for i in range(1, n - 1)] + [[1, 0]]
    dfa = Dfa(TransitionStructure(rows), {n - 1})
    with pytest.raises(BudgetExceeded) as info:
        determinize(dfa_as_nfa(dfa), cap=1)
    assert info.value.cap == 1 and info.value.created > 1


def test_nfa_accepts():
    nfa = Nfa.from_transitions(2, 1, [(0, 0, 0), (0, 0, 1)], initials={0}, finals={1})
    assert not nfa.accepts([])
    assert nfa.accepts([0, 0])


def test_is_isomorphic_complement(ex2):
    comp = Dfa(ex2.ts, ~ex2.final)
    assert is_isomorphic(ex2, ex2)
    assert not is_isomorphic(ex2, comp)


def test_exhaustive_small_isomorphism_classes():
    # distinct canonical structures are pairwise non-isomorphic
    forms = enumerate_structures(3, 1)
    for a, b in itertools.combinations(forms, 2):
        assert not is_isomorphic(Dfa(a), Dfa(b))
