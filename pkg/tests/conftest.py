import numpy as np
import pytest
from hypothesis import strategies as st

from dfamin import Dfa, TransitionStructure


def unary_cycle() -> Dfa:
    """0 -> 1 -> 2 -> 3 -> 0 with finals {0, 1}."""
    return Dfa(TransitionStructure([[1], [2], [3], [0]]), {0, 1})


def two_state() -> Dfa:
    """0 -a-> 1, 0 -b-> 0, 1 -> 1 on both letters, final {1}."""
    return Dfa(TransitionStructure([[1, 0], [1, 1]]), {1})


@pytest.fixture
def cycle4():
    return unary_cycle()


@pytest.fixture
def ex2():
    return two_state()


@st.composite
def dfas(draw, max_n=8, max_k=3, accessible=True):
    """Random complete automata; with ``accessible`` only reachable parts are kept."""
    from dfamin.automata import accessible_part

    n = draw(st.integers(1, max_n))
    k = draw(st.integers(1, max_k))
    flat = draw(st.lists(st.integers(0, n - 1), min_size=n * k, max_size=n * k))
    finals = draw(st.lists(st.booleans(), min_size=n, max_size=n))
    dfa = Dfa(TransitionStructure(np.array(flat).reshape(n, k)), np.array(finals))
    return accessible_part(dfa) if accessible else dfa
