import itertools
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from translucent.game import Game, ladder, translucent_pd
from translucent.structures import pd_naive_structure, translucent_pd_structure

HALF = Fraction(1, 2)


@pytest.fixture
def pd():
    return translucent_pd(1, 5)


@pytest.fixture
def ladder3():
    return ladder(3, HALF)


@pytest.fixture
def trivial():
    return Game((("a",), ("b",)), {("a", "b"): (0, 0)})


@pytest.fixture
def tpd():
    return translucent_pd_structure(1, 5, Fraction(1, 4))


@pytest.fixture
def naive():
    return pd_naive_structure(1, 5)


@st.composite
def games(draw, max_players=3, max_strategies=3, low=-4, high=4):
    """Small games with integer payoffs; strategy names are s0, s1, ..."""
    n = draw(st.integers(2, max_players))
    sizes = [draw(st.integers(1, max_strategies)) for _ in range(n)]
    strategies = tuple(tuple(f"s{k}" for k in range(size)) for size in sizes)
    table = {}
    for prof in itertools.product(*strategies):
        table[prof] = tuple(draw(st.integers(low, high)) for _ in range(n))
    return Game(strategies, table)
