import itertools
import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from conftest import games
from translucent.game import (
    Game,
    GameError,
    builtin_game,
    expected_utility,
    ladder,
    parse_game,
    random_game,
    serialize_game,
    translucent_pd,
    utility,
)

PD_TEXT = json.dumps({
    "players": [["C", "S"], ["C", "S"]],
    "payoffs": [
        {"profile": ["C", "C"], "u": ["0", "0"]},
        {"profile": ["C", "S"], "u": ["-5", "1"]},
        {"profile": ["S", "C"], "u": ["1", "-5"]},
        {"profile": ["S", "S"], "u": ["-4", "-4"]},
    ],
})


def test_parse_minimal_game():
    g = parse_game('{"players": [["a"], ["b"]], "payoffs": [{"profile": ["a", "b"], "u": ["0", "0"]}]}')
    assert g.strategies == (("a",), ("b",))
    assert utility(g, ("a", "b"), 2) == 0


def test_parse_prisoners_dilemma_file():
    g = parse_game(PD_TEXT)
    assert g == translucent_pd(1, 5)
    assert [g.payoffs[p] for p in [("C", "C"), ("C", "S"), ("S", "C"), ("S", "S")]] == [
        (0, 0), (-5, 1), (1, -5), (-4, -4)
    ]


def test_incomplete_table_is_rejected():
    data = json.loads(PD_TEXT)
    data["payoffs"].pop()
    with pytest.raises(GameError, match="incomplete"):
        parse_game(json.dumps(data))


def test_duplicate_strategy_and_syntax_errors():
    with pytest.raises(GameError, match="duplicate strategy"):
        parse_game('{"players": [["a", "a"], ["b"]], "payoffs": []}')
    with pytest.raises(GameError, match="line 1 column"):
        parse_game('{"players": [["a"], ["b"]], ')
    with pytest.raises(GameError, match="duplicate payoff"):
        data = json.loads(PD_TEXT)
        data["payoffs"].append(data["payoffs"][0])
        parse_game(json.dumps(data))


def test_utility_examples(pd, ladder3):
    assert utility(pd, ("S", "S"), 1) == -4
    assert utility(ladder3, ("2", "1"), 1) == Fraction(3, 2)
    assert utility(ladder3, ("3", "2"), 1) == Fraction(5, 2)
    assert utility(pd, ("C", "S"), 1) == -5
    for x in "123":
        assert utility(ladder3, (x, x), 1) == utility(ladder3, (x, x), 2) == int(x)


def test_utility_errors(pd):
    with pytest.raises(GameError, match="unknown strategy"):
        utility(pd, ("C", "X"), 1)
    with pytest.raises(GameError, match="out of range"):
        utility(pd, ("C", "C"), 3)


def test_expected_utility_examples(pd):
    assert expected_utility(pd, 1, "C", {("C",): 1}) == 0
    # direct arithmetic: 3/4 * u(S,C) + 1/4 * u(S,S)
    assert expected_utility(pd, 1, "S", {("C",): Fraction(3, 4), ("S",): Fraction(1, 4)}) == Fraction(3, 4) * 1 + Fraction(1, 4) * -4
    assert expected_utility(pd, 1, "C", {("C",): Fraction(1, 2), ("S",): Fraction(1, 2)}) == Fraction(-5, 2)
    with pytest.raises(ValueError, match="sum"):
        expected_utility(pd, 1, "C", {("C",): Fraction(1, 2)})


def test_builtins():
    assert ladder(1, Fraction(1, 2)).payoffs == {("1", "1"): (1, 1)}
    assert builtin_game("ladder", k=3, p=Fraction(1, 2)) == ladder(3, Fraction(1, 2))
    with pytest.raises(GameError):
        builtin_game("chicken")
    with pytest.raises(GameError):
        ladder(0)
    with pytest.raises(GameError):
        ladder(3, 0)


@pytest.mark.parametrize("k", [1, 2, 5])
def test_ladder_matches_definition(k):
    p = Fraction(1, 2)
    g = ladder(k, p)
    for x, y in itertools.product(range(1, k + 1), repeat=2):
        expected = (y + p, y) if x > y else (x, x + p) if y > x else (x, x)
        assert g.payoffs[(str(x), str(y))] == expected


def test_payoff_totality_by_enumeration():
    for seed in range(20):
        g = random_game(seed)
        for prof in itertools.product(*g.strategies):
            for i in g.players:
                assert isinstance(utility(g, prof, i), Fraction)


@given(games(), st.integers(0, 10), st.data())
def test_expected_utility_is_linear(g, lam_num, data):
    lam = Fraction(lam_num, 10)
    taus = g.opponent_profiles(1)
    w1 = data.draw(st.lists(st.integers(1, 5), min_size=len(taus), max_size=len(taus)))
    w2 = data.draw(st.lists(st.integers(1, 5), min_size=len(taus), max_size=len(taus)))
    b1 = {t: Fraction(w, sum(w1)) for t, w in zip(taus, w1)}
    b2 = {t: Fraction(w, sum(w2)) for t, w in zip(taus, w2)}
    mix = {t: lam * b1[t] + (1 - lam) * b2[t] for t in taus}
    s = g.sigma(1)[0]
    assert expected_utility(g, 1, s, mix) == lam * expected_utility(g, 1, s, b1) + (1 - lam) * expected_utility(g, 1, s, b2)


@given(games())
def test_serializer_round_trip(g):
    text = serialize_game(g)
    assert parse_game(text) == g
    assert serialize_game(parse_game(text)) == text


def test_round_trip_on_bundled_corpus():
    corpus = Path(__file__).parent / "data"
    files = sorted(corpus.glob("*.game.json"))
    assert files
    for path in files:
        text = path.read_text()
        assert serialize_game(parse_game(text)) == text
