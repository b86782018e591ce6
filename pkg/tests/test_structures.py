import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from conftest import games
from translucent.game import Game, random_game, serialize_game, translucent_pd
from translucent.prob import Distribution
from translucent.structures import (
    CounterfactualStructure,
    StructureError,
    builtin_structure,
    counterfactual_belief,
    parse_structure,
    random_appropriate_structure,
    random_product_structure,
    respects_unilateral_deviations,
    serialize_structure,
    translucency_epsilon,
    validate_appropriate,
    validate_strongly_appropriate,
)

DATA = Path(__file__).parent / "data"
P = Distribution.point


def cell_crossing_fixture():
    """Player 1 at w0 spreads mass onto w1, where player 1 believes something else."""
    g = translucent_pd(1, 5)
    prof = {"w0": ("C", "C"), "w1": ("C", "C"), "w2": ("S", "S")}
    half = Distribution({"w0": Fraction(1, 2), "w1": Fraction(1, 2)})
    beliefs = {1: {"w0": half, "w1": P("w1"), "w2": P("w2")}, 2: {w: P(w) for w in prof}}
    closest = {(w, i, "S"): "w2" for w in ("w0", "w1") for i in (1, 2)}
    closest.update({("w2", i, "C"): "w0" for i in (1, 2)})
    return CounterfactualStructure(g, tuple(prof), prof, closest, beliefs)


def drug_fixture():
    """After a switch, player 1 ends up somewhere its beliefs point elsewhere."""
    g = translucent_pd(1, 5)
    prof = {"a": ("C", "C"), "b": ("S", "C"), "c": ("S", "C"), "d": ("C", "S")}
    beliefs = {1: {"a": P("a"), "b": P("c"), "c": P("c"), "d": P("d")}, 2: {w: P(w) for w in prof}}
    closest = {
        ("a", 1, "S"): "b", ("d", 1, "S"): "b", ("b", 1, "C"): "a", ("c", 1, "C"): "a",
        ("a", 2, "S"): "d", ("b", 2, "S"): "d", ("c", 2, "S"): "d", ("d", 2, "C"): "a",
    }
    return CounterfactualStructure(g, tuple(prof), prof, closest, beliefs)


def single_state(g, profile):
    beliefs = {i: {"w": P("w")} for i in g.players}
    return CounterfactualStructure(g, ("w",), {"w": profile}, {}, beliefs)


def test_bundled_pd_naive_parses_and_validates(naive):
    m, designated = naive
    parsed = parse_structure((DATA / "pd_naive.structure.json").read_text())
    assert designated == "w0"
    assert serialize_structure(parsed) == serialize_structure(m)
    assert validate_appropriate(parsed)


def test_parse_rejects_bad_closest_and_mass(naive):
    data = json.loads((DATA / "pd_naive.structure.json").read_text())
    data["closest"][0]["to"] = "w0"
    with pytest.raises(StructureError, match="closest condition 1"):
        parse_structure(json.dumps(data))
    data = json.loads((DATA / "pd_naive.structure.json").read_text())
    data["beliefs"]["1"]["w0"] = {"w0": "1/2", "w1": "1/3"}
    with pytest.raises(StructureError, match="sum"):
        parse_structure(json.dumps(data))
    data = json.loads((DATA / "pd_naive.structure.json").read_text())
    data["beliefs"]["1"]["w0"] = {"nowhere": "1"}
    with pytest.raises(StructureError, match="dangling"):
        parse_structure(json.dumps(data))


def test_game_reference_by_path(tmp_path, naive):
    m, _ = naive
    (tmp_path / "pd.json").write_text(serialize_game(m.game))
    text = serialize_structure(m, game_ref="pd.json")
    assert parse_structure(text, base_dir=tmp_path).game == m.game


def test_appropriateness_violations(naive):
    m, _ = naive
    moved = m.with_changes(beliefs={(1, "w0"): P("w1")})
    verdict = validate_appropriate(moved)
    assert not verdict
    assert any(v.startswith("beliefs condition 1 at (w0, 1)") for v in verdict.violations)
    crossing = validate_appropriate(cell_crossing_fixture())
    assert not crossing and any("beliefs condition 2 at (w0, 1)" in v for v in crossing.violations)


def test_counterfactual_belief_examples(tpd, naive):
    m, _ = tpd
    assert counterfactual_belief(m, "coop", 1, "S") == Distribution({"ss": Fraction(1, 4), "sc": Fraction(3, 4)})
    assert counterfactual_belief(m, "coop", 1, "C") == m.pr(1, "coop")
    n, _ = naive
    assert counterfactual_belief(n, "w0", 1, "S") == P("w1")


def test_strong_appropriateness(naive):
    m, _ = naive
    assert validate_strongly_appropriate(m)
    drug = drug_fixture()
    assert validate_appropriate(drug)
    verdict = validate_strongly_appropriate(drug)
    assert not verdict and any("(a, 1, S)" in v for v in verdict.violations)


def test_unilateral_deviations(naive, trivial):
    assert not respects_unilateral_deviations(naive[0])
    assert respects_unilateral_deviations(random_product_structure(translucent_pd(1, 5), 3))
    assert respects_unilateral_deviations(single_state(trivial, ("a", "b")))


def test_epsilon_examples(tpd, naive, trivial):
    assert translucency_epsilon(tpd[0]) == Fraction(1, 4)
    assert translucency_epsilon(naive[0]) == 1
    assert translucency_epsilon(single_state(trivial, ("a", "b"))) == 0
    assert translucency_epsilon(builtin_structure("translucent_pd", eps=Fraction(1, 10))[0]) == Fraction(1, 10)


def test_builtin_errors():
    with pytest.raises(StructureError):
        builtin_structure("nope")
    with pytest.raises(StructureError):
        builtin_structure("translucent_pd", eps=0)


def test_generator_determinism_and_appropriateness():
    for seed in range(500):
        g = random_game(seed, players=(2,), sizes=(2, 3))
        a = random_appropriate_structure(g, seed, 3 + seed % 4)
        assert serialize_structure(a) == serialize_structure(random_appropriate_structure(g, seed, 3 + seed % 4))
        assert validate_appropriate(a), seed


@settings(max_examples=80, deadline=None)
@given(games(max_strategies=3), st.integers(0, 10**6), st.integers(0, 3))
def test_random_structures_are_appropriate(g, seed, extra):
    m = random_appropriate_structure(g, seed, max(len(s) for s in g.strategies) + extra)
    assert validate_appropriate(m)
    assert 0 <= translucency_epsilon(m) <= 1
    assert parse_structure(serialize_structure(m)).closest == m.closest


@settings(max_examples=40, deadline=None)
@given(games(max_players=2), st.integers(0, 10**6))
def test_unilateral_structures_have_zero_epsilon(g, seed):
    m = random_product_structure(g, seed)
    assert validate_appropriate(m)
    assert respects_unilateral_deviations(m)
    assert translucency_epsilon(m) == 0
