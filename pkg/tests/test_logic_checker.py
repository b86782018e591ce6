from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import games
from translucent.game import Game, translucent_pd
from translucent.logic import (
    B, CB, And, BStar, CBStar, Ccbr, Not, Play, Rat, RatAll, Srat, TrueF, Wrat, parse_formula, validity_spotchecks,
)
from translucent.logic.checker import (
    COUNTERFACTUAL, PROBABILITY, ModeError, ModelChecker,
    cb_by_iteration, cb_by_reachability, cb_states, ccbr_fixpoint, ccbr_states, cf_believes,
    deviation_payoff, rat_equivalence_check, rat_holds, satisfying_states, srat_sets, stay_payoff, wrat_sets,
)
from translucent.prob import Distribution
from translucent.structures import CounterfactualStructure, builtin_structure, random_appropriate_structure

structures = st.builds(
    lambda g, seed, extra: random_appropriate_structure(g, seed, max(map(len, g.strategies)) + extra),
    games(max_strategies=3), st.integers(0, 10**6), st.integers(0, 3),
)


def oracle_rat(m, w, i):
    """Counterfactual rationality by summing over states directly."""
    g, own = m.game, m.s(w, i)

    def pay(s, x):
        return g.payoffs[m.profile_of[x][: i - 1] + (s,) + m.profile_of[x][i:]][i - 1]

    stay = sum(q * pay(own, x) for x, q in m.pr(i, w).items())
    return all(stay >= sum(q * pay(s, m.f(x, i, s)) for x, q in m.pr(i, w).items()) for s in g.sigma(i))


def oracle_cb(m, event, counterfactual):
    def eb(a):
        return frozenset.intersection(*(
            cf_believes(m, i, a) if counterfactual else
            frozenset(w for w in m.states if m.pr(i, w).support <= a)
            for i in m.game.players
        ))

    level, out = eb(frozenset(event)), frozenset(m.states)
    for _ in range(3 * len(m.states) + 3):
        out &= level
        level = eb(level)
    return out


def test_rationality_examples(tpd, naive):
    m, coop = tpd
    assert stay_payoff(m, coop, 1) == 0
    assert deviation_payoff(m, coop, 1, "S") == Fraction(3, 4) * 1 + Fraction(1, 4) * -4
    assert rat_holds(m, COUNTERFACTUAL, coop, 1)
    assert not rat_holds(m, PROBABILITY, coop, 1)
    low, _ = builtin_structure("translucent_pd", eps=Fraction(1, 10))
    assert deviation_payoff(low, "coop", 1, "S") == Fraction(1, 2)
    assert not rat_holds(low, COUNTERFACTUAL, "coop", 1)
    n, _ = naive
    assert rat_holds(n, COUNTERFACTUAL, "w0", 1)
    assert not rat_holds(n, COUNTERFACTUAL, "w1", 1)


def test_satisfaction_examples(naive):
    m, _ = naive
    mc = ModelChecker(m)
    assert mc.sat(TrueF()) == {"w0", "w1"}
    assert mc.sat(Not(TrueF())) == set()
    assert mc.sat(Play(1, "C")) == {"w0"}
    assert mc.sat(B(1, Play(2, "C"))) == {"w0"}
    assert mc.sat(BStar(1, Play(2, "S"))) == set()
    assert satisfying_states(m, COUNTERFACTUAL, parse_formula("CB true")) == {"w0", "w1"}


def test_mode_errors(naive):
    m, _ = naive
    for f in [BStar(1, TrueF()), CBStar(TrueF()), Srat(1, 1), Ccbr()]:
        with pytest.raises(ModeError):
            satisfying_states(m, PROBABILITY, f)
    with pytest.raises(ModeError):
        satisfying_states(m, "bayes", TrueF())
    with pytest.raises(ModeError):
        satisfying_states(m, COUNTERFACTUAL, Rat(3))
    for mode in (PROBABILITY, COUNTERFACTUAL):
        assert satisfying_states(m, mode, Wrat(1, 1)) == satisfying_states(m, mode, Rat(1))


def test_strong_rationality_examples(naive):
    m, _ = naive
    sr = srat_sets(m, 3)
    for i in (1, 2):
        assert sr[i][0] == {"w0", "w1"}
        assert sr[i][1] == satisfying_states(m, COUNTERFACTUAL, Rat(i))
    assert "w0" not in sr[1][2]
    assert ccbr_states(m) == set()


def test_single_state_strict_equilibrium():
    g = Game((("a",), ("b",)), {("a", "b"): (1, 1)})
    m = CounterfactualStructure(g, ("w",), {"w": ("a", "b")}, {}, {i: {"w": Distribution.point("w")} for i in (1, 2)})
    assert ccbr_states(m) == {"w"}
    assert ccbr_fixpoint(m).level == 0


def test_rationality_need_not_be_counterfactually_believed(naive):
    m, _ = naive
    mc = ModelChecker(m)
    assert "w0" in mc.sat(Srat(1, 1))
    assert "w0" not in mc.sat(BStar(1, Srat(1, 1)))


def test_bundled_fixtures_consistent(tpd, naive):
    for m, _ in (tpd, naive, builtin_structure("translucent_pd", eps=Fraction(1, 10))):
        assert all(rat_equivalence_check(m, w, i) for w in m.states for i in m.game.players)
        assert all(rat_holds(m, COUNTERFACTUAL, w, i) == oracle_rat(m, w, i) for w in m.states for i in m.game.players)
        wr = wrat_sets(m)
        assert cb_states(m, ModelChecker(m).sat(RatAll())) == wr[1][-1] & wr[2][-1]
        assert validity_spotchecks(m).ok
        assert cb_states(m, m.states) == set(m.states)


@settings(max_examples=60, deadline=None)
@given(structures)
def test_rat_matches_oracle_and_equivalence(m):
    for w in m.states:
        for i in m.game.players:
            assert rat_holds(m, COUNTERFACTUAL, w, i) == oracle_rat(m, w, i)
            assert rat_equivalence_check(m, w, i)


@settings(max_examples=60, deadline=None)
@given(structures, st.data())
def test_common_belief_methods_agree(m, data):
    event = frozenset(data.draw(st.sets(st.sampled_from(m.states))))
    for cf in (False, True):
        assert cb_by_iteration(m, event, cf) == cb_by_reachability(m, event, cf) == oracle_cb(m, event, cf)


@settings(max_examples=60, deadline=None)
@given(structures)
def test_levels_are_monotone_and_cb_matches_weak_rationality(m):
    k = len(m.states) + 1
    sr, wr = srat_sets(m, k), wrat_sets(m, k)
    for i in m.game.players:
        for levels in (sr[i], wr[i]):
            assert all(b <= a for a, b in zip(levels, levels[1:]))
    mc = ModelChecker(m)
    limit = frozenset.intersection(*(wr[i][-1] for i in m.game.players))
    assert mc.sat(CB(RatAll())) == limit
    # players are certain of their own rationality, so CB(RAT) already implies RAT
    for i in m.game.players:
        assert mc.sat(B(i, Rat(i))) == mc.sat(Rat(i))


@settings(max_examples=50, deadline=None)
@given(structures, st.data())
def test_compositionality_and_belief_locality(m, data):
    mc = ModelChecker(m)
    a = data.draw(st.sampled_from([TrueF(), RatAll(), Rat(1), Play(1, m.game.sigma(1)[0]), Srat(2, 1)]))
    b = data.draw(st.sampled_from([Rat(2), Play(2, m.game.sigma(2)[0]), Wrat(1, 2), Ccbr()]))
    omega = frozenset(m.states)
    assert mc.sat(Not(a)) == omega - mc.sat(a)
    assert mc.sat(And(a, b)) == mc.sat(a) & mc.sat(b)
    for i in m.game.players:
        star = mc.sat(BStar(i, a))
        for w in m.states:
            for x in m.states:
                if m.pr(i, w) == m.pr(i, x):
                    assert (w in star) == (x in star)


@settings(max_examples=25, deadline=None)
@given(structures)
def test_validity_spotchecks_find_nothing(m):
    report = validity_spotchecks(m)
    assert report.ok and report.checked > 0
