"""Model checking over counterfactual structures.

Two evaluation modes are supported. ``"probability"`` ignores the
closest-state map: rationality is the classical best response to the induced
belief over opponent profiles, and counterfactual operators are rejected.
``"counterfactual"`` evaluates deviations under counterfactual beliefs.

Everybody-believes over the counterfactual operator is read as the
conjunction of the individual counterfactual belief operators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from ..structures import CounterfactualStructure, State, counterfactual_belief
from ..prob import Distribution
from .formula import (
    B,
    CB,
    COUNTERFACTUAL_ONLY,
    And,
    BStar,
    CBStar,
    Ccbr,
    Formula,
    Not,
    Play,
    Rat,
    RatAll,
    Srat,
    TrueF,
    Wrat,
)

PROBABILITY = "probability"
COUNTERFACTUAL = "counterfactual"
MODES = (PROBABILITY, COUNTERFACTUAL)


class ModeError(ValueError):
    pass


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ModeError(f"unknown mode {mode!r}; expected one of {MODES}")


# -- rationality -----------------------------------------------------------------


def stay_payoff(m: CounterfactualStructure, w: State, i: int) -> Fraction:
    own = m.s(w, i)
    return m.pr(i, w).expectation(lambda x: m.game.u(i, own, m.s_minus(x, i)))


def deviation_payoff(m: CounterfactualStructure, w: State, i: int, strategy: str) -> Fraction:
    """Expected payoff of switching to ``strategy`` under the counterfactual belief."""
    cf = counterfactual_belief(m, w, i, strategy)
    return cf.expectation(lambda x: m.game.u(i, strategy, m.s_minus(x, i)))


def deviation_payoff_direct(m: CounterfactualStructure, w: State, i: int, strategy: str) -> Fraction:
    """Same quantity computed state by state from the actual belief, without the pushforward."""
    return m.pr(i, w).expectation(lambda x: m.game.u(i, strategy, m.s_minus(m.f(x, i, strategy), i)))


def induced_opponent_belief(m: CounterfactualStructure, w: State, i: int) -> Distribution:
    return m.pr(i, w).pushforward(lambda x: m.s_minus(x, i))


def rat_holds(m: CounterfactualStructure, mode: str, w: State, i: int) -> bool:
    _check_mode(mode)
    if mode == COUNTERFACTUAL:
        stay = stay_payoff(m, w, i)
        return all(stay >= deviation_payoff(m, w, i, s) for s in m.game.sigma(i))
    mu = induced_opponent_belief(m, w, i)
    own = m.s(w, i)
    stay = mu.expectation(lambda t: m.game.u(i, own, t))
    return all(stay >= mu.expectation(lambda t, s=s: m.game.u(i, s, t)) for s in m.game.sigma(i))


def rat_equivalence_check(m: CounterfactualStructure, w: State, i: int) -> bool:
    """Both ways of computing the counterfactual deviation payoff agree for every strategy."""
    return all(
        deviation_payoff(m, w, i, s) == deviation_payoff_direct(m, w, i, s) for s in m.game.sigma(i)
    )


# -- belief operators ---------------------------------------------------------------


def believes(m: CounterfactualStructure, i: int, event: frozenset) -> frozenset:
    return frozenset(w for w in m.states if m.pr(i, w).certain(event))


def cf_believes(m: CounterfactualStructure, i: int, event: frozenset) -> frozenset:
    return frozenset(
        w for w in m.states
        if all(counterfactual_belief(m, w, i, s).certain(event) for s in m.game.strategies[i - 1])
    )


def everyone_believes(m: CounterfactualStructure, event: frozenset, counterfactual: bool = False) -> frozenset:
    op = cf_believes if counterfactual else believes
    out = frozenset(m.states)
    for i in m.game.players:
        out &= op(m, i, event)
    return out


def _successors(m: CounterfactualStructure, w: State, counterfactual: bool) -> set[State]:
    succ: set[State] = set()
    for i in m.game.players:
        if counterfactual:
            for s in m.game.sigma(i):
                succ |= counterfactual_belief(m, w, i, s).support
        else:
            succ |= m.pr(i, w).support
    return succ


def cb_by_reachability(m: CounterfactualStructure, event: Iterable[State], counterfactual: bool = False) -> frozenset:
    """States all of whose belief-graph descendants (one or more steps) lie in ``event``."""
    event = frozenset(event)
    out = set()
    for w in m.states:
        seen: set[State] = set()
        frontier = list(_successors(m, w, counterfactual))
        while frontier:
            x = frontier.pop()
            if x in seen:
                continue
            seen.add(x)
            frontier.extend(_successors(m, x, counterfactual))
        if seen <= event:
            out.add(w)
    return frozenset(out)


def cb_by_iteration(m: CounterfactualStructure, event: Iterable[State], counterfactual: bool = False) -> frozenset:
    """Intersection of the first |states| iterates of everybody-believes.

    A state reachable by a walk of positive length is reachable by one of
    length at most |states|, so later iterates add nothing.
    """
    level = frozenset(event)
    out = frozenset(m.states)
    for _ in range(len(m.states)):
        level = everyone_believes(m, level, counterfactual)
        out &= level
    return out


def cb_states(m: CounterfactualStructure, event: Iterable[State], counterfactual: bool = False) -> frozenset:
    """Common (counterfactual) belief of an event, cross-checked by two methods."""
    event = frozenset(event)
    it = cb_by_iteration(m, event, counterfactual)
    reach = cb_by_reachability(m, event, counterfactual)
    if it != reach:
        raise AssertionError(f"common-belief methods disagree: {sorted(it)} vs {sorted(reach)}")
    return it


# -- rationality towers -----------------------------------------------------------------


def rat_set(m: CounterfactualStructure, mode: str, i: int) -> frozenset:
    return frozenset(w for w in m.states if rat_holds(m, mode, w, i))


def _others(m: CounterfactualStructure, levels: dict[int, frozenset], i: int) -> frozenset:
    out = frozenset(m.states)
    for j in m.game.players:
        if j != i:
            out &= levels[j]
    return out


def default_k_max(m: CounterfactualStructure) -> int:
    return len(m.states) + 1


def srat_sets(m: CounterfactualStructure, k_max: int | None = None) -> dict[int, list[frozenset]]:
    """``result[i][k]`` is the set of states where player ``i`` is strongly k-level rational."""
    k_max = default_k_max(m) if k_max is None else k_max
    rat = {i: rat_set(m, COUNTERFACTUAL, i) for i in m.game.players}
    levels = {i: [frozenset(m.states)] for i in m.game.players}
    for k in range(k_max):
        cur = {i: levels[i][k] for i in m.game.players}
        for i in m.game.players:
            levels[i].append(rat[i] & cf_believes(m, i, _others(m, cur, i)))
    return levels


def wrat_sets(m: CounterfactualStructure, k_max: int | None = None, mode: str = COUNTERFACTUAL) -> dict[int, list[frozenset]]:
    """Weak k-level rationality sets.

    Also computes the variant in which each player believes that everybody,
    including themselves, is (k-1)-level rational, and raises if the two differ.
    """
    _check_mode(mode)
    k_max = default_k_max(m) if k_max is None else k_max
    rat = {i: rat_set(m, mode, i) for i in m.game.players}
    levels = {i: [frozenset(m.states)] for i in m.game.players}
    for k in range(k_max):
        cur = {i: levels[i][k] for i in m.game.players}
        everyone = frozenset(m.states)
        for j in m.game.players:
            everyone &= cur[j]
        for i in m.game.players:
            nxt = rat[i] & believes(m, i, _others(m, cur, i))
            alt = rat[i] & believes(m, i, everyone)
            if nxt != alt:
                raise AssertionError(f"weak rationality recursions disagree for player {i} at level {k + 1}")
            levels[i].append(nxt)
    return levels


@dataclass
class Fixpoint:
    states: frozenset
    level: int
    levels: dict[int, list[frozenset]] = field(default_factory=dict)


def ccbr_fixpoint(m: CounterfactualStructure) -> Fixpoint:
    """Iterate strong k-level rationality until no player's set changes."""
    rat = {i: rat_set(m, COUNTERFACTUAL, i) for i in m.game.players}
    levels = {i: [frozenset(m.states)] for i in m.game.players}
    k = 0
    while True:
        cur = {i: levels[i][k] for i in m.game.players}
        nxt = {i: rat[i] & cf_believes(m, i, _others(m, cur, i)) for i in m.game.players}
        for i in m.game.players:
            levels[i].append(nxt[i])
        k += 1
        if nxt == cur:
            break
    out = frozenset(m.states)
    for i in m.game.players:
        out &= levels[i][-1]
    return Fixpoint(out, k - 1, levels)


def ccbr_states(m: CounterfactualStructure) -> frozenset:
    return ccbr_fixpoint(m).states


# -- formula evaluation -----------------------------------------------------------


class ModelChecker:
    """Evaluates formulas on one structure in one mode, memoizing subformulas."""

    def __init__(self, m: CounterfactualStructure, mode: str = COUNTERFACTUAL):
        _check_mode(mode)
        self.m = m
        self.mode = mode
        self.memo: dict[Formula, frozenset] = {}
        self._srat: dict[int, list[frozenset]] | None = None
        self._wrat: dict[int, list[frozenset]] | None = None
        self._omega = frozenset(m.states)

    def _levels(self, kind: str, k: int) -> dict[int, list[frozenset]]:
        if kind == "srat":
            if self._srat is None or len(self._srat[1]) <= k:
                self._srat = srat_sets(self.m, max(k, default_k_max(self.m)))
            return self._srat
        if self._wrat is None or len(self._wrat[1]) <= k:
            self._wrat = wrat_sets(self.m, max(k, default_k_max(self.m)), self.mode)
        return self._wrat

    def check_formula(self, f: Formula) -> None:
        """Reject unknown players/strategies and mode-incompatible operators (memoized subtrees are skipped)."""
        if f in self.memo:
            return
        g = self.m.game
        if self.mode == PROBABILITY and isinstance(f, COUNTERFACTUAL_ONLY):
            raise ModeError(f"{type(f).__name__} is not available in probability mode")
        i = getattr(f, "player", None)
        if i is not None and not 1 <= i <= g.n_players:
            raise ModeError(f"unknown player {i}")
        if isinstance(f, Play) and f.strategy not in g.strategies[f.player - 1]:
            raise ModeError(f"unknown strategy {f.strategy!r} for player {f.player}")
        if isinstance(f, (Srat, Wrat)) and f.k < 0:
            raise ModeError("level must be nonnegative")
        for name in ("sub", "left", "right"):
            child = getattr(f, name, None)
            if child is not None:
                self.check_formula(child)

    def sat(self, f: Formula) -> frozenset:
        """Satisfaction set of ``f`` (validated against the game and mode first)."""
        self.check_formula(f)
        return self._sat(f)

    def _sat(self, f: Formula) -> frozenset:
        out = self.memo.get(f)
        if out is None:
            out = self.memo[f] = self._eval(f)
        return out

    def _eval(self, f: Formula) -> frozenset:
        m = self.m
        if isinstance(f, TrueF):
            return self._omega
        if isinstance(f, Play):
            return m.playing(f.player, f.strategy)
        if isinstance(f, Rat):
            return rat_set(m, self.mode, f.player)
        if isinstance(f, RatAll):
            out = self._omega
            for i in m.game.players:
                out &= self._sat(Rat(i))
            return out
        if isinstance(f, Not):
            return self._omega - self._sat(f.sub)
        if isinstance(f, And):
            return self._sat(f.left) & self._sat(f.right)
        if isinstance(f, B):
            return believes(m, f.player, self._sat(f.sub))
        if isinstance(f, BStar):
            return cf_believes(m, f.player, self._sat(f.sub))
        if isinstance(f, CB):
            return cb_states(m, self._sat(f.sub), counterfactual=False)
        if isinstance(f, CBStar):
            return cb_states(m, self._sat(f.sub), counterfactual=True)
        if isinstance(f, Srat):
            return self._levels("srat", f.k)[f.player][f.k]
        if isinstance(f, Wrat):
            return self._levels("wrat", f.k)[f.player][f.k]
        if isinstance(f, Ccbr):
            return ccbr_states(m)
        raise TypeError(f"not a formula: {f!r}")


def satisfying_states(m: CounterfactualStructure, mode: str, f: Formula) -> frozenset:
    return ModelChecker(m, mode).sat(f)
