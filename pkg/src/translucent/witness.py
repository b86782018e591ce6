"""Canonical strongly appropriate structures realizing common counterfactual belief of rationality.

Given witness sets Z for a profile, every player ``i`` gets

* a belief state ``B<i,s>`` for each ``s`` in ``Z_i``: ``i`` plays ``s`` and the
  others play the opponent profile in ``Z_-i`` that is best for ``i``;
* a punishment state ``P<i,s>`` for each ``s`` in ``Sigma_i``: ``i`` plays ``s``
  and the others play the opponent profile in ``Z_-i`` that is worst for ``i``.

Player ``j`` believes (point mass) they are at ``B<j, own strategy>`` whenever
that strategy is in ``Z_j``, except at its own punishment states where it
believes it is exactly there. Every switch by ``j`` leads to ``P<j, new>``.
A fresh designated state plays the requested profile.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .game import Game, GameError, Profile, join
from .logic.checker import COUNTERFACTUAL, ModelChecker, ccbr_fixpoint
from .logic.formula import play_profile
from .minimax_rat import check_witness_sets
from .prob import Distribution
from .structures import (
    CounterfactualStructure,
    State,
    validate_appropriate,
    validate_strongly_appropriate,
)

DESIGNATED = "D"


@dataclass(frozen=True)
class CanonicalWitness:
    structure: CounterfactualStructure
    designated: State
    profile: Profile
    z: tuple[tuple[str, ...], ...]
    belief_states: dict
    punishment_states: dict


def _extreme(g: Game, i: int, own: str, z: Sequence[Sequence[str]], best: bool) -> Profile:
    # Opponent profiles are enumerated in strategy-list order; the first extremum wins.
    taus = list(itertools.product(*(z[k] for k in range(g.n_players) if k != i - 1)))
    values = [g.u(i, own, t) for t in taus]
    target = max(values) if best else min(values)
    return taus[values.index(target)]


def build_canonical_witness(
    g: Game, z: Sequence[Sequence[str]], profile: Sequence[str], check: bool = True
) -> CanonicalWitness:
    """Build the canonical structure for ``profile`` supported by witness sets ``z``.

    With ``check=False`` the witness-set precondition is skipped, which is
    only useful for probing what goes wrong when the witness sets are invalid.
    """
    profile = tuple(profile)
    z = tuple(tuple(s for s in g.sigma(i) if s in set(z[i - 1])) for i in g.players)
    if check:
        verdict = check_witness_sets(g, profile, z)
        if not verdict:
            raise GameError("witness sets rejected: " + "; ".join(verdict.violations))

    profile_of: dict[State, Profile] = {}
    belief_states, punishment_states = {}, {}
    for i in g.players:
        for s in z[i - 1]:
            w = f"B<{i},{s}>"
            belief_states[(i, s)] = w
            profile_of[w] = join(s, _extreme(g, i, s, z, best=True), i)
    for i in g.players:
        for s in g.sigma(i):
            w = f"P<{i},{s}>"
            punishment_states[(i, s)] = w
            profile_of[w] = join(s, _extreme(g, i, s, z, best=False), i)
    profile_of[DESIGNATED] = profile
    states = tuple(profile_of)

    own_punishment = {w: i for (i, _), w in punishment_states.items()}
    beliefs: dict[int, dict[State, Distribution]] = {i: {} for i in g.players}
    for w in states:
        for j in g.players:
            sj = profile_of[w][j - 1]
            if own_punishment.get(w) == j or (j, sj) not in belief_states:
                beliefs[j][w] = Distribution.point(punishment_states[(j, sj)])
            else:
                beliefs[j][w] = Distribution.point(belief_states[(j, sj)])

    closest = {}
    for w in states:
        for j in g.players:
            for s in g.sigma(j):
                closest[(w, j, s)] = w if s == profile_of[w][j - 1] else punishment_states[(j, s)]

    m = CounterfactualStructure(g, states, profile_of, closest, beliefs)
    return CanonicalWitness(m, DESIGNATED, profile, z, belief_states, punishment_states)


@dataclass
class WitnessReport:
    appropriate: bool
    strongly_appropriate: bool
    plays_profile: bool
    designated_in_ccbr: bool
    fixpoint_level: int
    violations: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.appropriate and self.strongly_appropriate and self.plays_profile and self.designated_in_ccbr

    def __bool__(self) -> bool:
        return self.passed

    def lines(self) -> list[str]:
        mark = {True: "pass", False: "FAIL"}
        return [
            f"appropriate          {mark[self.appropriate]}",
            f"strongly appropriate {mark[self.strongly_appropriate]}",
            f"plays profile        {mark[self.plays_profile]}",
            f"designated in CCBR   {mark[self.designated_in_ccbr]}",
            f"SRAT fixpoint level  {self.fixpoint_level}",
        ]


def verify_ccbr_witness(w: CanonicalWitness) -> WitnessReport:
    m = w.structure
    app = validate_appropriate(m)
    strong = validate_strongly_appropriate(m, app)
    plays = w.designated in ModelChecker(m, COUNTERFACTUAL).sat(play_profile(w.profile))
    fix = ccbr_fixpoint(m)
    in_ccbr = w.designated in fix.states
    violations = list(strong.violations)
    if not plays:
        violations.append("designated state does not play the profile")
    if not in_ccbr:
        violations.append("designated state is not in the CCBR fixpoint")
    return WitnessReport(bool(app), bool(strong), plays, in_ccbr, fix.level, violations)
