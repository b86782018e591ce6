"""Minimax rationalizability by brute-force search over witness sets.

Deliberately shares no code with :mod:`translucent.domination`; the two are
compared against each other in the test suite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .game import Game, GameError, Profile

DEFAULT_MAX_STRATEGIES = 5

WitnessSets = tuple[tuple[str, ...], ...]


class BudgetExceeded(GameError):
    pass


@dataclass
class WitnessCheck:
    ok: bool
    violations: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def _opponent_product(g: Game, i: int, z: Sequence[Iterable[str]]) -> list[Profile]:
    parts = [tuple(z[k]) for k in range(g.n_players) if k != i - 1]
    return list(itertools.product(*parts))


def _payoff(g: Game, i: int, own: str, tau: Profile) -> Fraction:
    prof = tau[: i - 1] + (own,) + tau[i - 1 :]
    return g.payoffs[prof][i - 1]


def check_witness_sets(g: Game, profile: Sequence[str], z: Sequence[Iterable[str]]) -> WitnessCheck:
    """Verify the witness-set conditions for ``profile``; stops at the first violation."""
    z = [tuple(zi) for zi in z]
    if len(z) != g.n_players:
        return WitnessCheck(False, [f"expected {g.n_players} sets, got {len(z)}"])
    for i in g.players:
        if not z[i - 1]:
            return WitnessCheck(False, [f"player {i}: empty set"])
        for s in z[i - 1]:
            if s not in g.sigma(i):
                return WitnessCheck(False, [f"player {i}: unknown strategy {s!r}"])
        if profile[i - 1] not in z[i - 1]:
            return WitnessCheck(False, [f"player {i}: {profile[i - 1]!r} not in its set"])
    for i in g.players:
        taus = _opponent_product(g, i, z)
        for kept in z[i - 1]:
            best = max(_payoff(g, i, kept, t) for t in taus)
            for alt in g.sigma(i):
                worst = min(_payoff(g, i, alt, t) for t in taus)
                if best < worst:
                    return WitnessCheck(
                        False,
                        [f"player {i}: max payoff of {kept!r} is {best} < min payoff of {alt!r} which is {worst}"],
                    )
    return WitnessCheck(True)


def _check_budget(g: Game, max_strategies: int) -> None:
    for i in g.players:
        if len(g.sigma(i)) > max_strategies:
            raise BudgetExceeded(
                f"witness search budget exceeded: player {i} has {len(g.sigma(i))} strategies, "
                f"bound is {max_strategies} per player"
            )


def _subsets(items: tuple[str, ...], required: str | None = None) -> list[tuple[str, ...]]:
    out = []
    for r in range(1, len(items) + 1):
        for combo in itertools.combinations(items, r):
            if required is None or required in combo:
                out.append(combo)
    return out


class _PlayerCondition:
    """Caches, per opponent family, each strategy's best and worst case."""

    def __init__(self, g: Game, i: int):
        self.g, self.i = g, i
        self.cache: dict[tuple, tuple[dict[str, Fraction], dict[str, Fraction]]] = {}

    def holds(self, z: Sequence[tuple[str, ...]]) -> bool:
        key = tuple(z[k] for k in range(self.g.n_players) if k != self.i - 1)
        if key not in self.cache:
            taus = list(itertools.product(*key))
            best, worst = {}, {}
            for s in self.g.sigma(self.i):
                vals = [_payoff(self.g, self.i, s, t) for t in taus]
                best[s], worst[s] = max(vals), min(vals)
            self.cache[key] = (best, worst)
        best, worst = self.cache[key]
        return min(best[s] for s in z[self.i - 1]) >= max(worst.values())


def _ordered_families(g: Game, profile: Sequence[str] | None) -> list[tuple[tuple[str, ...], ...]]:
    per_player = [
        _subsets(g.sigma(i), None if profile is None else profile[i - 1]) for i in g.players
    ]
    fams = list(itertools.product(*per_player))
    pos = [{s: k for k, s in enumerate(g.sigma(i))} for i in g.players]

    def key(fam):
        return (
            sum(len(zi) for zi in fam),
            tuple(tuple(pos[k][s] for s in zi) for k, zi in enumerate(fam)),
        )

    fams.sort(key=key)
    return fams


def find_witness_sets(
    g: Game, profile: Sequence[str], max_strategies: int = DEFAULT_MAX_STRATEGIES
) -> WitnessSets | None:
    """Smallest witness sets for ``profile`` (by total size, then lexicographically), or None."""
    _check_budget(g, max_strategies)
    g.check_profile(profile)
    conds = [_PlayerCondition(g, i) for i in g.players]
    for fam in _ordered_families(g, profile):
        if all(c.holds(fam) for c in conds):
            return fam
    return None


def valid_witness_families(g: Game, max_strategies: int = DEFAULT_MAX_STRATEGIES) -> list[WitnessSets]:
    """Every family of nonempty sets satisfying the inequality for all players."""
    _check_budget(g, max_strategies)
    conds = [_PlayerCondition(g, i) for i in g.players]
    return [fam for fam in _ordered_families(g, None) if all(c.holds(fam) for c in conds)]


def minimal_witnesses(g: Game, max_strategies: int = DEFAULT_MAX_STRATEGIES) -> dict[Profile, WitnessSets]:
    """For every rationalizable profile, the witness :func:`find_witness_sets` would return."""
    out: dict[Profile, WitnessSets] = {}
    for fam in valid_witness_families(g, max_strategies):
        for prof in itertools.product(*fam):
            out.setdefault(prof, fam)
    return out


def minimax_rationalizable_profiles(
    g: Game, max_strategies: int = DEFAULT_MAX_STRATEGIES
) -> set[Profile]:
    """All pure profiles admitting witness sets."""
    out: set[Profile] = set()
    for fam in valid_witness_families(g, max_strategies):
        out.update(itertools.product(*fam))
    return out


def union_closed(g: Game, max_strategies: int = DEFAULT_MAX_STRATEGIES) -> bool:
    """Whether per-player unions of any two valid families are again valid."""
    fams = valid_witness_families(g, max_strategies)
    conds = [_PlayerCondition(g, i) for i in g.players]
    for a, b in itertools.combinations(fams, 2):
        union = tuple(tuple(s for s in g.sigma(i) if s in a[i - 1] or s in b[i - 1]) for i in g.players)
        if not all(c.holds(union) for c in conds):
            return False
    return True
