"""Finite normal-form games with exact rational payoffs.

Players are numbered from 1. A full profile is a tuple of strategy names in
player order; an opponent profile for player ``i`` is the same tuple with
entry ``i`` removed, keeping the remaining players in order.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Iterator, Mapping, Sequence

from .prob import Distribution, format_rational, parse_rational

Profile = tuple[str, ...]
Family = tuple[tuple[str, ...], ...]


class GameError(ValueError):
    """Raised for malformed game descriptions and invalid lookups."""


@dataclass(frozen=True, eq=False)
class Game:
    strategies: tuple[tuple[str, ...], ...]
    payoffs: Mapping[Profile, tuple[Fraction, ...]]

    def __post_init__(self):
        strategies = tuple(tuple(str(s) for s in ss) for ss in self.strategies)
        if len(strategies) < 2:
            raise GameError("a game needs at least 2 players")
        for i, ss in enumerate(strategies, start=1):
            if not ss:
                raise GameError(f"player {i} has no strategies")
            if len(set(ss)) != len(ss):
                dup = next(s for s in ss if ss.count(s) > 1)
                raise GameError(f"duplicate strategy name {dup!r} for player {i}")
        n = len(strategies)
        table: dict[Profile, tuple[Fraction, ...]] = {}
        for profile, vec in self.payoffs.items():
            profile = tuple(profile)
            if len(profile) != n or any(s not in strategies[k] for k, s in enumerate(profile)):
                raise GameError(f"payoff entry for invalid profile {profile!r}")
            if len(vec) != n:
                raise GameError(f"payoff vector for {profile!r} has length {len(vec)}, expected {n}")
            table[profile] = tuple(Fraction(v) for v in vec)
        for profile in itertools.product(*strategies):
            if profile not in table:
                raise GameError(f"incomplete payoff table: missing profile {list(profile)!r}")
        object.__setattr__(self, "strategies", strategies)
        object.__setattr__(self, "payoffs", table)
        object.__setattr__(self, "_index", tuple({s: k for k, s in enumerate(ss)} for ss in strategies))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Game):
            return NotImplemented
        return self.strategies == other.strategies and self.payoffs == other.payoffs

    __hash__ = None  # type: ignore[assignment]

    @property
    def n_players(self) -> int:
        return len(self.strategies)

    @property
    def players(self) -> range:
        return range(1, self.n_players + 1)

    def sigma(self, i: int) -> tuple[str, ...]:
        """Pure strategies of player ``i``."""
        self._check_player(i)
        return self.strategies[i - 1]

    def position(self, i: int, strategy: str) -> int:
        try:
            return self._index[i - 1][strategy]
        except KeyError:
            raise GameError(f"unknown strategy {strategy!r} for player {i}") from None

    def full_family(self) -> Family:
        return self.strategies

    def profiles(self, family: Family | None = None) -> Iterator[Profile]:
        return itertools.product(*(family or self.strategies))

    def opponent_profiles(self, i: int, family: Family | None = None) -> list[Profile]:
        """All opponent profiles for ``i`` drawn from ``family`` (default: full sets)."""
        fam = family or self.strategies
        return list(itertools.product(*(fam[k] for k in range(self.n_players) if k != i - 1)))

    def utility(self, profile: Sequence[str], i: int) -> Fraction:
        self._check_player(i)
        profile = tuple(profile)
        try:
            return self.payoffs[profile][i - 1]
        except KeyError:
            self.check_profile(profile)
            raise

    def u(self, i: int, own: str, opponents: Profile) -> Fraction:
        """Payoff to ``i`` for playing ``own`` against an opponent profile."""
        return self.payoffs[join(own, opponents, i)][i - 1]

    def check_profile(self, profile: Sequence[str]) -> None:
        if len(profile) != self.n_players:
            raise GameError(f"profile {tuple(profile)!r} has wrong length")
        for k, s in enumerate(profile, start=1):
            if s not in self._index[k - 1]:
                raise GameError(f"unknown strategy {s!r} for player {k}")

    def _check_player(self, i: int) -> None:
        if not isinstance(i, int) or not 1 <= i <= self.n_players:
            raise GameError(f"player index {i!r} out of range 1..{self.n_players}")

    def __repr__(self) -> str:
        sizes = "x".join(str(len(s)) for s in self.strategies)
        return f"<Game {sizes}>"


def join(own: str, opponents: Sequence[str], i: int) -> Profile:
    """Insert player ``i``'s strategy into an opponent profile."""
    return tuple(opponents[: i - 1]) + (own,) + tuple(opponents[i - 1 :])


def drop(profile: Sequence[str], i: int) -> Profile:
    """Opponent part of a full profile."""
    return tuple(profile[: i - 1]) + tuple(profile[i:])


def utility(g: Game, profile: Sequence[str], i: int) -> Fraction:
    return g.utility(profile, i)


def expected_utility(g: Game, i: int, sigma_i: str, belief: Mapping[Profile, Any]) -> Fraction:
    """Expected payoff of ``sigma_i`` against a distribution over opponent profiles.

    ``belief`` may be a ``Distribution`` or a plain mapping; plain mappings are
    validated (nonnegative, total mass exactly 1).
    """
    g.position(i, sigma_i)
    dist = belief if isinstance(belief, Distribution) else Distribution(belief)
    for tau in dist:
        if len(tau) != g.n_players - 1:
            raise GameError(f"belief entry {tau!r} is not an opponent profile for player {i}")
        g.check_profile(join(sigma_i, tau, i))
    return dist.expectation(lambda tau: g.u(i, sigma_i, tau))


# -- file format --------------------------------------------------------------


def parse_game(text: str) -> Game:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GameError(f"syntax error at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return game_from_json(data)


def game_from_json(data: Any) -> Game:
    if not isinstance(data, dict) or "players" not in data or "payoffs" not in data:
        raise GameError("game object needs 'players' and 'payoffs'")
    players = data["players"]
    if not isinstance(players, list) or not all(isinstance(p, list) for p in players):
        raise GameError("'players' must be a list of strategy-name lists")
    table: dict[Profile, tuple[Fraction, ...]] = {}
    for k, entry in enumerate(data["payoffs"]):
        try:
            profile = tuple(str(s) for s in entry["profile"])
            vec = tuple(parse_rational(x) for x in entry["u"])
        except (KeyError, TypeError, ValueError) as exc:
            raise GameError(f"bad payoff entry #{k}: {exc}") from None
        if profile in table:
            raise GameError(f"duplicate payoff entry for profile {list(profile)!r}")
        table[profile] = vec
    return Game(tuple(tuple(str(s) for s in p) for p in players), table)


def game_to_json(g: Game) -> dict[str, Any]:
    # Entries are sorted lexicographically in the game's own strategy order.
    entries = sorted(g.payoffs.items(), key=lambda kv: tuple(g.position(k + 1, s) for k, s in enumerate(kv[0])))
    return {
        "players": [list(ss) for ss in g.strategies],
        "payoffs": [{"profile": list(p), "u": [format_rational(x) for x in vec]} for p, vec in entries],
    }


def serialize_game(g: Game) -> str:
    return json.dumps(game_to_json(g), indent=2) + "\n"


def family_to_json(family: Family) -> list[list[str]]:
    return [list(ss) for ss in family]


# -- built-in games -----------------------------------------------------------


def translucent_pd(r: Any = 1, p: Any = 5) -> Game:
    """Prisoner's dilemma between two firms that can cooperate (C) or sue (S)."""
    r, p = Fraction(r), Fraction(p)
    table = {
        ("C", "C"): (0, 0),
        ("C", "S"): (-p, r),
        ("S", "C"): (r, -p),
        ("S", "S"): (r - p, r - p),
    }
    return Game((("C", "S"), ("C", "S")), table)


def ladder(k: int = 3, p: Any = Fraction(1, 2)) -> Game:
    """Both players announce 1..k, get the smaller value, and the larger announcer earns ``p`` on top."""
    if not isinstance(k, int) or k < 1:
        raise GameError(f"ladder needs k >= 1, got {k!r}")
    p = Fraction(p)
    if p <= 0:
        raise GameError(f"ladder needs p > 0, got {p}")
    names = tuple(str(v) for v in range(1, k + 1))
    table = {}
    for x in range(1, k + 1):
        for y in range(1, k + 1):
            if x > y:
                vec = (y + p, Fraction(y))
            elif y > x:
                vec = (Fraction(x), x + p)
            else:
                vec = (Fraction(x), Fraction(x))
            table[(str(x), str(y))] = vec
    return Game((names, names), table)


BUILTIN_GAMES = {"translucent_pd": translucent_pd, "ladder": ladder}


def builtin_game(name: str, **params: Any) -> Game:
    try:
        factory = BUILTIN_GAMES[name]
    except KeyError:
        raise GameError(f"unknown built-in game {name!r}; choose from {sorted(BUILTIN_GAMES)}") from None
    return factory(**params)


def random_game(
    rng: random.Random | int,
    players: Iterable[int] = (2, 3),
    sizes: Iterable[int] = (2, 3, 4),
    low: int = -9,
    high: int = 9,
) -> Game:
    """Small game with integer payoffs drawn uniformly from ``[low, high]``."""
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    n = rng.choice(list(players))
    sizes = list(sizes)
    strategies = tuple(tuple(f"s{j}" for j in range(rng.choice(sizes))) for _ in range(n))
    table = {prof: tuple(rng.randint(low, high) for _ in range(n)) for prof in itertools.product(*strategies)}
    return Game(strategies, table)
