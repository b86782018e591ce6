"""Finite counterfactual structures over a game.

A structure assigns every state a pure profile, every (state, player) a
belief over states, and every (state, player, strategy) a closest state in
which that player uses that strategy.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Mapping

from .game import Game, GameError, Profile, drop, game_from_json, game_to_json, translucent_pd as pd_game
from .prob import Distribution, format_rational, parse_rational

State = str
ClosestKey = tuple[State, int, str]


class StructureError(ValueError):
    pass


@dataclass
class Verdict:
    ok: bool
    violations: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True, eq=False)
class CounterfactualStructure:
    game: Game
    states: tuple[State, ...]
    profile_of: Mapping[State, Profile]
    closest: Mapping[ClosestKey, State]
    beliefs: Mapping[int, Mapping[State, Distribution]]

    def __post_init__(self):
        g = self.game
        states = tuple(self.states)
        if not states:
            raise StructureError("a structure needs at least one state")
        if len(set(states)) != len(states):
            raise StructureError("duplicate state id")
        known = set(states)
        profile_of = {}
        for w in states:
            if w not in self.profile_of:
                raise StructureError(f"state {w!r} has no profile")
            prof = tuple(self.profile_of[w])
            try:
                g.check_profile(prof)
            except GameError as exc:
                raise StructureError(f"state {w!r}: {exc}") from None
            profile_of[w] = prof
        beliefs = {}
        for i in g.players:
            per = self.beliefs.get(i, {})
            row = {}
            for w in states:
                if w not in per:
                    raise StructureError(f"missing belief of player {i} at state {w!r}")
                d = per[w] if isinstance(per[w], Distribution) else Distribution(per[w])
                for x in d:
                    if x not in known:
                        raise StructureError(f"belief of player {i} at {w!r} mentions dangling state {x!r}")
                row[w] = d
            beliefs[i] = row
        closest = {}
        for (w, i, s), target in self.closest.items():
            if w not in known or target not in known:
                raise StructureError(f"closest entry ({w!r}, {i}, {s!r}) -> {target!r} has a dangling state id")
            closest[(w, i, s)] = target
        for w in states:
            for i in g.players:
                for s in g.sigma(i):
                    if (w, i, s) not in closest:
                        if profile_of[w][i - 1] == s:
                            closest[(w, i, s)] = w
                        else:
                            raise StructureError(f"missing closest entry for state {w!r}, player {i}, strategy {s!r}")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "profile_of", profile_of)
        object.__setattr__(self, "beliefs", beliefs)
        object.__setattr__(self, "closest", closest)
        object.__setattr__(self, "_cf_cache", {})
        cells: dict[int, dict[Distribution, frozenset]] = {}
        for i in g.players:
            by_belief: dict[Distribution, set] = {}
            for w in states:
                by_belief.setdefault(beliefs[i][w], set()).add(w)
            cells[i] = {d: frozenset(ws) for d, ws in by_belief.items()}
        object.__setattr__(self, "_cells", cells)
        object.__setattr__(self, "_playing", {
            (i, s): frozenset(w for w in states if profile_of[w][i - 1] == s)
            for i in g.players for s in g.sigma(i)
        })

    def s(self, w: State, i: int) -> str:
        return self.profile_of[w][i - 1]

    def s_minus(self, w: State, i: int) -> Profile:
        return drop(self.profile_of[w], i)

    def pr(self, i: int, w: State) -> Distribution:
        return self.beliefs[i][w]

    def f(self, w: State, i: int, strategy: str) -> State:
        return self.closest[(w, i, strategy)]

    def playing(self, i: int, strategy: str) -> frozenset:
        """States in which player ``i`` plays ``strategy``."""
        return self._playing[(i, strategy)]  # type: ignore[attr-defined]

    def belief_cell(self, i: int, belief: Distribution) -> frozenset:
        """States at which player ``i``'s belief equals ``belief`` exactly."""
        return self._cells[i].get(belief, frozenset())  # type: ignore[attr-defined]

    def with_changes(self, *, beliefs=None, closest=None, profile_of=None) -> "CounterfactualStructure":
        """Copy with some entries overridden (used to build mutated fixtures)."""
        new_beliefs = {i: dict(row) for i, row in self.beliefs.items()}
        for (i, w), d in (beliefs or {}).items():
            new_beliefs[i][w] = d
        new_closest = dict(self.closest)
        new_closest.update(closest or {})
        new_profiles = dict(self.profile_of)
        new_profiles.update(profile_of or {})
        return CounterfactualStructure(self.game, self.states, new_profiles, new_closest, new_beliefs)

    def __repr__(self) -> str:
        return f"<CounterfactualStructure {len(self.states)} states over {self.game!r}>"


# -- validation -----------------------------------------------------------


def validate_appropriate(m: CounterfactualStructure) -> Verdict:
    """Exhaustively check both belief conditions and both closest-state conditions."""
    g = m.game
    bad = []
    for w in m.states:
        for i in g.players:
            pi = m.pr(i, w)
            if not pi.certain(m.playing(i, m.s(w, i))):
                bad.append(f"beliefs condition 1 at ({w}, {i}): mass off own strategy {m.s(w, i)!r}")
            if not pi.certain(m.belief_cell(i, pi)):
                bad.append(f"beliefs condition 2 at ({w}, {i}): support leaves the own-belief cell")
            for s in g.sigma(i):
                target = m.f(w, i, s)
                if m.s(target, i) != s:
                    bad.append(f"closest condition 1 at ({w}, {i}, {s}): target {target!r} plays {m.s(target, i)!r}")
                if s == m.s(w, i) and target != w:
                    bad.append(f"closest condition 2 at ({w}, {i}, {s}): target {target!r} is not the state itself")
    return Verdict(not bad, bad)


def counterfactual_belief(m: CounterfactualStructure, w: State, i: int, strategy: str) -> Distribution:
    """Push player ``i``'s belief at ``w`` through the closest-state map for a switch to ``strategy``."""
    key = (w, i, strategy)
    cache = m._cf_cache  # type: ignore[attr-defined]
    if key not in cache:
        m.game.position(i, strategy)
        cache[key] = m.pr(i, w).pushforward(lambda x: m.f(x, i, strategy))
    return cache[key]


def validate_strongly_appropriate(m: CounterfactualStructure, base: Verdict | None = None) -> Verdict:
    """Appropriate, and every player knows each of their counterfactual beliefs.

    ``base`` may carry an already computed :func:`validate_appropriate` result.
    """
    base = validate_appropriate(m) if base is None else base
    bad = list(base.violations)
    for w in m.states:
        for i in m.game.players:
            for s in m.game.sigma(i):
                cf = counterfactual_belief(m, w, i, s)
                if not cf.certain(m.belief_cell(i, cf)):
                    bad.append(f"strong appropriateness at ({w}, {i}, {s}): counterfactual belief not known")
    return Verdict(not bad, bad)


def respects_unilateral_deviations(m: CounterfactualStructure) -> bool:
    """Whether a switch by one player leaves everybody else's strategy and beliefs unchanged."""
    g = m.game
    for w in m.states:
        for i in g.players:
            for s in g.sigma(i):
                t = m.f(w, i, s)
                for j in g.players:
                    if j != i and (m.s(t, j) != m.s(w, j) or m.pr(j, t) != m.pr(j, w)):
                        return False
    return True


def _opponent_type(m: CounterfactualStructure, x: State, i: int) -> tuple:
    return tuple((m.s(x, j), m.pr(j, x)) for j in m.game.players if j != i)


def translucency_epsilon(m: CounterfactualStructure) -> Fraction:
    """Largest total-variation gap between actual and counterfactual beliefs about opponents.

    Both beliefs are projected onto the opponents' (strategy, belief) pairs
    before comparing.
    """
    eps = Fraction(0)
    for w in m.states:
        for i in m.game.players:
            actual = m.pr(i, w).pushforward(lambda x: _opponent_type(m, x, i))
            for s in m.game.sigma(i):
                cf = counterfactual_belief(m, w, i, s).pushforward(lambda x: _opponent_type(m, x, i))
                eps = max(eps, actual.total_variation(cf))
    return eps


# -- generators -----------------------------------------------------------


def _random_weights(rng: random.Random, points: list[State]) -> Distribution:
    weights = [rng.randint(1, 4) for _ in points]
    total = sum(weights)
    return Distribution((p, Fraction(wt, total)) for p, wt in zip(points, weights))


def random_appropriate_structure(g: Game, seed: int, state_count: int) -> CounterfactualStructure:
    """Random structure that is appropriate by construction.

    Every strategy of every player is used at some state (so each closest-state
    entry has a legal target), which needs ``state_count`` at least the largest
    strategy-set size.
    """
    need = max(len(ss) for ss in g.strategies)
    if state_count < max(1, need):
        raise StructureError(
            f"infeasible: {state_count} states cannot cover {need} strategies for some player"
        )
    rng = random.Random(seed)
    states = tuple(f"w{k}" for k in range(state_count))
    columns = []
    for i in g.players:
        col = list(g.sigma(i)) + [rng.choice(g.sigma(i)) for _ in range(state_count - len(g.sigma(i)))]
        rng.shuffle(col)
        columns.append(col)
    profile_of = {w: tuple(col[k] for col in columns) for k, w in enumerate(states)}

    beliefs: dict[int, dict[State, Distribution]] = {}
    for i in g.players:
        row = {}
        for s in g.sigma(i):
            group = [w for w in states if profile_of[w][i - 1] == s]
            rng.shuffle(group)
            while group:
                cut = rng.randint(1, len(group))
                cell, group = group[:cut], group[cut:]
                support = rng.sample(cell, rng.randint(1, len(cell)))
                dist = _random_weights(rng, sorted(support))
                for w in cell:
                    row[w] = dist
        beliefs[i] = row

    closest = {}
    for w in states:
        for i in g.players:
            for s in g.sigma(i):
                if profile_of[w][i - 1] == s:
                    continue
                targets = [x for x in states if profile_of[x][i - 1] == s]
                faithful = [
                    x for x in targets
                    if all(profile_of[x][j - 1] == profile_of[w][j - 1] and beliefs[j][x] == beliefs[j][w]
                           for j in g.players if j != i)
                ]
                pool = faithful if faithful and rng.random() < 0.5 else targets
                closest[(w, i, s)] = rng.choice(pool)
    return CounterfactualStructure(g, states, profile_of, closest, beliefs)


def random_product_structure(g: Game, seed: int) -> CounterfactualStructure:
    """Structure on the full profile set whose closest-state map respects unilateral deviations.

    Player ``j``'s belief depends only on ``j``'s own strategy, so replacing one
    player's strategy leaves everybody else's strategy and beliefs intact.
    """
    rng = random.Random(seed)
    profiles = list(g.profiles())
    name = {p: "|".join(p) for p in profiles}
    states = tuple(name[p] for p in profiles)
    beliefs = {}
    for j in g.players:
        per_strategy = {}
        for s in g.sigma(j):
            cell = sorted(name[p] for p in profiles if p[j - 1] == s)
            support = rng.sample(cell, rng.randint(1, len(cell)))
            per_strategy[s] = _random_weights(rng, sorted(support))
        beliefs[j] = {name[p]: per_strategy[p[j - 1]] for p in profiles}
    closest = {}
    for p in profiles:
        for i in g.players:
            for s in g.sigma(i):
                q = p[: i - 1] + (s,) + p[i:]
                closest[(name[p], i, s)] = name[q]
    return CounterfactualStructure(g, states, {name[p]: p for p in profiles}, closest, beliefs)


# -- built-in structures ------------------------------------------------------


def translucent_pd_structure(r: Any = 1, p: Any = 5, eps: Any = Fraction(1, 4)) -> tuple[CounterfactualStructure, State]:
    """Two firms who each believe a switch to suing leaks with probability ``eps``.

    ``coop`` is the designated state. ``coop_leak1``/``coop_leak2`` are
    cooperative states in which a switch by firm 1 (resp. 2) is detected and
    answered with ``ss``; otherwise a switch leads to ``sc``/``cs`` where the
    other firm keeps cooperating with unchanged beliefs.
    """
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise StructureError(f"eps must lie in (0, 1), got {eps}")
    g = pd_game(r, p)
    profile_of = {
        "coop": ("C", "C"),
        "coop_leak1": ("C", "C"),
        "coop_leak2": ("C", "C"),
        "sc": ("S", "C"),
        "cs": ("C", "S"),
        "ss": ("S", "S"),
    }
    coop1 = Distribution({"coop": 1 - eps, "coop_leak1": eps})
    coop2 = Distribution({"coop": 1 - eps, "coop_leak2": eps})
    punished = Distribution.point("ss")
    beliefs = {
        1: {w: (coop1 if profile_of[w][0] == "C" else punished) for w in profile_of},
        2: {w: (coop2 if profile_of[w][1] == "C" else punished) for w in profile_of},
    }
    closest = {
        ("coop", 1, "S"): "sc",
        ("coop_leak1", 1, "S"): "ss",
        ("coop_leak2", 1, "S"): "sc",
        ("cs", 1, "S"): "ss",
        ("sc", 1, "C"): "coop",
        ("ss", 1, "C"): "cs",
        ("coop", 2, "S"): "cs",
        ("coop_leak2", 2, "S"): "ss",
        ("coop_leak1", 2, "S"): "cs",
        ("sc", 2, "S"): "ss",
        ("cs", 2, "C"): "coop",
        ("ss", 2, "C"): "sc",
    }
    return CounterfactualStructure(g, tuple(profile_of), profile_of, closest, beliefs), "coop"


def pd_naive_structure(r: Any = 1, p: Any = 5) -> tuple[CounterfactualStructure, State]:
    """Mutual cooperation ``w0`` and mutual suing ``w1``; any switch jumps to the other state."""
    g = pd_game(r, p)
    profile_of = {"w0": ("C", "C"), "w1": ("S", "S")}
    beliefs = {i: {w: Distribution.point(w) for w in profile_of} for i in (1, 2)}
    closest = {}
    for i in (1, 2):
        closest[("w0", i, "S")] = "w1"
        closest[("w1", i, "C")] = "w0"
    return CounterfactualStructure(g, ("w0", "w1"), profile_of, closest, beliefs), "w0"


BUILTIN_STRUCTURES = {"translucent_pd": translucent_pd_structure, "pd_naive": pd_naive_structure}


def builtin_structure(name: str, **params: Any) -> tuple[CounterfactualStructure, State]:
    try:
        factory = BUILTIN_STRUCTURES[name]
    except KeyError:
        raise StructureError(f"unknown built-in structure {name!r}; choose from {sorted(BUILTIN_STRUCTURES)}") from None
    return factory(**params)


# -- file format -----------------------------------------------------------


def parse_structure(text: str, g: Game | None = None, base_dir: Path | None = None) -> CounterfactualStructure:
    """Parse a structure file.

    The ``game`` field may hold an inline game object or a path (resolved
    against ``base_dir``); an explicit ``g`` takes precedence. Closest-state
    entries must satisfy both closest-state conditions; belief conditions are
    left to :func:`validate_appropriate`.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructureError(f"syntax error at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise StructureError("structure file must hold a JSON object")
    if g is None:
        spec = data.get("game")
        if isinstance(spec, dict):
            g = game_from_json(spec)
        elif isinstance(spec, str):
            path = Path(spec) if base_dir is None else Path(base_dir) / spec
            g = game_from_json(json.loads(path.read_text(encoding="utf-8")))
        else:
            raise StructureError("structure file has no usable 'game' field")
    try:
        states = [str(e["id"]) for e in data["states"]]
        profile_of = {str(e["id"]): tuple(str(s) for s in e["profile"]) for e in data["states"]}
        beliefs = {}
        for key, row in data["beliefs"].items():
            i = int(key)
            beliefs[i] = {}
            for w, dist in row.items():
                try:
                    beliefs[i][w] = Distribution({x: parse_rational(q) for x, q in dist.items()})
                except ValueError as exc:
                    raise StructureError(f"belief of player {i} at {w!r}: {exc}") from None
        closest = {}
        for e in data.get("closest", []):
            key = (str(e["state"]), int(e["player"]), str(e["strategy"]))
            if key in closest:
                raise StructureError(f"duplicate closest entry {key!r}")
            closest[key] = str(e["to"])
    except (KeyError, TypeError, AttributeError) as exc:
        raise StructureError(f"malformed structure file: {exc!r}") from None
    if len(states) != len(set(states)):
        raise StructureError("duplicate state id")
    m = CounterfactualStructure(g, tuple(states), profile_of, closest, beliefs)
    for (w, i, s), target in m.closest.items():
        if m.s(target, i) != s:
            raise StructureError(
                f"closest condition 1 violated: f({w}, {i}, {s}) = {target} where player {i} plays {m.s(target, i)!r}"
            )
        if m.s(w, i) == s and target != w:
            raise StructureError(f"closest condition 2 violated: f({w}, {i}, {s}) = {target}")
    return m


def structure_to_json(m: CounterfactualStructure, game_ref: str | None = None) -> dict:
    order = sorted(m.states)
    g = m.game
    closest = []
    for w in order:
        for i in g.players:
            for s in g.sigma(i):
                if s != m.s(w, i):
                    closest.append({"state": w, "player": i, "strategy": s, "to": m.f(w, i, s)})
    return {
        "game": game_ref if game_ref is not None else game_to_json(g),
        "states": [{"id": w, "profile": list(m.profile_of[w])} for w in order],
        "beliefs": {str(i): {w: m.pr(i, w).to_json() for w in order} for i in g.players},
        "closest": closest,
    }


def serialize_structure(m: CounterfactualStructure, game_ref: str | None = None) -> str:
    return json.dumps(structure_to_json(m, game_ref), indent=2) + "\n"
