"""Iterated deletion of minimax-dominated strategies.

A strategy is minimax dominated with respect to an opponent family when some
alternative's worst case over that family strictly beats its best case.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .game import Family, Game, GameError, family_to_json
from .prob import format_rational


@dataclass(frozen=True)
class Certificate:
    """Evidence that ``deleted`` was removed.

    For minimax deletion ``min`` is the dominator's worst payoff and ``max``
    the deleted strategy's best payoff. For classical strict dominance ``min``
    is the smallest pointwise payoff gap and ``max`` is 0. Either way the
    certificate is valid iff ``min > max``.
    """

    player: int
    deleted: str
    dominator: str
    min: Fraction
    max: Fraction
    round: int = 0

    def to_json(self) -> dict:
        return {
            "player": self.player,
            "deleted": self.deleted,
            "dominator": self.dominator,
            "min": format_rational(self.min),
            "max": format_rational(self.max),
            "round": self.round,
        }


@dataclass(frozen=True)
class DeletionTrace:
    rounds: tuple[Family, ...]
    certificates: tuple[Certificate, ...] = field(default=())
    criterion: str = "minimax"

    @property
    def final(self) -> Family:
        return self.rounds[-1]

    @property
    def n_rounds(self) -> int:
        """Number of deletion rounds (the initial family is not counted)."""
        return len(self.rounds) - 1

    def to_json(self) -> dict:
        return {
            "rounds": [family_to_json(f) for f in self.rounds],
            "certificates": [c.to_json() for c in self.certificates],
        }


@dataclass
class SequenceReport:
    ok: bool
    violations: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def _normalize(g: Game, family: Sequence[Iterable[str]]) -> Family:
    if len(family) != g.n_players:
        raise GameError(f"family has {len(family)} entries, game has {g.n_players} players")
    out = []
    for i, subset in enumerate(family, start=1):
        chosen = set(subset)
        for s in chosen:
            g.position(i, s)
        out.append(tuple(s for s in g.sigma(i) if s in chosen))
    return tuple(out)


def is_minimax_dominated(
    g: Game,
    i: int,
    sigma_i: str,
    family: Sequence[Iterable[str]],
    pool: Iterable[str] | None = None,
) -> Certificate | None:
    """Return a certificate if ``sigma_i`` is minimax dominated w.r.t. the opponents in ``family``.

    Only the opponents' entries of ``family`` are read. ``pool`` restricts the
    candidate dominators (default: all of player ``i``'s strategies); the first
    valid dominator in strategy-list order is reported.
    """
    g.position(i, sigma_i)
    fam = _normalize(g, family)
    taus = g.opponent_profiles(i, fam)
    if not taus:
        raise GameError(f"empty opponent family for player {i}")
    best_case = max(g.u(i, sigma_i, t) for t in taus)
    allowed = set(g.sigma(i) if pool is None else pool)
    for cand in g.sigma(i):
        if cand not in allowed:
            continue
        worst_case = min(g.u(i, cand, t) for t in taus)
        if worst_case > best_case:
            return Certificate(i, sigma_i, cand, worst_case, best_case)
    return None


def dominated_in(g: Game, family: Family, restricted: bool = False) -> dict[int, list[Certificate]]:
    """Certificates for every dominated member of ``family``, per player."""
    out = {}
    for i in g.players:
        pool = family[i - 1] if restricted else None
        certs = []
        for s in family[i - 1]:
            c = is_minimax_dominated(g, i, s, family, pool)
            if c is not None:
                certs.append(c)
        out[i] = certs
    return out


def nsd_step(g: Game, family: Sequence[Iterable[str]], restricted: bool = False) -> Family:
    """One round of maximal deletion."""
    fam = _normalize(g, family)
    dead = dominated_in(g, fam, restricted)
    return tuple(
        tuple(s for s in fam[i - 1] if s not in {c.deleted for c in dead[i]}) for i in g.players
    )


def nsd_fixpoint(g: Game, restricted: bool = False) -> DeletionTrace:
    """Iterate maximal deletion from the full family until nothing changes.

    With ``restricted=True`` dominators are drawn only from the strategies
    still alive in the previous round.
    """
    rounds = [g.full_family()]
    certs: list[Certificate] = []
    while True:
        cur = rounds[-1]
        dead = dominated_in(g, cur, restricted)
        if not any(dead.values()):
            break
        r = len(rounds)
        for i in g.players:
            certs.extend(Certificate(c.player, c.deleted, c.dominator, c.min, c.max, r) for c in dead[i])
        rounds.append(
            tuple(tuple(s for s in cur[i - 1] if s not in {c.deleted for c in dead[i]}) for i in g.players)
        )
    return DeletionTrace(tuple(rounds), tuple(certs))


def nsd_levels(g: Game, k_max: int) -> list[Family]:
    """NSD^0 .. NSD^k_max (the last family repeats once the fixpoint is reached)."""
    trace = nsd_fixpoint(g)
    return [trace.rounds[min(k, trace.n_rounds)] for k in range(k_max + 1)]


def validate_deletion_sequence(g: Game, seq: Sequence[Sequence[Iterable[str]]]) -> SequenceReport:
    """Check that ``seq`` is a terminating deletion sequence (any starting family)."""
    if not seq:
        return SequenceReport(False, ["empty sequence"])
    fams = [_normalize(g, f) for f in seq]
    problems = []
    for j in range(len(fams) - 1):
        prev, nxt = fams[j], fams[j + 1]
        subset = all(set(nxt[k]) <= set(prev[k]) for k in range(g.n_players))
        if not subset or nxt == prev:
            problems.append(f"step {j + 1}: not a proper subset of step {j}")
            continue
        for i in g.players:
            if not nxt[i - 1]:
                problems.append(f"step {j + 1}: player {i} has no strategies left")
            for s in prev[i - 1]:
                if s not in nxt[i - 1] and is_minimax_dominated(g, i, s, prev) is None:
                    problems.append(
                        f"step {j + 1}: player {i} strategy {s!r} deleted without a dominating certificate"
                    )
    last = fams[-1]
    if all(last):
        for i, certs in dominated_in(g, last).items():
            for c in certs:
                problems.append(f"final step: player {i} strategy {c.deleted!r} is still dominated by {c.dominator!r}")
    else:
        problems.append("final step: some player has no strategies")
    return SequenceReport(not problems, problems)


def random_terminating_sequence(g: Game, seed: int) -> list[Family]:
    """Delete a random nonempty subset of the currently dominated strategies each round."""
    rng = random.Random(seed)
    seq = [g.full_family()]
    while True:
        cur = seq[-1]
        dead = [(c.player, c.deleted) for certs in dominated_in(g, cur).values() for c in certs]
        if not dead:
            return seq
        chosen = set(rng.sample(dead, rng.randint(1, len(dead))))
        seq.append(tuple(tuple(s for s in cur[i - 1] if (i, s) not in chosen) for i in g.players))


def remark_3_5_check(g: Game) -> bool:
    """True iff restricting dominators to survivors reproduces every round of the full-pool iteration."""
    return nsd_fixpoint(g).rounds == nsd_fixpoint(g, restricted=True).rounds


def iterated_strict_dominance(g: Game) -> DeletionTrace:
    """Classical iterated removal of strategies strictly dominated pointwise by a pure strategy."""
    rounds = [g.full_family()]
    certs: list[Certificate] = []
    while True:
        cur = rounds[-1]
        r = len(rounds)
        removed = {}
        for i in g.players:
            taus = g.opponent_profiles(i, cur)
            gone = set()
            for s in cur[i - 1]:
                for cand in cur[i - 1]:
                    if cand == s:
                        continue
                    gap = min(g.u(i, cand, t) - g.u(i, s, t) for t in taus)
                    if gap > 0:
                        certs.append(Certificate(i, s, cand, gap, Fraction(0), r))
                        gone.add(s)
                        break
            removed[i] = gone
        if not any(removed.values()):
            break
        rounds.append(tuple(tuple(s for s in cur[i - 1] if s not in removed[i]) for i in g.players))
    return DeletionTrace(tuple(rounds), tuple(certs), criterion="strict")


def maximin_strategies(g: Game, i: int, family: Family) -> list[str]:
    """Strategies of ``i`` in ``family`` maximizing the worst case over the opponents' family."""
    taus = g.opponent_profiles(i, family)
    worst = {s: min(g.u(i, s, t) for t in taus) for s in family[i - 1]}
    top = max(worst.values())
    return [s for s in family[i - 1] if worst[s] == top]


def recheck_certificate(g: Game, cert: Certificate, family: Family) -> bool:
    taus = g.opponent_profiles(cert.player, family)
    lo = min(g.u(cert.player, cert.dominator, t) for t in taus)
    hi = max(g.u(cert.player, cert.deleted, t) for t in taus)
    return lo == cert.min and hi == cert.max and lo > hi
