"""Seeded verification harness: one check per acceptance criterion.

Every check returns a :class:`CriterionResult`; ``run_all`` feeds the
``verify-paper`` subcommand and the acceptance tests.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

from . import domination as dom
from .game import Game, ladder, random_game, translucent_pd
from .logic.checker import (
    COUNTERFACTUAL,
    PROBABILITY,
    ModelChecker,
    cb_states,
    deviation_payoff,
    rat_equivalence_check,
    rat_holds,
    srat_sets,
    stay_payoff,
    wrat_sets,
)
from .logic.formula import BStar, Srat
from .logic.validity import validity_spotchecks
from .minimax_rat import minimal_witnesses, minimax_rationalizable_profiles
from .structures import (
    CounterfactualStructure,
    counterfactual_belief,
    pd_naive_structure,
    random_appropriate_structure,
    random_product_structure,
    respects_unilateral_deviations,
    translucency_epsilon,
    translucent_pd_structure,
)
from .witness import build_canonical_witness, verify_ccbr_witness

DEFAULT_SEED = 0


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:>2}. {self.name}: {self.detail}"


# -- corpora -----------------------------------------------------------------


def _rng(kind: str, seed: int, k: int) -> random.Random:
    # String seeds are hashed deterministically, so corpora are stable across runs.
    return random.Random(f"{kind}:{seed}:{k}")


def game_corpus(count: int, seed: int = DEFAULT_SEED) -> list[Game]:
    """Random games: 2-3 players, 2-4 strategies each, integer payoffs in [-9, 9]."""
    return [random_game(_rng("game", seed, k)) for k in range(count)]


def structure_corpus(count: int, seed: int = DEFAULT_SEED) -> list[CounterfactualStructure]:
    """Random appropriate structures with 2-6 states over random games.

    The state count is at least the largest strategy set so that every
    strategy has a closest-state target.
    """
    out = []
    for k in range(count):
        rng = _rng("structure", seed, k)
        g = random_game(rng)
        need = max(2, max(len(ss) for ss in g.strategies))
        out.append(random_appropriate_structure(g, rng.randrange(2**32), rng.randint(need, 6)))
    return out


def product_corpus(count: int, seed: int = DEFAULT_SEED) -> list[CounterfactualStructure]:
    """Structures whose closest-state map respects unilateral deviations."""
    out = []
    for k in range(count):
        rng = _rng("product", seed, k)
        g = random_game(rng, sizes=(2, 3))
        out.append(random_product_structure(g, rng.randrange(2**32)))
    return out


def bundled_structures() -> dict[str, CounterfactualStructure]:
    out = {
        "translucent_pd(1,5,1/4)": translucent_pd_structure(1, 5, Fraction(1, 4))[0],
        "translucent_pd(1,5,1/10)": translucent_pd_structure(1, 5, Fraction(1, 10))[0],
        "pd_naive(1,5)": pd_naive_structure(1, 5)[0],
    }
    lad = ladder(3, Fraction(1, 2))
    out["witness ladder(3) (3,3)"] = build_canonical_witness(lad, (("3",), ("3",)), ("3", "3")).structure
    pd = translucent_pd(1, 5)
    out["witness pd (C,C)"] = build_canonical_witness(pd, pd.strategies, ("C", "C")).structure
    return out


# -- criteria ----------------------------------------------------------------


def check_ladder() -> CriterionResult:
    problems = []
    for k in range(2, 8):
        g = ladder(k, Fraction(1, 2))
        trace = dom.nsd_fixpoint(g)
        top = str(k)
        if trace.n_rounds != k - 1 or trace.final != ((top,), (top,)):
            problems.append(f"k={k}: {trace.n_rounds} rounds, final {trace.final}")
        first = [c for c in trace.certificates if c.round == 1]
        if sorted((c.player, c.deleted) for c in first) != [(1, "1"), (2, "1")]:
            problems.append(f"k={k}: round 1 deletes {[(c.player, c.deleted) for c in first]}")
        if k > 2:
            # Stated values: best case of announcing 1 is 1, worst case of any other action is 3/2.
            for c in first:
                others = [s for s in g.sigma(c.player) if s != "1"]
                taus = g.opponent_profiles(c.player)
                worst_other = min(min(g.u(c.player, s, t) for t in taus) for s in others)
                if (c.min, c.max, worst_other) != (Fraction(3, 2), Fraction(1), Fraction(3, 2)):
                    problems.append(f"k={k}: round-1 certificate {c.min} > {c.max}")
        elif any((c.min, c.max) != (Fraction(3, 2), Fraction(1)) for c in first):
            problems.append("k=2: round-1 certificate values")
    return CriterionResult(1, "ladder game rounds and survivors", not problems,
                           "; ".join(problems) or "k=2..7: k-1 rounds, only (k,k) survives, round 1 shows 3/2 > 1")


def check_translucent_pd() -> CriterionResult:
    problems = []
    m, coop = translucent_pd_structure(1, 5, Fraction(1, 4))
    stay = stay_payoff(m, coop, 1)
    dev = deviation_payoff(m, coop, 1, "S")
    if (stay, dev) != (0, Fraction(-1, 4)):
        problems.append(f"eps=1/4: stay {stay}, deviate {dev}")
    if not rat_holds(m, COUNTERFACTUAL, coop, 1):
        problems.append("eps=1/4: counterfactual RAT_1 fails")
    if rat_holds(m, PROBABILITY, coop, 1):
        problems.append("eps=1/4: probability-mode RAT_1 holds")
    m2, coop2 = translucent_pd_structure(1, 5, Fraction(1, 10))
    dev2 = deviation_payoff(m2, coop2, 1, "S")
    if dev2 != Fraction(1, 2):
        problems.append(f"eps=1/10: deviate {dev2}")
    if rat_holds(m2, COUNTERFACTUAL, coop2, 1):
        problems.append("eps=1/10: counterfactual RAT_1 holds")
    return CriterionResult(2, "translucent prisoner's dilemma", not problems,
                           "; ".join(problems) or "eps=1/4: 0 >= -1/4, opaque RAT fails; eps=1/10: 1/2 > 0")


def check_order_independence(n_games: int = 500, n_seq: int = 10, seed: int = DEFAULT_SEED) -> CriterionResult:
    failures = 0
    for idx, g in enumerate(game_corpus(n_games, seed)):
        final = dom.nsd_fixpoint(g).final
        for r in range(n_seq):
            seq = dom.random_terminating_sequence(g, seed=(seed * 1_000_003 + idx) * 100 + r)
            if seq[-1] != final or not dom.validate_deletion_sequence(g, seq):
                failures += 1
    return CriterionResult(3, "order independence", failures == 0,
                           f"{n_games} games x {n_seq} random sequences, {failures} failures")


def check_restricted_dominators(n_games: int = 500, seed: int = DEFAULT_SEED) -> CriterionResult:
    failures = sum(not dom.remark_3_5_check(g) for g in game_corpus(n_games, seed))
    return CriterionResult(4, "restricted dominators", failures == 0, f"{n_games} games, {failures} failures")


def _nsd_product(g: Game) -> set:
    return set(itertools.product(*dom.nsd_fixpoint(g).final))


def check_rationalizable_survivors(n_games: int = 300, seed: int = DEFAULT_SEED) -> CriterionResult:
    failures = sum(minimax_rationalizable_profiles(g) != _nsd_product(g) for g in game_corpus(n_games, seed))
    return CriterionResult(5, "rationalizable = surviving profiles", failures == 0,
                           f"{n_games} games, {failures} failures")


def check_canonical_witnesses(n_games: int = 300, seed: int = DEFAULT_SEED) -> CriterionResult:
    failures = total = 0
    for g in game_corpus(n_games, seed):
        witnesses = minimal_witnesses(g)
        for prof in sorted(_nsd_product(g)):
            total += 1
            z = witnesses.get(prof)
            if z is None or not verify_ccbr_witness(build_canonical_witness(g, z, prof)):
                failures += 1
    return CriterionResult(6, "canonical witnesses verify", failures == 0,
                           f"{total} surviving profiles over {n_games} games, {failures} failures")


def check_soundness(n_structures: int = 500, k_max: int = 4, seed: int = DEFAULT_SEED) -> CriterionResult:
    failures = 0
    for m in structure_corpus(n_structures, seed):
        nsd = dom.nsd_levels(m.game, k_max)
        sr = srat_sets(m, k_max)
        for i in m.game.players:
            for k in range(k_max + 1):
                failures += sum(m.s(w, i) not in nsd[k][i - 1] for w in sr[i][k])
    return CriterionResult(7, "strong k-level rationality implies k rounds of survival", failures == 0,
                           f"{n_structures} structures, k<={k_max}, {failures} failures")


def _all_tested(n_structures: int, seed: int) -> Iterator[tuple[str, CounterfactualStructure]]:
    yield from bundled_structures().items()
    for k, m in enumerate(structure_corpus(n_structures, seed)):
        yield f"random#{k}", m


def check_common_belief(n_structures: int = 500, seed: int = DEFAULT_SEED) -> CriterionResult:
    failures = []
    count = 0
    for name, m in _all_tested(n_structures, seed):
        count += 1
        mc = ModelChecker(m, COUNTERFACTUAL)
        rat = frozenset(m.states)
        for i in m.game.players:
            rat &= mc.sat(Srat(i, 1))  # SRAT^1_i is RAT_i
        lhs = cb_states(m, rat)
        k_max = len(m.states) + 1
        wr = wrat_sets(m, k_max)
        rhs = frozenset(m.states)
        for i in m.game.players:
            for k in range(k_max + 1):
                rhs &= wr[i][k]
        if lhs != rhs:
            failures.append(name)
    return CriterionResult(8, "common belief of rationality = all weak levels", not failures,
                           f"{count} structures, {len(failures)} failures {failures[:3]}")


def check_validity(n_structures: int = 500, depth: int = 2, seed: int = DEFAULT_SEED) -> CriterionResult:
    bad = []
    count = 0
    for name, m in _all_tested(n_structures, seed):
        count += 1
        report = validity_spotchecks(m, depth=depth)
        if not report:
            bad.append(f"{name}: {report.counterexamples[0]}")
    m, w0 = pd_naive_structure(1, 5)
    mc = ModelChecker(m, COUNTERFACTUAL)
    witness_ok = w0 in mc.sat(Srat(1, 1)) and w0 not in mc.sat(BStar(1, Srat(1, 1)))
    if not witness_ok:
        bad.append("pd_naive does not exhibit SRAT_1^1 & !B*_1 SRAT_1^1 at w0")
    return CriterionResult(9, "validity schemata", not bad,
                           f"{count} structures, {len(bad)} problems {bad[:2]}; pd_naive non-implication "
                           f"{'shown' if witness_ok else 'missing'}")


def structural_law_violations(m: CounterfactualStructure) -> list[str]:
    bad = []
    g = m.game
    for w in m.states:
        for i in g.players:
            pi = m.pr(i, w)
            for s in g.sigma(i):
                cf = counterfactual_belief(m, w, i, s)
                if sum(cf.values(), Fraction(0)) != 1:
                    bad.append(f"mass ({w},{i},{s})")
                if cf.support != frozenset(m.f(x, i, s) for x in pi.support):
                    bad.append(f"support law ({w},{i},{s})")
                if not cf.certain(m.playing(i, s)):
                    bad.append(f"switch knowledge ({w},{i},{s})")
                for x in m.states:
                    if m.pr(i, x) == pi and counterfactual_belief(m, x, i, s) != cf:
                        bad.append(f"belief determinism ({w},{x},{i},{s})")
            if not rat_equivalence_check(m, w, i):
                bad.append(f"rat equivalence ({w},{i})")
    return bad


def check_structural_laws(n_structures: int = 500, seed: int = DEFAULT_SEED) -> CriterionResult:
    bad = []
    count = 0
    for name, m in _all_tested(n_structures, seed):
        count += 1
        v = structural_law_violations(m)
        if v:
            bad.append(f"{name}: {v[0]}")
    return CriterionResult(10, "counterfactual belief laws", not bad, f"{count} structures, {len(bad)} failures {bad[:2]}")


def check_epsilon(n_structures: int = 500, n_product: int = 100, seed: int = DEFAULT_SEED) -> CriterionResult:
    problems = []
    eps = translucency_epsilon(translucent_pd_structure(1, 5, Fraction(1, 4))[0])
    if eps != Fraction(1, 4):
        problems.append(f"translucent_pd reports {eps}")
    unilateral = 0
    pool = list(_all_tested(n_structures, seed)) + [(f"product#{k}", m) for k, m in enumerate(product_corpus(n_product, seed))]
    for name, m in pool:
        if respects_unilateral_deviations(m):
            unilateral += 1
            e = translucency_epsilon(m)
            if e != 0:
                problems.append(f"{name}: {e}")
    return CriterionResult(11, "epsilon translucency", not problems,
                           f"translucent_pd eps={eps}; {unilateral} unilateral structures all 0"
                           if not problems else "; ".join(problems[:3]))


CHECKS: list[Callable[..., CriterionResult]] = [
    check_ladder,
    check_translucent_pd,
    check_order_independence,
    check_restricted_dominators,
    check_rationalizable_survivors,
    check_canonical_witnesses,
    check_soundness,
    check_common_belief,
    check_validity,
    check_structural_laws,
    check_epsilon,
]


RANDOMIZED = {
    check_order_independence, check_restricted_dominators, check_rationalizable_survivors, check_canonical_witnesses, check_soundness,
    check_common_belief, check_validity, check_structural_laws, check_epsilon,
}


def run_all(seed: int = DEFAULT_SEED) -> list[CriterionResult]:
    return [check(seed=seed) if check in RANDOMIZED else check() for check in CHECKS]
