"""Spot checks of schemata that should hold at every state of every structure."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..structures import CounterfactualStructure
from .checker import believes, cf_believes, default_k_max, rat_set, srat_sets, COUNTERFACTUAL
from .formula import B, BStar, Formula, Not, Play, Rat, TrueF


@dataclass
class SpotcheckReport:
    checked: int = 0
    counterexamples: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def __bool__(self) -> bool:
        return self.ok


def schema_bodies(m: CounterfactualStructure, depth: int = 2) -> dict[frozenset, Formula]:
    """Distinct truth sets of atoms and their unary wrappings up to ``depth``.

    Wrappings are negation, belief and counterfactual belief for every player.
    Each truth set is keyed to the first formula found to produce it; the
    schemata below depend on a body only through its truth set.
    """
    g = m.game
    omega = frozenset(m.states)
    atoms: list[tuple[Formula, frozenset]] = [(TrueF(), omega)]
    atoms += [(Play(i, s), m.playing(i, s)) for i in g.players for s in g.sigma(i)]
    atoms += [(Rat(i), rat_set(m, COUNTERFACTUAL, i)) for i in g.players]
    seen: dict[frozenset, Formula] = {}
    layer = []
    for phi, ev in atoms:
        if ev not in seen:
            seen[ev] = phi
            layer.append((phi, ev))
    for _ in range(depth):
        nxt = []
        for phi, ev in layer:
            cands = [(Not(phi), omega - ev)]
            for j in g.players:
                cands.append((B(j, phi), believes(m, j, ev)))
                cands.append((BStar(j, phi), cf_believes(m, j, ev)))
            for psi, e2 in cands:
                if e2 not in seen:
                    seen[e2] = psi
                    nxt.append((psi, e2))
        layer = nxt
    return seen


def validity_spotchecks(m: CounterfactualStructure, depth: int = 2, k_max: int | None = None) -> SpotcheckReport:
    """Evaluate ``B*_i phi -> B_i B*_i phi`` and ``SRAT_i^(k+1) -> SRAT_i^k`` at every state."""
    report = SpotcheckReport()
    for ev, phi in schema_bodies(m, depth).items():
        for i in m.game.players:
            lhs = cf_believes(m, i, ev)
            rhs = believes(m, i, lhs)
            report.checked += 1
            for w in sorted(lhs - rhs):
                report.counterexamples.append((f"B*_{i} {phi} -> B_{i} B*_{i} {phi}", w))
    k_max = default_k_max(m) if k_max is None else k_max
    levels = srat_sets(m, k_max)
    for i in m.game.players:
        for k in range(k_max):
            report.checked += 1
            for w in sorted(levels[i][k + 1] - levels[i][k]):
                report.counterexamples.append((f"SRAT_{i}^{k + 1} -> SRAT_{i}^{k}", w))
    return report
