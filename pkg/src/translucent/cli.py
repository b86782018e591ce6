"""Command-line toolbox.

Exit codes: 0 = holds / pass, 1 = does not hold / fail, 2 = invalid input.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from . import domination as dom
from . import harness
from .game import (
    BUILTIN_GAMES,
    Game,
    builtin_game,
    family_to_json,
    parse_game,
    random_game,
    serialize_game,
)
from .logic import COUNTERFACTUAL, PROBABILITY, ModelChecker, parse_formula
from .minimax_rat import minimal_witnesses
from .prob import format_rational, parse_rational
from .structures import (
    BUILTIN_STRUCTURES,
    CounterfactualStructure,
    builtin_structure,
    parse_structure,
    random_appropriate_structure,
    respects_unilateral_deviations,
    structure_to_json,
    translucency_epsilon,
    validate_appropriate,
    validate_strongly_appropriate,
)
from .witness import build_canonical_witness, verify_ccbr_witness


class UsageError(Exception):
    pass


@dataclass
class CommandResult:
    exit_code: int
    report: str
    payload: dict | None = None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="translucent", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="iterated deletion of minimax-dominated strategies")
    p.add_argument("--game", required=True, help="game file")
    p.add_argument("--rationalizable", action="store_true", help="also search witness sets for every profile")
    p.add_argument("--strict-baseline", action="store_true", help="also run classical strict-dominance deletion")
    p.add_argument("--remark35", action="store_true", help="compare with dominators restricted to survivors")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("mc", help="model-check a formula")
    p.add_argument("--structure", required=True)
    p.add_argument("--mode", choices=(COUNTERFACTUAL, PROBABILITY), default=COUNTERFACTUAL)
    p.add_argument("--formula", required=True)
    p.add_argument("--state", help="state to report on (default: the file's designated state, if any)")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("validate", help="structural checks on a counterfactual structure")
    p.add_argument("--structure", required=True)
    p.add_argument("--appropriate", action="store_true")
    p.add_argument("--strong", action="store_true", help="strong appropriateness")
    p.add_argument("--unilateral", action="store_true", help="respects unilateral deviations")
    p.add_argument("--epsilon", action="store_true", help="report the translucency epsilon")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("witness", help="build and verify a canonical CCBR witness structure")
    p.add_argument("--game", required=True)
    p.add_argument("--profile", required=True, help='comma-separated strategies, e.g. "3,3"')
    p.add_argument("--out", help="write the structure file here")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("gen", help="write built-in or random games and structures")
    p.add_argument("kind", choices=("game", "structure", "random-game", "random-structure"))
    p.add_argument("name", nargs="?", help=f"games: {sorted(BUILTIN_GAMES)}; structures: {sorted(BUILTIN_STRUCTURES)}")
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    p.add_argument("--seed", type=int, help="required for random kinds")
    p.add_argument("--states", type=int, default=4, help="state count for random-structure")
    p.add_argument("--out")

    p = sub.add_parser("verify-paper", help="run every acceptance check and print a pass/fail table")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--json", action="store_true")
    return parser


# -- helpers -----------------------------------------------------------------


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_game(path: str) -> Game:
    return parse_game(_read(path))


def _load_structure(path: str) -> tuple[CounterfactualStructure, str | None]:
    text = _read(path)
    m = parse_structure(text, base_dir=Path(path).parent)
    designated = json.loads(text).get("designated")
    return m, designated


def _fam(family) -> str:
    return " x ".join("{" + ",".join(ss) + "}" for ss in family)


def _params(pairs: list[str]) -> dict[str, Any]:
    out = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep:
            raise UsageError(f"--param expects KEY=VALUE, got {pair!r}")
        q = parse_rational(value)
        out[key] = int(q) if key == "k" and q.denominator == 1 else q
    return out


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


# -- subcommands ---------------------------------------------------------------


def cmd_solve(args) -> CommandResult:
    g = _load_game(args.game)
    trace = dom.nsd_fixpoint(g)
    payload: dict[str, Any] = {"trace": trace.to_json(), "n_rounds": trace.n_rounds, "survivors": family_to_json(trace.final)}
    lines = [f"round {k}: {_fam(f)}" for k, f in enumerate(trace.rounds)]
    for c in trace.certificates:
        lines.append(
            f"  round {c.round}: player {c.player} deletes {c.deleted} (dominator {c.dominator}: "
            f"min {format_rational(c.min)} > max {format_rational(c.max)})"
        )
    lines.append(f"survivors after {trace.n_rounds} rounds: {_fam(trace.final)}")
    code = 0
    if args.strict_baseline:
        strict = dom.iterated_strict_dominance(g)
        payload["strict_baseline"] = strict.to_json()
        lines.append(f"strict-dominance survivors after {strict.n_rounds} rounds: {_fam(strict.final)}")
    if args.remark35:
        same = dom.remark_3_5_check(g)
        payload["remark35"] = same
        lines.append(f"restricted dominators give the same rounds: {'yes' if same else 'NO'}")
        code = max(code, 0 if same else 1)
    if args.rationalizable:
        witnesses = minimal_witnesses(g)
        profiles = sorted(witnesses, key=lambda p: tuple(g.position(i + 1, s) for i, s in enumerate(p)))
        agree = set(profiles) == set(itertools.product(*trace.final))
        payload["rationalizable"] = [
            {"profile": list(p), "witness": family_to_json(witnesses[p])} for p in profiles
        ]
        payload["matches_survivors"] = agree
        lines.append(f"minimax rationalizable profiles ({len(profiles)}):")
        lines += [f"  ({','.join(p)})  witness {_fam(witnesses[p])}" for p in profiles]
        lines.append(f"equal to surviving profiles: {'yes' if agree else 'NO'}")
        code = max(code, 0 if agree else 1)
    return CommandResult(code, "\n".join(lines), payload)


def cmd_mc(args) -> CommandResult:
    m, designated = _load_structure(args.structure)
    formula = parse_formula(args.formula, m.game)
    sat = ModelChecker(m, args.mode).sat(formula)
    ordered = [w for w in sorted(m.states) if w in sat]
    payload: dict[str, Any] = {"formula": str(formula), "mode": args.mode, "states": ordered}
    if args.mode == COUNTERFACTUAL:
        payload["note"] = "everybody-counterfactually-believes is read as the conjunction of B*_i"
    state = args.state or designated
    if state is None:
        return CommandResult(0, f"[[{formula}]] = {{{', '.join(ordered)}}}", payload)
    if state not in m.states:
        raise UsageError(f"unknown state {state!r}")
    holds = state in sat
    payload.update(state=state, holds=holds)
    report = f"[[{formula}]] = {{{', '.join(ordered)}}}\n{state}: {'holds' if holds else 'does not hold'}"
    return CommandResult(0 if holds else 1, report, payload)


def cmd_validate(args) -> CommandResult:
    m, _ = _load_structure(args.structure)
    everything = not (args.appropriate or args.strong or args.unilateral or args.epsilon)
    lines, payload, ok = [], {}, True
    if everything or args.appropriate:
        v = validate_appropriate(m)
        payload["appropriate"] = {"ok": v.ok, "violations": v.violations}
        lines.append(f"appropriate: {'yes' if v else 'no'}")
        lines += [f"  {x}" for x in v.violations]
        ok &= v.ok
    if everything or args.strong:
        v = validate_strongly_appropriate(m)
        payload["strongly_appropriate"] = {"ok": v.ok, "violations": v.violations}
        lines.append(f"strongly appropriate: {'yes' if v else 'no'}")
        lines += [f"  {x}" for x in v.violations]
        ok &= v.ok
    if everything or args.unilateral:
        u = respects_unilateral_deviations(m)
        payload["unilateral"] = u
        lines.append(f"respects unilateral deviations: {'yes' if u else 'no'}")
        ok &= u
    if everything or args.epsilon:
        eps = translucency_epsilon(m)
        payload["epsilon"] = format_rational(eps)
        # --epsilon on its own prints the bare value for scripting
        lines.append(format_rational(eps) if not lines and not everything else f"epsilon: {eps}")
    return CommandResult(0 if ok else 1, "\n".join(lines), payload)


def cmd_witness(args) -> CommandResult:
    g = _load_game(args.game)
    profile = tuple(s.strip() for s in args.profile.split(","))
    g.check_profile(profile)
    z = minimal_witnesses(g).get(profile)
    if z is None:
        return CommandResult(1, f"({args.profile}) is not minimax rationalizable", {"profile": list(profile), "witness": None})
    w = build_canonical_witness(g, z, profile)
    report = verify_ccbr_witness(w)
    data = structure_to_json(w.structure)
    data["designated"] = w.designated
    if args.out:
        Path(args.out).write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
    lines = [f"witness sets: {_fam(z)}", f"states: {len(w.structure.states)}"] + report.lines()
    lines += [f"  {v}" for v in report.violations]
    payload = {
        "profile": list(profile),
        "witness": family_to_json(z),
        "states": len(w.structure.states),
        "passed": report.passed,
        "fixpoint_level": report.fixpoint_level,
    }
    return CommandResult(0 if report.passed else 1, "\n".join(lines), payload)


def cmd_gen(args) -> CommandResult:
    params = _params(args.param)
    if args.kind == "game":
        text = serialize_game(builtin_game(args.name or "", **params))
    elif args.kind == "structure":
        m, designated = builtin_structure(args.name or "", **params)
        data = structure_to_json(m)
        data["designated"] = designated
        text = json.dumps(data, indent=2) + "\n"
    else:
        if args.seed is None:
            raise UsageError(f"gen {args.kind} requires --seed")
        g = random_game(args.seed)
        if args.kind == "random-game":
            text = serialize_game(g)
        else:
            text = json.dumps(structure_to_json(random_appropriate_structure(g, args.seed, args.states)), indent=2) + "\n"
    _write(text, args.out)
    return CommandResult(0, "" if args.out is None else f"wrote {args.out}", None)


def cmd_verify(args) -> CommandResult:
    results = harness.run_all(seed=args.seed)
    ok = all(r.passed for r in results)
    lines = [r.line() for r in results]
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} criteria pass")
    payload = {
        "seed": args.seed,
        "criteria": [{"number": r.number, "name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
        "passed": ok,
    }
    return CommandResult(0 if ok else 1, "\n".join(lines), payload)


COMMANDS = {
    "solve": cmd_solve,
    "mc": cmd_mc,
    "validate": cmd_validate,
    "witness": cmd_witness,
    "gen": cmd_gen,
    "verify-paper": cmd_verify,
}


def run(argv: Sequence[str]) -> CommandResult:
    try:
        args = build_parser().parse_args(list(argv))
        result = COMMANDS[args.command](args)
    except (UsageError, ValueError) as exc:
        return CommandResult(2, f"error: {exc}", {"error": str(exc)})
    if getattr(args, "json", False):
        result.report = json.dumps(result.payload, indent=2, sort_keys=True)
    return result


def main(argv: Sequence[str] | None = None) -> int:
    result = run(sys.argv[1:] if argv is None else argv)
    if result.report:
        stream = sys.stderr if result.exit_code == 2 else sys.stdout
        print(result.report, file=stream)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
