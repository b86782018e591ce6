"""Recursive-descent parser for the ASCII formula syntax.

    phi  ::= unary ("&" unary)*
    unary ::= "!" unary | "B_" INT unary | "B*_" INT unary
            | "CB" unary | "CB*" unary | atom
    atom ::= "true" | "RAT" | "RAT_" INT | "play_" INT "(" NAME ")"
           | "SRAT_" INT "^" INT | "WRAT_" INT "^" INT | "CCBR" | "(" phi ")"
"""

from __future__ import annotations

import re

from ..game import Game
from .formula import B, CB, And, BStar, CBStar, Ccbr, Formula, Not, Play, Rat, RatAll, Srat, TrueF, Wrat

_TOKENS = [
    ("SRAT", r"SRAT_(\d+)\^(\d+)"),
    ("WRAT", r"WRAT_(\d+)\^(\d+)"),
    ("RATI", r"RAT_(\d+)"),
    ("CCBR", r"CCBR\b"),
    ("RAT", r"RAT\b"),
    ("BSTAR", r"B\*_(\d+)"),
    ("B", r"B_(\d+)"),
    ("CBSTAR", r"CB\*"),
    ("CB", r"CB\b"),
    ("TRUE", r"true\b"),
    ("PLAY", r"play_(\d+)\(\s*([A-Za-z0-9_.\-+]+)\s*\)"),
    ("NOT", r"!"),
    ("AND", r"&"),
    ("LP", r"\("),
    ("RP", r"\)"),
]
_MASTER = re.compile("|".join(f"(?P<{name}>{pat})" for name, pat in _TOKENS))
_INNER = {name: re.compile(pat).groups for name, pat in _TOKENS}
_SPACE = re.compile(r"\s*")


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def _tokenize(text: str):
    pos = 0
    out = []
    while True:
        pos = _SPACE.match(text, pos).end()
        if pos >= len(text):
            out.append(("EOF", (), pos))
            return out
        m = _MASTER.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected input {text[pos:pos + 10]!r}", pos)
        kind = m.lastgroup
        start = _MASTER.groupindex[kind]
        args = m.groups()[start: start + _INNER[kind]]
        out.append((kind, args, pos))
        pos = m.end()


class _Parser:
    def __init__(self, text: str, game: Game | None):
        self.tokens = _tokenize(text)
        self.k = 0
        self.game = game

    def peek(self):
        return self.tokens[self.k]

    def take(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def player(self, raw: str, pos: int) -> int:
        i = int(raw)
        if self.game is not None and not 1 <= i <= self.game.n_players:
            raise FormulaSyntaxError(f"unknown player {i}", pos)
        if i < 1:
            raise FormulaSyntaxError(f"unknown player {i}", pos)
        return i

    def phi(self) -> Formula:
        left = self.unary()
        while self.peek()[0] == "AND":
            self.take()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        kind, args, pos = self.peek()
        if kind == "NOT":
            self.take()
            return Not(self.unary())
        if kind == "B":
            self.take()
            return B(self.player(args[0], pos), self.unary())
        if kind == "BSTAR":
            self.take()
            return BStar(self.player(args[0], pos), self.unary())
        if kind == "CB":
            self.take()
            return CB(self.unary())
        if kind == "CBSTAR":
            self.take()
            return CBStar(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        kind, args, pos = self.take()
        if kind == "TRUE":
            return TrueF()
        if kind == "RAT":
            return RatAll()
        if kind == "RATI":
            return Rat(self.player(args[0], pos))
        if kind == "CCBR":
            return Ccbr()
        if kind in ("SRAT", "WRAT"):
            cls = Srat if kind == "SRAT" else Wrat
            return cls(self.player(args[0], pos), int(args[1]))
        if kind == "PLAY":
            i = self.player(args[0], pos)
            name = args[1]
            if self.game is not None and name not in self.game.sigma(i):
                raise FormulaSyntaxError(f"unknown strategy {name!r} for player {i}", pos)
            return Play(i, name)
        if kind == "LP":
            inner = self.phi()
            k2, _, p2 = self.take()
            if k2 != "RP":
                raise FormulaSyntaxError("expected ')'", p2)
            return inner
        if kind == "EOF":
            raise FormulaSyntaxError("unexpected end of formula", pos)
        raise FormulaSyntaxError(f"unexpected token {kind}", pos)


def parse_formula(text: str, game: Game | None = None) -> Formula:
    """Parse a formula; with ``game`` given, player indices and strategy names are checked."""
    p = _Parser(text, game)
    f = p.phi()
    kind, _, pos = p.peek()
    if kind != "EOF":
        raise FormulaSyntaxError("trailing input", pos)
    return f
