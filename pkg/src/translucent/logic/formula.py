"""Formula AST.

``Srat``, ``Wrat`` and ``Ccbr`` are macro nodes; the checker evaluates them
through the fixpoint routines rather than expanding them syntactically.
"""

from __future__ import annotations

from dataclasses import dataclass


class Formula:
    __slots__ = ()

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __invert__(self) -> "Formula":
        return Not(self)


@dataclass(frozen=True)
class TrueF(Formula):
    def __str__(self):
        return "true"


@dataclass(frozen=True)
class Play(Formula):
    player: int
    strategy: str

    def __str__(self):
        return f"play_{self.player}({self.strategy})"


@dataclass(frozen=True)
class Rat(Formula):
    player: int

    def __str__(self):
        return f"RAT_{self.player}"


@dataclass(frozen=True)
class RatAll(Formula):
    def __str__(self):
        return "RAT"


@dataclass(frozen=True)
class Not(Formula):
    sub: Formula

    def __str__(self):
        return f"!{_wrap(self.sub)}"


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula

    def __str__(self):
        right = f"({self.right})" if isinstance(self.right, And) else str(self.right)
        return f"{self.left} & {right}"


@dataclass(frozen=True)
class B(Formula):
    player: int
    sub: Formula

    def __str__(self):
        return f"B_{self.player} {_wrap(self.sub)}"


@dataclass(frozen=True)
class BStar(Formula):
    player: int
    sub: Formula

    def __str__(self):
        return f"B*_{self.player} {_wrap(self.sub)}"


@dataclass(frozen=True)
class CB(Formula):
    sub: Formula

    def __str__(self):
        return f"CB {_wrap(self.sub)}"


@dataclass(frozen=True)
class CBStar(Formula):
    sub: Formula

    def __str__(self):
        return f"CB* {_wrap(self.sub)}"


@dataclass(frozen=True)
class Srat(Formula):
    player: int
    k: int

    def __str__(self):
        return f"SRAT_{self.player}^{self.k}"


@dataclass(frozen=True)
class Wrat(Formula):
    player: int
    k: int

    def __str__(self):
        return f"WRAT_{self.player}^{self.k}"


@dataclass(frozen=True)
class Ccbr(Formula):
    def __str__(self):
        return "CCBR"


def _wrap(f: Formula) -> str:
    return f"({f})" if isinstance(f, And) else str(f)


def conj(parts) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``true``."""
    parts = list(parts)
    if not parts:
        return TrueF()
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def play_profile(profile) -> Formula:
    return conj(Play(i, s) for i, s in enumerate(profile, start=1))


COUNTERFACTUAL_ONLY = (BStar, CBStar, Srat, Ccbr)


def subformulas(f: Formula):
    yield f
    for name in ("sub", "left", "right"):
        child = getattr(f, name, None)
        if isinstance(child, Formula):
            yield from subformulas(child)


def _cache_hash(cls):
    # Formulas are used as memo keys; recomputing nested dataclass hashes dominates otherwise.
    raw = cls.__hash__

    def __hash__(self):
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = raw(self)
            object.__setattr__(self, "_hash", h)
            return h

    cls.__hash__ = __hash__


for _cls in (TrueF, Play, Rat, RatAll, Not, And, B, BStar, CB, CBStar, Srat, Wrat, Ccbr):
    _cache_hash(_cls)
