"""Exact finite probability distributions."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Any, Hashable, Iterable, Mapping

_RATIONAL = re.compile(r"^\s*-?\d+(\s*/\s*\d+)?\s*$")


def parse_rational(text: Any) -> Fraction:
    """Parse ``"num/den"`` or ``"int"`` (ints are accepted as well).

    Decimal notation is rejected so that files never carry binary floats.
    """
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if not isinstance(text, str) or not _RATIONAL.match(text):
        raise ValueError(f"not a rational: {text!r}")
    value = Fraction(text.replace(" ", ""))
    return value


def format_rational(q: Fraction) -> str:
    return str(Fraction(q))


class Distribution(Mapping):
    """Probability measure with finite support and exact rational masses.

    Zero-mass entries are dropped on construction, so two distributions are
    equal exactly when they agree on every point. Instances are hashable and
    can be used as dictionary keys (the structures module groups states by
    their belief this way).
    """

    __slots__ = ("_items", "_map", "_hash", "_support")

    def __init__(self, masses: Mapping[Hashable, Any] | Iterable[tuple[Hashable, Any]]):
        pairs = masses.items() if isinstance(masses, Mapping) else masses
        acc: dict[Hashable, Fraction] = {}
        for point, mass in pairs:
            q = Fraction(mass)
            if q < 0:
                raise ValueError(f"negative mass {q} on {point!r}")
            acc[point] = acc.get(point, Fraction(0)) + q
        total = sum(acc.values(), Fraction(0))
        if total != 1:
            raise ValueError(f"masses sum to {total}, not 1")
        self._map = {p: q for p, q in acc.items() if q != 0}
        self._items = tuple(sorted(self._map.items(), key=lambda kv: _sort_key(kv[0])))
        self._hash = hash(self._items)
        self._support = frozenset(self._map)

    @classmethod
    def _trusted(cls, acc: dict) -> "Distribution":
        # Masses already known to be nonnegative Fractions summing to 1.
        self = object.__new__(cls)
        self._map = {p: q for p, q in acc.items() if q != 0}
        self._items = tuple(sorted(self._map.items(), key=lambda kv: _sort_key(kv[0])))
        self._hash = hash(self._items)
        self._support = frozenset(self._map)
        return self

    @classmethod
    def point(cls, point: Hashable) -> "Distribution":
        return cls._trusted({point: Fraction(1)})

    @classmethod
    def uniform(cls, points: Iterable[Hashable]) -> "Distribution":
        pts = list(points)
        if not pts:
            raise ValueError("uniform distribution over an empty set")
        return cls((p, Fraction(1, len(pts))) for p in pts)

    def __getitem__(self, point: Hashable) -> Fraction:
        return self._map.get(point, Fraction(0))

    def __iter__(self):
        return (p for p, _ in self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __contains__(self, point: object) -> bool:
        return point in self._map

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Distribution):
            return self._hash == other._hash and self._items == other._items
        return NotImplemented

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{p!r}: {q}" for p, q in self._items)
        return f"Distribution({{{body}}})"

    @property
    def support(self) -> frozenset:
        return self._support

    def mass(self, event: Iterable[Hashable]) -> Fraction:
        """Probability of a set of points."""
        ev = event if isinstance(event, (set, frozenset)) else set(event)
        return sum((q for p, q in self._items if p in ev), Fraction(0))

    def certain(self, event: Iterable[Hashable]) -> bool:
        """True iff the event has probability exactly 1."""
        ev = event if isinstance(event, (set, frozenset)) else set(event)
        return self._support <= ev

    def pushforward(self, fn) -> "Distribution":
        acc: dict = {}
        for p, q in self._items:
            key = fn(p)
            acc[key] = acc.get(key, 0) + q
        return Distribution._trusted(acc)

    def expectation(self, fn) -> Fraction:
        total = Fraction(0)
        for p, q in self._items:
            total += q * fn(p)
        return total

    def total_variation(self, other: "Distribution") -> Fraction:
        """Half the L1 distance, i.e. the largest gap over any event."""
        points = set(self._map) | set(other._map)
        return sum((abs(self[p] - other[p]) for p in points), Fraction(0)) / 2

    def to_json(self) -> dict[str, str]:
        return {str(p): format_rational(q) for p, q in self._items}


def _sort_key(point: Hashable):
    # Total order over the point types in use; tuples may nest distributions.
    if isinstance(point, tuple):
        return ("tuple", tuple(_sort_key(x) for x in point))
    if isinstance(point, Distribution):
        return ("dist", tuple((_sort_key(x), q) for x, q in point._items))
    if isinstance(point, (str, int, Fraction)):
        return (type(point).__name__, point)
    return ("~", repr(point))
