"""Solver and epistemic model checker for games with translucent players."""

from .game import Game, builtin_game, expected_utility, ladder, parse_game, serialize_game, translucent_pd, utility
from .prob import Distribution
from .structures import CounterfactualStructure, builtin_structure, parse_structure, serialize_structure

__version__ = "0.1.0"

__all__ = [
    "Game", "builtin_game", "expected_utility", "ladder", "parse_game", "serialize_game", "translucent_pd",
    "utility", "Distribution", "CounterfactualStructure", "builtin_structure", "parse_structure",
    "serialize_structure",
]
