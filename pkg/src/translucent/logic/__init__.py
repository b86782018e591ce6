from .checker import (
    COUNTERFACTUAL,
    PROBABILITY,
    ModelChecker,
    ModeError,
    cb_states,
    ccbr_fixpoint,
    ccbr_states,
    rat_equivalence_check,
    rat_holds,
    satisfying_states,
    srat_sets,
    wrat_sets,
)
from .formula import B, CB, And, BStar, CBStar, Ccbr, Formula, Not, Play, Rat, RatAll, Srat, TrueF, Wrat
from .parser import FormulaSyntaxError, parse_formula
from .validity import validity_spotchecks

__all__ = [
    "COUNTERFACTUAL", "PROBABILITY", "ModelChecker", "ModeError", "cb_states", "ccbr_fixpoint",
    "ccbr_states", "rat_equivalence_check", "rat_holds", "satisfying_states", "srat_sets", "wrat_sets",
    "B", "CB", "And", "BStar", "CBStar", "Ccbr", "Formula", "Not", "Play", "Rat", "RatAll", "Srat",
    "TrueF", "Wrat", "FormulaSyntaxError", "parse_formula", "validity_spotchecks",
]
