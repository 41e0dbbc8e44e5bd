"""Fuzzy numbers through their level-set endpoint functions.

Submodules: ``regulated`` (piecewise-linear càglàd functions), ``fuzzy``,
``topology`` (level vs supremum convergence), ``domain``, ``bivariate``,
``fuzzymap`` (the embedding into pairs of bivariate functions) and
``fixtures`` (the worked examples and counterexamples).
"""

from . import bivariate, domain, fixtures, fuzzy, fuzzymap, regulated, topology
from .errors import LevelFuzzyError, ValidationError, Violation
from .fuzzy import FuzzyNumber, crisp, trapezoidal, triangular
from .regulated import Direction, PLJFunction

__version__ = "0.1.0"

__all__ = [
    "bivariate",
    "domain",
    "fixtures",
    "fuzzy",
    "fuzzymap",
    "regulated",
    "topology",
    "LevelFuzzyError",
    "ValidationError",
    "Violation",
    "FuzzyNumber",
    "crisp",
    "trapezoidal",
    "triangular",
    "Direction",
    "PLJFunction",
]
