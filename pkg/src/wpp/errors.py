"""Error taxonomy.

User-input problems derive from UserInputError (CLI exit code 2); a verified
mathematical invariant failing at runtime raises LemmaViolated (CLI exit code
3). Everything else is an internal precondition violation and derives from
WppError directly.
"""

from __future__ import annotations


class WppError(Exception):
    """Base class for all package errors."""


class UserInputError(WppError):
    """Invalid input supplied by the caller; maps to CLI exit code 2."""


class NotPairwiseCoprime(UserInputError):
    pass


class DegenerateWeight(UserInputError):
    """A weight equal to 1 gives a plane with fewer than three singular points."""


class InvalidFraction(UserInputError):
    """p/q outside the domain of the requested continued-fraction operation."""


class NotCoprime(UserInputError):
    pass


class LemmaViolated(WppError):
    """A machine-checked structural fact failed; maps to CLI exit code 3."""


class RankMismatch(WppError):
    pass


class NotAdjacent(WppError):
    pass


class BadIndex(WppError):
    pass


class NotBlowdownable(WppError):
    pass


class MissingClasses(WppError):
    pass


class NotAtSignChange(WppError):
    pass


class ChopsOverlap(WppError):
    """A corner smoothing consumed more edge than its neighbours left available."""


class NotDelzantNeighborhood(WppError):
    pass


class NoMinusOneEdge(WppError):
    pass


class InvalidPolygon(WppError):
    pass


class NoSignChange(WppError):
    pass


class Unclassified(WppError):
    """Numerical profile outside the classified log Kodaira table."""
