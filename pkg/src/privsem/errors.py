"""Exception hierarchy for the privsem library.

Every error raised by the library derives from :class:`PrivsemError`, so
callers can catch one base class at an API boundary.  Subclasses are split
by the validation they enforce rather than by module, since several checks
(mass normalization, alphabet lookups) recur across modules.
"""

from __future__ import annotations

__all__ = [
    "PrivsemError",
    "NegativeMass",
    "MassNotOne",
    "ShapeMismatch",
    "MixedRepresentation",
    "TableTooLarge",
    "UnknownVariable",
    "OverlappingSubsets",
    "SourceMismatch",
    "NameCollision",
    "NonRationalInput",
    "BijectionMismatch",
    "EpsilonOutOfRange",
    "DegeneratePrivateData",
    "AlphaOutOfRange",
    "SymbolCollision",
    "NoValidSeparation",
    "InconsistentMechanism",
    "MissingNumericLabels",
    "MissingSplitVariables",
    "DegenerateComponent",
    "ComponentEpsilonOutOfRange",
    "GridTooLarge",
    "ParseError",
    "ValidationError",
]


class PrivsemError(Exception):
    """Base class for all library errors."""


class NegativeMass(PrivsemError):
    """A probability table contains a negative entry."""


class MassNotOne(PrivsemError):
    """A probability table does not sum to one; the message reports the deficit."""


class ShapeMismatch(PrivsemError):
    """A mass table's shape disagrees with the declared alphabets."""


class MixedRepresentation(PrivsemError):
    """Exact-rational and floating-point masses were mixed in one table."""


class TableTooLarge(PrivsemError):
    """A dense table would exceed the supported cell budget."""


class UnknownVariable(PrivsemError):
    """A referenced variable name is not part of the joint distribution."""


class OverlappingSubsets(PrivsemError):
    """Variable subsets passed to an information measure are not disjoint."""


class SourceMismatch(PrivsemError):
    """A deterministic map's source does not match the named joint variables."""


class NameCollision(PrivsemError):
    """Variable names collide when composing or extending distributions."""


class NonRationalInput(PrivsemError):
    """An exactness-requiring construction received a floating-point table."""


class BijectionMismatch(PrivsemError):
    """A separation's bijection does not cover the source alphabet."""


class EpsilonOutOfRange(PrivsemError):
    """The leakage budget lies outside the range required by the operation."""


class DegeneratePrivateData(PrivsemError):
    """The private variable is constant (zero entropy), so budgets are undefined."""


class AlphaOutOfRange(PrivsemError):
    """A randomized-response disclosure probability lies outside [0, 1]."""


class SymbolCollision(PrivsemError):
    """A fresh symbol collides with an existing alphabet symbol."""


class NoValidSeparation(PrivsemError):
    """No separation of the private alphabet satisfies the budget filter."""


class InconsistentMechanism(PrivsemError):
    """A mechanism's extended joint disagrees with its instance."""


class MissingNumericLabels(PrivsemError):
    """Noise extraction requires numeric labels that are absent."""


class MissingSplitVariables(PrivsemError):
    """A scenario comparison was asked for a split the joint does not declare."""


class DegenerateComponent(PrivsemError):
    """A multi-task operation needs a component with positive private entropy."""


class ComponentEpsilonOutOfRange(PrivsemError):
    """A per-component budget is infeasible for that component's mechanism."""


class GridTooLarge(PrivsemError):
    """An exhaustive channel grid would exceed the enumeration budget."""


class ParseError(PrivsemError):
    """An instance file could not be parsed."""


class ValidationError(PrivsemError):
    """A parsed instance failed validation; wraps the underlying library error."""
