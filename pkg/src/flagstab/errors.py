"""Exception types raised across the package."""


class FlagstabError(Exception):
    """Base class for all package errors."""


class IndexOutOfRange(FlagstabError):
    """A summand index lies outside 1..r."""


class NonPositiveValue(FlagstabError):
    """A structural constant or metric coordinate is not positive."""


class ConflictingTriple(FlagstabError):
    """The same unordered triple was given two different values."""


class UnknownSpace(FlagstabError):
    """Catalog lookup with an id that is not built in."""


class SearchBudgetExceeded(FlagstabError):
    """Symmetry search exceeded its node limit."""


class NotEinstein(FlagstabError):
    """A stability report was requested for a metric that is not Einstein
    to the configured tolerance."""


class NoConvergence(FlagstabError):
    """The Jacobi eigensolver did not converge within the sweep limit."""


class StepTooLarge(FlagstabError):
    """A finite-difference stencil left the positive coordinate cone."""


class DivergedFromBasin(FlagstabError):
    """Newton refinement failed to converge from the given start."""


class JacobianSingular(FlagstabError):
    """Newton hit a singular Jacobian (the offending start is discarded)."""


class UnsupportedN(FlagstabError):
    """Flag model requested outside the supported range 3 <= n <= 12."""


class FamilyUnavailable(FlagstabError):
    """A classic metric family does not exist for the given n."""


class ConstructionFailed(FlagstabError):
    """An explicit metric construction failed its own residual certificate;
    this signals an implementation bug, not bad input."""
