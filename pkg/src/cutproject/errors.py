"""Exception types raised across the package."""

from __future__ import annotations


class CutProjectError(Exception):
    """Base class; ``code`` is the machine-readable name used by the CLI."""

    @property
    def code(self) -> str:
        return type(self).__name__


class InvalidField(CutProjectError):
    pass


class InvalidDimensions(CutProjectError):
    pass


class InvalidScheme(CutProjectError):
    pass


class NotFullRank(CutProjectError):
    pass


class Lr1Violated(CutProjectError):
    pass


class InexactShift(CutProjectError):
    pass


class SingularShift(CutProjectError):
    pass


class NotAccepted(CutProjectError):
    pass


class PrecisionExhausted(CutProjectError):
    pass


class ComplementInvalid(CutProjectError):
    pass


class SingularParametrization(CutProjectError):
    pass


class BadParams(CutProjectError):
    pass
