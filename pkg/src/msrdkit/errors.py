"""Exception types raised across the package."""

from __future__ import annotations


class MsrdError(Exception):
    """Base class for all package errors."""


class ParameterError(MsrdError, ValueError):
    """Invalid construction parameters."""


class NonPrimeError(ParameterError):
    pass


class SizeCapExceeded(ParameterError):
    pass


class NotIrreducibleError(ParameterError):
    pass


class FieldDivisionByZero(MsrdError, ZeroDivisionError):
    pass


class MixedTowers(ParameterError):
    pass


class LengthMismatch(ParameterError):
    pass


class BadDimensions(ParameterError):
    pass


class DependentRows(ParameterError):
    pass


class BadT(ParameterError):
    pass


class BadK(ParameterError):
    pass


class TooManyBlocks(ParameterError):
    pass


class NormCollision(ParameterError):
    pass


class NotSubfieldDegree(ParameterError):
    pass


class DependentAlphas(ParameterError):
    pass


class ProjectiveCollision(ParameterError):
    pass


class BadTail(ParameterError):
    pass


class EnumerationCapExceeded(MsrdError):
    """Raised instead of sampling when an exhaustive search is too large."""

    def __init__(self, required: int, cap: int):
        super().__init__(f"enumeration needs {required} codewords, cap is {cap}")
        self.required = required
        self.cap = cap


class LatticePropertyViolated(MsrdError):
    """A family that must be a lattice failed a sum/intersection check."""
