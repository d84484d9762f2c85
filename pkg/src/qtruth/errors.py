"""Exception hierarchy shared by every module."""

from __future__ import annotations


class QTruthError(Exception):
    """Base class for domain errors raised by qtruth."""


class DimensionMismatch(QTruthError):
    pass


class NotHermitian(QTruthError):
    pass


class InvalidMatrix(QTruthError):
    """Non-square, empty or non-finite matrix input."""


class InvalidDecomposition(QTruthError):
    pass


class SpaceMismatch(QTruthError):
    pass


class PointNotInSpace(QTruthError):
    pass


class NonpositiveThreshold(QTruthError):
    pass


class MaskLengthMismatch(QTruthError):
    pass


class NotInAlgebra(QTruthError):
    """A property cuts a cell, so the selected truth functional cannot value it."""


class NoncommutingProjector(QTruthError):
    pass


class NoncommutingFamily(QTruthError):
    def __init__(self, pair: tuple[int, int], message: str | None = None):
        self.pair = pair
        super().__init__(message or f"observables {pair[0]} and {pair[1]} do not commute")


class TooLarge(QTruthError):
    pass


class ConstructionFailure(QTruthError):
    pass


class InvalidInput(QTruthError):
    """Malformed JSON payload or file."""
