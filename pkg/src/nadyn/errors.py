"""Exception hierarchy for the nadyn toolkit.

``MalformedInput`` subclasses map to CLI exit code 2, ``BudgetExceeded``
to exit 3, ``UnknownExample`` to exit 4.  Everything else signals misuse
of the library API.
"""

from __future__ import annotations


class NadynError(Exception):
    """Base class for all toolkit errors."""


class MalformedInput(NadynError):
    """Input text/file could not be parsed into exact data."""


class MalformedRational(MalformedInput):
    pass


class MalformedInterval(MalformedInput):
    pass


class MalformedSystemFile(MalformedInput):
    """System description file rejected; message carries field context."""

    def __init__(self, message: str, *, path: str | None = None, field: str | None = None):
        self.path = path
        self.field = field
        self.message = message
        prefix = ""
        if path is not None:
            prefix += str(path)
        if field is not None:
            prefix += ("" if not prefix else ": ") + field
        super().__init__(f"{prefix}: {message}" if prefix else message)


class PieceGap(MalformedInput):
    """Pieces leave part of the domain uncovered."""


class PieceOverlap(MalformedInput):
    """Pieces cover part of the domain twice, or stick out of it."""


class NotSelfMap(MalformedInput):
    """Some piece maps outside the domain; carries the offending piece."""

    def __init__(self, message: str, piece=None, image=None):
        self.piece = piece
        self.image = image
        super().__init__(message)


class OutOfDomain(NadynError):
    pass


class BudgetExceeded(NadynError):
    """Interval-set part count exceeded the propagation budget.

    Raised hard: no truncated result is ever returned.
    """

    def __init__(self, step: int, parts: int, max_parts: int):
        self.step = step
        self.parts = parts
        self.max_parts = max_parts
        super().__init__(
            f"part budget exceeded at step {step}: {parts} parts > {max_parts} allowed"
        )


class HorizonExceeded(NadynError):
    pass


class NotExtractable(NadynError):
    """No valid breakpoint sequence exists within the horizon.

    This is an analysis verdict (the averages are not decaying at this
    horizon), not an internal failure; the CLI reports it with exit 0.
    """

    def __init__(self, message: str, *, threshold_index: int | None = None):
        self.threshold_index = threshold_index
        super().__init__(message)


class GridMismatch(NadynError):
    pass


class ScaleMismatch(NadynError):
    pass


class DegeneratePair(NadynError):
    pass


class NotInvariant(NadynError):
    """Invariant-set certificate check failed; carries the offending set."""

    def __init__(self, condition: str, offending, message: str):
        self.condition = condition
        self.offending = offending
        super().__init__(message)


class UnknownExample(NadynError):
    pass
