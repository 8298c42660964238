"""errors.py
Exception hierarchy shared by every module.

Domain errors subclass the builtin they refine, so callers can catch
either `ConstructionError` or a plain `ValueError`.
"""
from __future__ import annotations

from typing import Any, Optional


class KMArcError(Exception):
    """Root of all library errors."""


class FieldContextError(KMArcError, ValueError):
    """Operands belong to different GF(2^h) contexts."""


class RankError(KMArcError, ValueError):
    """Dependent or inconsistent data in an F2-linear system."""


class DegenerateError(KMArcError, ValueError):
    """Equal points, or a frame that is not in general position."""


class NoNucleusError(KMArcError):
    """A t-nucleus was requested from a hyperoval (t = 2)."""


class NotAKMArc(KMArcError):
    """Census failed where a KM-arc is required."""

    def __init__(self, message: str, report: Any = None):
        super().__init__(message)
        self.report = report


class ConstructionError(KMArcError, ValueError):
    """A construction's precondition does not hold."""


class AdmissibilityError(ConstructionError):
    """An (a1, a2, a3, a4) tuple violates one of the q/16 invariants."""

    def __init__(self, invariant: str, detail: str = ""):
        msg = f"inadmissible tuple: {invariant}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
        self.invariant = invariant


class BudgetExceeded(KMArcError):
    """Frame search gave up; `lower_bound` is what was found so far."""

    def __init__(self, message: str, lower_bound: Optional[int] = None):
        super().__init__(message)
        self.lower_bound = lower_bound


class InternalError(KMArcError, RuntimeError):
    """Raised on conditions the mathematics rules out."""
