"""
Exception hierarchy for hqdisk.

Precondition failures are ``ValueError`` subclasses so callers that already
guard numeric input with ``except ValueError`` keep working.
"""

from typing import Optional


class HQDiskError(Exception):
    """Base class for every error raised by hqdisk"""


class DomainError(HQDiskError, ValueError):
    """An argument lies outside the domain of the operation"""


class RadiusError(DomainError):
    """Evaluation was requested outside the certified disk |z| <= r_max"""

    def __init__(self, radius: float, r_max: float, message: Optional[str] = None):
        self.radius = radius
        self.r_max = r_max
        super().__init__(message or f"|z| = {radius:.12g} exceeds r_max = {r_max:.12g}")


class EvaluationError(HQDiskError, ArithmeticError):
    """A sampled function produced a non-finite value"""

    def __init__(self, angle: float, message: Optional[str] = None):
        self.angle = angle
        super().__init__(message or f"non-finite sample at t = {angle!r}")


class FieldError(HQDiskError):
    """A dilatation grid carried no usable point"""
