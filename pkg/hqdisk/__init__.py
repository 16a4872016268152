"""
hqdisk: numerical toolkit for harmonic quasiconformal automorphisms of the unit disk.
"""

from hqdisk.errors import DomainError, EvaluationError, FieldError, HQDiskError, RadiusError

__version__ = "1.0.0"

__all__ = [
    "DomainError",
    "EvaluationError",
    "FieldError",
    "HQDiskError",
    "RadiusError",
]
