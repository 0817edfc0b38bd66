"""Numerical verification of Eguchi-Hanson type metrics with constant scalar curvature."""

from .errors import (
    ConstructionError,
    DomainError,
    InadmissibleError,
    InsufficientSamplesError,
    NoRootError,
    NotConvergedError,
    VerificationError,
)
from .families import FamilySpec, construct

__all__ = [
    "ConstructionError",
    "DomainError",
    "FamilySpec",
    "InadmissibleError",
    "InsufficientSamplesError",
    "NoRootError",
    "NotConvergedError",
    "VerificationError",
    "construct",
]
