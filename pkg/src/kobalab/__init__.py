"""Kobayashi-metric toolkit for the counterexample domain Omega and its sector family."""

from .kernels import BACKEND
from .errors import ConfigurationError, ConstructionRefused, DomainViolation, ToleranceNotMet

__version__ = "0.1.0"

__all__ = ["BACKEND", "ConfigurationError", "ConstructionRefused", "DomainViolation",
           "ToleranceNotMet", "__version__"]
