#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Exceptions and warnings raised across the stablestein package"""

__all__ = [
    "StableSteinError",
    "NonConvergence",
    "NonIntegrable",
    "TailDivergence",
    "WrongType",
    "OutOfScope",
    "ConfigError",
    "AliasWarning",
    "SurrogateWarning",
    "TruncationWarning",
]


class StableSteinError(Exception):
    """Base class for all stablestein errors"""


class NonConvergence(StableSteinError, ArithmeticError):
    """Adaptive quadrature or time integration exhausted its budget"""


class NonIntegrable(StableSteinError, ValueError):
    """Declared endpoint singularity exponent is not integrable (s >= 1)"""


class TailDivergence(StableSteinError, ArithmeticError):
    """Lévy tail integral diverges for the supplied test function"""


class WrongType(StableSteinError, TypeError):
    """Lévy measure classification does not match the requested operator"""


class OutOfScope(StableSteinError, ValueError):
    """Request falls outside what the method supports"""


class ConfigError(StableSteinError, ValueError):
    """Experiment configuration could not be parsed or validated"""


class AliasWarning(UserWarning):
    """Fourier inversion grid too narrow or too coarse for the cf"""


class SurrogateWarning(UserWarning):
    """An approximate surrogate replaced an exact computation"""


class TruncationWarning(UserWarning):
    """A tail truncation bound above tolerance had to be accepted"""
