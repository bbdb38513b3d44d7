# -*- coding: utf-8 -*-
"""
Exception hierarchy shared by every part of the toolkit.

Numerical preconditions raise subclasses of both NsDecayError and ValueError
so callers can catch either the toolkit family or the builtin.
"""

from typing import Any, Optional


class NsDecayError(Exception):
    """Base class for all toolkit errors."""


class DimensionError(NsDecayError, ValueError):
    """Array sizes do not match the grid they are attached to."""


class GridMismatchError(DimensionError):
    """Two fields or trajectories live on different grids or meshes."""


class ZeroModeError(NsDecayError, ValueError):
    """A homogeneous operator was applied to a field with a nonzero mean."""


class DomainError(NsDecayError, ValueError):
    """An argument lies outside the domain of an operation."""


class HypothesisError(NsDecayError, ValueError):
    """A hypothesis of an estimate (e.g. s < 0 for the heat Besov norm) is violated."""


class DivergentIntegralError(HypothesisError):
    """A singular integral was requested outside its convergence range."""


class DerivativeOrderError(NsDecayError, ValueError):
    """Requested time-derivative order exceeds the configured maximum."""


class ConfigError(NsDecayError, ValueError):
    """Invalid experiment configuration; carries the dotted field path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class SmallnessViolatedError(NsDecayError):
    """Picard iteration failed to contract; carries the diagnostics."""

    def __init__(self, message: str, estimate: Any):
        self.estimate = estimate
        super().__init__(message)


class BlowUpError(NsDecayError):
    """The integrator produced non-finite values."""

    def __init__(self, message: str, last_valid_time: Optional[float]):
        self.last_valid_time = last_valid_time
        super().__init__(f"{message} (last valid time: {last_valid_time})")
