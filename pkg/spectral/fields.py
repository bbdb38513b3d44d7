# -*- coding: utf-8 -*-
"""
Scalar, vector and tensor fields stored as Fourier coefficients on a GridSpec.

Convention: û(k) = N^{-d} Σ_x f(x) e^{-ik·x} and f(x) = Σ_k û(k) e^{ik·x}, so
a constant field c has û(0) = c and ‖f‖₂² = L^d Σ_k |û(k)|².
"""

import logging
from dataclasses import dataclass
from typing import Iterable, Tuple, TypeVar, Union

import numpy as np
import scipy.fft

from spectral.grid import GridSpec
from utils.errors import DimensionError, GridMismatchError

log = logging.getLogger(__name__)

F = TypeVar("F", bound="_Field")

FORWARD = "forward"
INVERSE = "inverse"


def forward_coeffs(samples: np.ndarray, grid: GridSpec) -> np.ndarray:
    return scipy.fft.fftn(samples, axes=grid.axes, norm="forward")


def inverse_samples(coeffs: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Complex physical samples; the imaginary part is round-off for valid fields."""
    return scipy.fft.ifftn(coeffs, axes=grid.axes, norm="forward")


@dataclass(frozen=True, eq=False)
class _Field:
    grid: GridSpec
    coeffs: np.ndarray

    rank = 0

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        self.grid.check_shape(coeffs, self._leading(self.grid))
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def _leading(cls, grid: GridSpec) -> Tuple[int, ...]:
        return (grid.d,) * cls.rank

    @classmethod
    def zeros(cls, grid: GridSpec):
        return cls(grid, np.zeros(cls._leading(grid) + grid.shape, dtype=np.complex128))

    @classmethod
    def from_physical(cls, grid: GridSpec, samples: np.ndarray):
        samples = np.asarray(samples)
        grid.check_shape(samples, cls._leading(grid))
        return cls(grid, forward_coeffs(samples, grid))

    def with_coeffs(self: F, coeffs: np.ndarray) -> F:
        return type(self)(self.grid, coeffs)

    def physical(self) -> np.ndarray:
        return inverse_samples(self.coeffs, self.grid).real

    def imag_residual(self) -> float:
        """Largest imaginary part of the physical samples (Hermitian-symmetry defect)."""
        return float(np.max(np.abs(inverse_samples(self.coeffs, self.grid).imag), initial=0.0))

    def mean_mode(self) -> np.ndarray:
        return self.coeffs[(...,) + (0,) * self.grid.d]

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs), initial=0.0))

    def is_mean_zero(self, rtol: float = 1e-12) -> bool:
        scale = max(self.max_abs(), 1.0)
        return bool(np.all(np.abs(self.mean_mode()) <= rtol * scale))

    def without_mean(self: F) -> F:
        coeffs = self.coeffs.copy()
        coeffs[(...,) + (0,) * self.grid.d] = 0.0
        return self.with_coeffs(coeffs)

    def same_grid(self, other: "_Field"):
        if self.grid != other.grid:
            raise GridMismatchError(f"grid mismatch: {self.grid} vs {other.grid}")

    # --- linear structure ---

    def __add__(self: F, other: F) -> F:
        self.same_grid(other)
        return self.with_coeffs(self.coeffs + other.coeffs)

    def __sub__(self: F, other: F) -> F:
        self.same_grid(other)
        return self.with_coeffs(self.coeffs - other.coeffs)

    def __neg__(self: F) -> F:
        return self.with_coeffs(-self.coeffs)

    def __mul__(self: F, scalar: float) -> F:
        return self.with_coeffs(self.coeffs * scalar)

    __rmul__ = __mul__

    def __truediv__(self: F, scalar: float) -> F:
        return self.with_coeffs(self.coeffs / scalar)


class SpectralField(_Field):
    """A real periodic scalar field."""

    rank = 0


class VectorField(_Field):
    """d scalar components on a shared grid, stacked along the leading axis."""

    rank = 1

    @property
    def components(self) -> Tuple[SpectralField, ...]:
        return tuple(SpectralField(self.grid, c) for c in self.coeffs)

    @classmethod
    def from_components(cls, components: Iterable[SpectralField]) -> "VectorField":
        components = list(components)
        grid = components[0].grid
        for c in components[1:]:
            components[0].same_grid(c)
        if len(components) != grid.d:
            raise DimensionError(f"expected {grid.d} components, got {len(components)}")
        return cls(grid, np.stack([c.coeffs for c in components]))

    def divergence_defect(self) -> float:
        """max_k |k·û(k)| / max_k |û(k)|, zero for a discretely divergence-free field."""
        scale = self.max_abs()
        if scale == 0.0:
            return 0.0
        div = sum(self.grid.k_odd[a] * self.coeffs[a] for a in range(self.grid.d))
        return float(np.max(np.abs(div)) / scale)


class TensorField(_Field):
    """d×d scalar entries F_ij on a shared grid."""

    rank = 2

    def entry(self, i: int, j: int) -> SpectralField:
        return SpectralField(self.grid, self.coeffs[i, j])


AnyField = Union[SpectralField, VectorField, TensorField]

_BY_RANK = {0: SpectralField, 1: VectorField, 2: TensorField}


def transform(field, direction: str, grid: GridSpec = None):
    """
    Moves between physical samples and Fourier coefficients.

    direction="forward" takes real samples (shape (d,)*rank + grid.shape, grid
    required) and returns the matching field type; direction="inverse" takes a
    field and returns its real physical samples.
    """
    if direction == FORWARD:
        if grid is None:
            raise DimensionError("forward transform needs the target grid")
        samples = np.asarray(field)
        extra = samples.ndim - grid.d
        if extra not in _BY_RANK or samples.shape[extra:] != grid.shape or any(n != grid.d for n in samples.shape[:extra]):
            raise DimensionError(f"samples of shape {samples.shape} do not fit {grid}")
        return _BY_RANK[extra].from_physical(grid, samples)
    if direction == INVERSE:
        if grid is not None and field.grid != grid:
            raise GridMismatchError(f"field grid {field.grid} differs from requested {grid}")
        return field.physical()
    raise ValueError(f"unknown transform direction '{direction}'")
