# -*- coding: utf-8 -*-
"""
Time-stamped velocity samples, stored as one stacked coefficient array of shape
(n_samples, d, N, ..., N).
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Tuple

import numpy as np

from spectral.fields import VectorField
from spectral.grid import GridSpec
from spectral.operators import heat_factor
from utils.errors import DomainError, GridMismatchError

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Trajectory:
    grid: GridSpec
    times: np.ndarray
    coeffs: np.ndarray
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=np.float64)
        coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        if times.ndim != 1:
            raise DomainError("trajectory times must be one-dimensional")
        if times.size and times[0] < 0:
            raise DomainError(f"trajectory starts at negative time {times[0]}")
        if times.size > 1 and np.any(np.diff(times) <= 0):
            raise DomainError("trajectory times must be strictly increasing")
        self.grid.check_shape(coeffs, (times.size, self.grid.d))
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_samples(cls, samples: List[Tuple[float, VectorField]], metadata: Dict[str, Any] = None) -> "Trajectory":
        grid = samples[0][1].grid
        for _, u in samples:
            if u.grid != grid:
                raise GridMismatchError("trajectory samples live on different grids")
        return cls(grid, np.array([t for t, _ in samples]), np.stack([u.coeffs for _, u in samples]), dict(metadata or {}))

    @classmethod
    def heat(cls, u0: VectorField, times: np.ndarray, metadata: Dict[str, Any] = None) -> "Trajectory":
        """The pure heat flow t ↦ e^{tΔ}u0 sampled at times."""
        times = np.asarray(times, dtype=np.float64)
        factors = heat_factor(u0.grid, times)
        return cls(u0.grid, times, factors[:, None] * u0.coeffs[None], dict(metadata or {}))

    def __len__(self) -> int:
        return int(self.times.size)

    @property
    def horizon(self) -> float:
        return float(self.times[-1])

    def sample(self, index: int) -> VectorField:
        return VectorField(self.grid, self.coeffs[index])

    def samples(self) -> Iterator[Tuple[float, VectorField]]:
        for i, t in enumerate(self.times):
            yield float(t), self.sample(i)

    def index_of(self, t: float) -> int:
        i = int(np.argmin(np.abs(self.times - t)))
        if not np.isclose(self.times[i], t, rtol=1e-12, atol=1e-14):
            raise DomainError(f"t={t} is not a mesh point of the trajectory")
        return i

    def at(self, t: float) -> VectorField:
        return self.sample(self.index_of(t))

    def window(self, t_lo: float, t_hi: float) -> "Trajectory":
        keep = (self.times >= t_lo) & (self.times <= t_hi)
        return Trajectory(self.grid, self.times[keep], self.coeffs[keep], dict(self.metadata))

    def with_coeffs(self, coeffs: np.ndarray) -> "Trajectory":
        return Trajectory(self.grid, self.times, coeffs, dict(self.metadata))

    def same_mesh(self, other: "Trajectory"):
        if self.grid != other.grid:
            raise GridMismatchError(f"trajectory grids differ: {self.grid} vs {other.grid}")
        if self.times.shape != other.times.shape or not np.allclose(self.times, other.times, rtol=1e-12, atol=0.0):
            raise GridMismatchError("trajectories are sampled on different time meshes")

    def __sub__(self, other: "Trajectory") -> "Trajectory":
        self.same_mesh(other)
        return self.with_coeffs(self.coeffs - other.coeffs)

    def __add__(self, other: "Trajectory") -> "Trajectory":
        self.same_mesh(other)
        return self.with_coeffs(self.coeffs + other.coeffs)

    def __mul__(self, scalar: float) -> "Trajectory":
        return self.with_coeffs(self.coeffs * scalar)

    __rmul__ = __mul__

    def divergence_defect(self) -> float:
        return max((self.sample(i).divergence_defect() for i in range(len(self))), default=0.0)
