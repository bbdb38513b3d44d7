# -*- coding: utf-8 -*-
"""
Periodic box geometry: GridSpec and its cached wavenumber tables.

Wavevectors are k = (2π/L)·n with integer n from numpy's FFT ordering, so the
Nyquist index n = -N/2 carries |k_i| = πN/L. Odd symbols (derivatives, Riesz
transforms, the projection) use a copy with the Nyquist entries zeroed; even
symbols (|k|^s, the heat multiplier) use the full table.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Tuple

import numpy as np

from utils.errors import DimensionError

log = logging.getLogger(__name__)

SUPPORTED_DIMENSIONS = (2, 3)


class _Tables(NamedTuple):
    n: Tuple[np.ndarray, ...]
    k: Tuple[np.ndarray, ...]
    k_odd: Tuple[np.ndarray, ...]
    k2: np.ndarray
    k2_odd: np.ndarray
    kmag: np.ndarray
    kmag_odd: np.ndarray
    dealias: np.ndarray
    x: Tuple[np.ndarray, ...]


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@lru_cache(maxsize=32)
def _spectral_tables(d: int, N: int, L: float) -> _Tables:
    """Builds the read-only tables for one (d, N, L); shared by all threads."""
    n1 = np.fft.fftfreq(N, 1.0 / N).round().astype(np.int64)
    k1 = (2.0 * np.pi / L) * n1
    k1_odd = k1.copy()
    k1_odd[N // 2] = 0.0
    x1 = np.arange(N) * (L / N)

    def along(axis: int, a: np.ndarray) -> np.ndarray:
        shape = [1] * d
        shape[axis] = N
        return _frozen(a.reshape(shape).copy())

    n = tuple(along(a, n1) for a in range(d))
    k = tuple(along(a, k1) for a in range(d))
    k_odd = tuple(along(a, k1_odd) for a in range(d))
    x = tuple(along(a, x1) for a in range(d))

    full = (N,) * d
    k2 = np.zeros(full)
    k2_odd = np.zeros(full)
    dealias = np.ones(full, dtype=bool)
    for a in range(d):
        k2 = k2 + k[a] ** 2
        k2_odd = k2_odd + k_odd[a] ** 2
        dealias = dealias & (3 * np.abs(n[a]) < N)

    return _Tables(
        n=n, k=k, k_odd=k_odd,
        k2=_frozen(k2), k2_odd=_frozen(k2_odd),
        kmag=_frozen(np.sqrt(k2)), kmag_odd=_frozen(np.sqrt(k2_odd)),
        dealias=_frozen(dealias), x=x,
    )


@dataclass(frozen=True)
class GridSpec:
    """A periodic box [0, L)^d sampled with N points per axis."""

    d: int
    N: int
    L: float

    def __post_init__(self):
        if self.d not in SUPPORTED_DIMENSIONS:
            raise DimensionError(f"dimension d={self.d} not supported; expected one of {SUPPORTED_DIMENSIONS}")
        if self.N < 8 or self.N & (self.N - 1):
            raise DimensionError(f"N={self.N} must be a power of two and at least 8")
        if not self.L > 0:
            raise DimensionError(f"box length L={self.L} must be positive")
        object.__setattr__(self, "L", float(self.L))

    # --- geometry ---

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.N,) * self.d

    @property
    def axes(self) -> Tuple[int, ...]:
        """The trailing spatial axes of any coefficient array on this grid."""
        return tuple(range(-self.d, 0))

    @property
    def spacing(self) -> float:
        return self.L / self.N

    @property
    def cell_volume(self) -> float:
        return self.spacing ** self.d

    @property
    def volume(self) -> float:
        return self.L ** self.d

    @property
    def k_min(self) -> float:
        return 2.0 * np.pi / self.L

    @property
    def k_max(self) -> float:
        return np.pi * self.N / self.L

    @property
    def validity_time(self) -> float:
        """(L/2π)², beyond which the box's spectral gap dominates the decay."""
        return (self.L / (2.0 * np.pi)) ** 2

    @property
    def resolve_time(self) -> float:
        """10·(L/N)², before which the truncated band is still active."""
        return 10.0 * self.spacing ** 2

    def refined(self, factor: int = 2) -> "GridSpec":
        return GridSpec(self.d, self.N * factor, self.L)

    # --- cached tables ---

    @property
    def _tables(self) -> _Tables:
        return _spectral_tables(self.d, self.N, self.L)

    @property
    def n(self) -> Tuple[np.ndarray, ...]:
        return self._tables.n

    @property
    def k(self) -> Tuple[np.ndarray, ...]:
        return self._tables.k

    @property
    def k_odd(self) -> Tuple[np.ndarray, ...]:
        return self._tables.k_odd

    @property
    def k2(self) -> np.ndarray:
        return self._tables.k2

    @property
    def k2_odd(self) -> np.ndarray:
        return self._tables.k2_odd

    @property
    def kmag(self) -> np.ndarray:
        return self._tables.kmag

    @property
    def kmag_odd(self) -> np.ndarray:
        return self._tables.kmag_odd

    @property
    def dealias(self) -> np.ndarray:
        return self._tables.dealias

    @property
    def x(self) -> Tuple[np.ndarray, ...]:
        return self._tables.x

    def check_shape(self, coeffs: np.ndarray, leading: Tuple[int, ...] = ()):
        expected = tuple(leading) + self.shape
        if coeffs.shape != expected:
            raise DimensionError(f"array shape {coeffs.shape} does not match expected {expected} for {self}")


def reflect(a: np.ndarray, d: int) -> np.ndarray:
    """Returns b with b[..., n] = a[..., -n mod N] over the last d axes."""
    axes = tuple(range(-d, 0))
    return np.roll(np.flip(a, axis=axes), shift=1, axis=axes)
