# -*- coding: utf-8 -*-
"""
Norm estimators on the periodic grid: L^q, homogeneous Sobolev Ḣ^s_q and the
heat-semigroup Besov functional for Ḃ^{s,∞}_q with s < 0.

L^q norms are uniform-grid Riemann sums. Vector fields use the root-sum-square
of their component norms.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from spectral.fields import _Field, inverse_samples
from spectral.grid import GridSpec
from spectral.operators import _power_symbol, fractional_laplacian, heat_factor
from utils.errors import DomainError, HypothesisError, ZeroModeError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class NormSpec:
    """Index pair (s, q) of Ḣ^s_q; α = s + 1 - d/q is the Kato time weight exponent."""

    s: float
    q: float

    def __post_init__(self):
        if not (1.0 < self.q < math.inf):
            raise DomainError(f"q={self.q} must lie in the open interval (1, ∞)")

    def alpha(self, d: int) -> float:
        return self.s + 1.0 - d / self.q


@dataclass(frozen=True)
class BesovSpec:
    """Index pair (s, q) of Ḃ^{s,∞}_q, s < 0, plus the geometric time grid of the sup."""

    s: float
    q: float
    t_min: float
    t_max: float
    ratio: float = 2.0 ** 0.25

    def __post_init__(self):
        if not self.s < 0:
            raise HypothesisError(f"heat characterization of Ḃ^{{s,∞}}_q needs s < 0, got s={self.s}")
        if not (1.0 < self.q < math.inf):
            raise DomainError(f"q={self.q} must lie in the open interval (1, ∞)")
        if not self.t_min > 0 or not self.t_max >= self.t_min:
            raise DomainError(f"invalid time range [{self.t_min}, {self.t_max}]")
        if not self.ratio > 1:
            raise DomainError(f"time-grid ratio must exceed 1, got {self.ratio}")

    @classmethod
    def for_grid(cls, grid: GridSpec, s: float, q: float) -> "BesovSpec":
        """Default grid [(L/N)², (L/2π)²] bracketing the resolved band."""
        return cls(s=s, q=q, t_min=grid.spacing ** 2, t_max=grid.validity_time)

    @property
    def t_grid(self) -> np.ndarray:
        count = int(math.floor(math.log(self.t_max / self.t_min) / math.log(self.ratio) + 1e-9)) + 1
        return self.t_min * self.ratio ** np.arange(count)


def lq_of_coeffs(grid: GridSpec, coeffs: np.ndarray, q: float) -> np.ndarray:
    """Scalar L^q norms of every field stacked along the leading axes of coeffs."""
    samples = np.abs(inverse_samples(coeffs, grid).real)
    if math.isinf(q):
        return np.max(samples, axis=grid.axes)
    return (np.sum(samples ** q, axis=grid.axes) * grid.cell_volume) ** (1.0 / q)


def _combine(norms: np.ndarray, rank: int) -> np.ndarray:
    for _ in range(rank):
        norms = np.sqrt(np.sum(norms ** 2, axis=-1))
    return norms


def lq_norm(f: _Field, q: float) -> float:
    """‖f‖_q by Riemann quadrature; q = inf gives the max over grid samples."""
    if q < 1:
        raise DomainError(f"L^q norm needs q >= 1, got {q}")
    return float(_combine(lq_of_coeffs(f.grid, f.coeffs, q), f.rank))


def sobolev_norm(f: _Field, spec: NormSpec) -> float:
    """‖f‖_{Ḣ^s_q} = ‖Λ^s f‖_q."""
    return lq_norm(fractional_laplacian(f, spec.s), spec.q)


def sobolev_of_coeffs(grid: GridSpec, coeffs: np.ndarray, spec: NormSpec, rank: int) -> np.ndarray:
    """Batched Ḣ^s_q norms; coeffs shape (..., (d,)*rank, N, ..., N). Mean modes are dropped."""
    coeffs = coeffs * _power_symbol(grid, float(spec.s)) if spec.s != 0 else _drop_mean(grid, coeffs)
    return _combine(lq_of_coeffs(grid, coeffs, spec.q), rank)


def _drop_mean(grid: GridSpec, coeffs: np.ndarray) -> np.ndarray:
    coeffs = coeffs.copy()
    coeffs[(...,) + (0,) * grid.d] = 0.0
    return coeffs


def besov_norm(f: _Field, spec: BesovSpec) -> float:
    """
    sup over spec.t_grid of t^{-s/2}‖e^{tΔ}f‖_q. An equivalent-norm estimate of
    ‖f‖_{Ḃ^{s,∞}_q}, not the Littlewood-Paley value.
    """
    if spec.s >= 0:
        raise HypothesisError(f"Besov heat characterization needs s < 0, got {spec.s}")
    if not f.is_mean_zero():
        raise ZeroModeError("besov_norm needs a mean-zero field")
    best = 0.0
    for t in spec.t_grid:
        value = t ** (-spec.s / 2.0) * float(_combine(lq_of_coeffs(f.grid, f.coeffs * heat_factor(f.grid, t), spec.q), f.rank))
        best = max(best, value)
    return best


def l2_from_coeffs(f: _Field) -> float:
    """Plancherel value L^{d/2}·(Σ|û|²)^{1/2}, the coefficient-space twin of lq_norm(f, 2)."""
    return float(math.sqrt(f.grid.volume * np.sum(np.abs(f.coeffs) ** 2)))


def inner_product(u: _Field, v: _Field) -> float:
    """Real L² inner product ∫ u·v computed from coefficients."""
    u.same_grid(v)
    return float(u.grid.volume * np.real(np.sum(u.coeffs * np.conj(v.coeffs))))
