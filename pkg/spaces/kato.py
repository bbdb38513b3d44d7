# -*- coding: utf-8 -*-
"""
Trajectory norms: the Kato norm sup_{0<t<T} t^{α/2}‖u(t)‖_{Ḣ^s_q} and the
rescaled norm series t^{θ}‖D_t^n u(t)‖_{Ḣ^s_q} (or of the pressure) used by the
decay analysis.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from solver.derivatives import MAX_DERIVATIVE_ORDER, derivative_coeffs, pressure_coeffs
from spaces.norms import NormSpec, sobolev_of_coeffs
from spaces.trajectory import Trajectory
from utils.errors import DomainError

log = logging.getLogger(__name__)

VELOCITY = "velocity"
PRESSURE = "pressure"

# samples per batched FFT; bounds peak memory on fine grids
_CHUNK = 16


def _sobolev_per_sample(traj: Trajectory, spec: NormSpec, component: Optional[int] = None,
                        n: int = 0, kind: str = VELOCITY, max_order: int = MAX_DERIVATIVE_ORDER) -> np.ndarray:
    grid = traj.grid
    out = np.empty(len(traj))
    for start in range(0, len(traj), _CHUNK):
        block = traj.coeffs[start:start + _CHUNK]
        if kind == PRESSURE:
            out[start:start + _CHUNK] = sobolev_of_coeffs(grid, pressure_coeffs(grid, block), spec, rank=0)
            continue
        if n:
            block = derivative_coeffs(grid, block, n, max_order)
        if component is None:
            out[start:start + _CHUNK] = sobolev_of_coeffs(grid, block, spec, rank=1)
        else:
            out[start:start + _CHUNK] = sobolev_of_coeffs(grid, block[:, component], spec, rank=0)
    return out


def kato_norm(traj: Trajectory, spec: NormSpec, component: Optional[int] = None,
              horizon: Optional[float] = None) -> float:
    """
    max over samples t_i ∈ (0, T] of t_i^{α/2}·‖u(t_i)‖_{Ḣ^s_q}; component=None
    takes the root-sum-square over components. Samples at t = 0 count only when α = 0.
    """
    if len(traj) == 0:
        raise DomainError("kato_norm of an empty trajectory")
    if horizon is not None:
        traj = traj.window(0.0, horizon)
    alpha = spec.alpha(traj.grid.d)
    if alpha != 0:
        traj = traj.window(np.nextafter(0.0, 1.0), np.inf)
    if len(traj) == 0:
        return 0.0
    norms = _sobolev_per_sample(traj, spec, component)
    return float(np.max(traj.times ** (alpha / 2.0) * norms))


def series_exponent(spec: NormSpec, d: int, n: int = 0, kind: str = VELOCITY) -> float:
    """θ with t^θ‖·‖ bounded: (s+1+2n-d/q)/2 for velocity, (s+2-d/q)/2 for pressure."""
    if kind == PRESSURE:
        return (spec.alpha(d) + 1.0) / 2.0
    return spec.alpha(d) / 2.0 + n


@dataclass(frozen=True, eq=False)
class NormSeries:
    times: np.ndarray
    raw: np.ndarray
    rescaled: np.ndarray
    spec: NormSpec
    n: int
    kind: str
    exponent: float

    def rows(self) -> List[Tuple[float, float, float, float, float, int]]:
        return [
            (float(t), float(r), float(w), float(self.spec.s), float(self.spec.q), int(self.n))
            for t, r, w in zip(self.times, self.raw, self.rescaled)
        ]

    def window(self, t_lo: float, t_hi: float) -> "NormSeries":
        keep = (self.times >= t_lo) & (self.times <= t_hi)
        return NormSeries(self.times[keep], self.raw[keep], self.rescaled[keep], self.spec, self.n, self.kind, self.exponent)


def rescaled_norm_series(traj: Trajectory, spec: NormSpec, n: int = 0, kind: str = VELOCITY,
                         max_order: int = MAX_DERIVATIVE_ORDER) -> NormSeries:
    """
    (t, t^{θ}·‖D_t^n u(t)‖_{Ḣ^s_q}) over the samples with t > 0; kind="pressure"
    uses ‖p(t)‖_{Ḣ^s_q} with θ = (s+2-d/q)/2. Derivatives come from the PDE recursion.
    """
    if n < 0:
        raise DomainError(f"derivative order must be >= 0, got {n}")
    if kind not in (VELOCITY, PRESSURE):
        raise DomainError(f"unknown series kind '{kind}'")
    if kind == PRESSURE and n:
        raise DomainError("pressure series are defined for n = 0 only")
    positive = traj.window(np.nextafter(0.0, 1.0), np.inf)
    theta = series_exponent(spec, traj.grid.d, n, kind)
    raw = _sobolev_per_sample(positive, spec, None, n, kind, max_order)
    rescaled = positive.times ** theta * raw
    log.debug(f"Series {kind} s={spec.s} q={spec.q} n={n}: {len(positive)} samples, θ={theta}")
    return NormSeries(positive.times, raw, rescaled, spec, n, kind, theta)
