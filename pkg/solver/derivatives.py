# -*- coding: utf-8 -*-
"""
Time derivatives of a solution snapshot from the PDE itself, and pressure recovery.

With ∂_t u = Δu - P∇·(u⊗u), Leibniz on the quadratic term gives
D_t^n u = Δ D_t^{n-1}u - P∇·(Σ_j C(n-1, j) D_t^j u ⊗ D_t^{n-1-j} u).
"""

import logging
from math import comb
from typing import List

import numpy as np

from spectral.fields import SpectralField, VectorField
from spectral.grid import GridSpec
from spectral.operators import _inverse_k2_odd, _nonlinear, _tensor_product, stacked_k_odd
from utils.errors import DerivativeOrderError

log = logging.getLogger(__name__)

MAX_DERIVATIVE_ORDER = 4


def _derivative_stack(grid: GridSpec, coeffs: np.ndarray, n: int) -> List[np.ndarray]:
    stack = [coeffs]
    for m in range(1, n + 1):
        nonlinear = sum(
            comb(m - 1, j) * _nonlinear(grid, stack[j], stack[m - 1 - j]) for j in range(m)
        )
        stack.append(-grid.k2 * stack[m - 1] - nonlinear)
    return stack


def time_derivatives(u: VectorField, n: int, max_order: int = MAX_DERIVATIVE_ORDER) -> List[VectorField]:
    """[u, u_t, ..., D_t^n u] for one snapshot."""
    if n < 0 or n > max_order:
        raise DerivativeOrderError(f"derivative order {n} outside [0, {max_order}]")
    return [VectorField(u.grid, c) for c in _derivative_stack(u.grid, u.coeffs, n)]


def time_derivative(traj, t: float, n: int, max_order: int = MAX_DERIVATIVE_ORDER) -> VectorField:
    """D_t^n u at the mesh point t of a trajectory."""
    if n < 1:
        raise DerivativeOrderError(f"time_derivative needs n >= 1, got {n}")
    return time_derivatives(traj.at(t), n, max_order)[n]


def derivative_coeffs(grid: GridSpec, coeffs: np.ndarray, n: int, max_order: int = MAX_DERIVATIVE_ORDER) -> np.ndarray:
    """Batched D_t^n over stacked snapshots of shape (..., d, N, ..., N)."""
    if n < 0 or n > max_order:
        raise DerivativeOrderError(f"derivative order {n} outside [0, {max_order}]")
    return _derivative_stack(grid, coeffs, n)[n]


def pressure_coeffs(grid: GridSpec, coeffs: np.ndarray) -> np.ndarray:
    """p̂ = -Σ_{j,l} k_j k_l (u_j u_l)^ / |k|², batched over leading axes."""
    d = grid.d
    k = stacked_k_odd(grid)
    kk = k[:, None] * k[None, :]
    w = _tensor_product(grid, coeffs, coeffs)
    return -np.sum(kk * w, axis=(-d - 2, -d - 1)) * _inverse_k2_odd(grid)


def pressure(u: VectorField) -> SpectralField:
    """Pressure with ∂_t u = Δu - ∇·(u⊗u) - ∇p and ∇·u = 0; mean fixed to 0."""
    return SpectralField(u.grid, pressure_coeffs(u.grid, u.coeffs))
