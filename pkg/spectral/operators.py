# -*- coding: utf-8 -*-
"""
Fourier-multiplier calculus on periodic fields: fractional Laplacian, Riesz
transforms, Leray projection, heat semigroup, derivatives and the dealiased
quadratic nonlinearity P∇·(u⊗v).

Every symbol is defined as 0 at k = 0. The public functions take fields; the
underscored kernels take raw coefficient arrays with any number of leading
batch axes so the solver can push whole trajectories through one FFT call.
"""

import logging
from functools import lru_cache
from typing import TypeVar

import numpy as np

from spectral.fields import (
    SpectralField, TensorField, VectorField, _Field, forward_coeffs, inverse_samples,
)
from spectral.grid import GridSpec
from utils.errors import DomainError, ZeroModeError

log = logging.getLogger(__name__)

F = TypeVar("F", bound=_Field)


def _require_mean_zero(field: _Field, operation: str):
    if not field.is_mean_zero():
        raise ZeroModeError(
            f"{operation} needs a mean-zero field; |û(0)| = {np.max(np.abs(field.mean_mode())):.3e}"
        )


@lru_cache(maxsize=32)
def stacked_k_odd(grid: GridSpec) -> np.ndarray:
    """k̃ as one (d, N, ..., N) array."""
    k = np.stack(np.broadcast_arrays(*grid.k_odd)).astype(np.float64)
    k.flags.writeable = False
    return k


@lru_cache(maxsize=32)
def _inverse_k2_odd(grid: GridSpec) -> np.ndarray:
    k2 = grid.k2_odd
    inv = np.divide(1.0, k2, out=np.zeros_like(k2), where=k2 > 0)
    inv.flags.writeable = False
    return inv


@lru_cache(maxsize=128)
def _power_symbol(grid: GridSpec, s: float) -> np.ndarray:
    k = grid.kmag
    sym = np.zeros_like(k)
    np.power(k, s, out=sym, where=k > 0)
    sym.flags.writeable = False
    return sym


def heat_factor(grid: GridSpec, t) -> np.ndarray:
    """e^{-t|k|²}; a 1-D array of times gives a stacked (len(t), N, ..., N) array."""
    t = np.asarray(t, dtype=np.float64)
    if np.any(t < 0):
        raise DomainError(f"heat semigroup needs t >= 0, got {t.min()}")
    return np.exp(-np.multiply.outer(t, grid.k2))


# --- raw kernels ---

def _project(grid: GridSpec, coeffs: np.ndarray) -> np.ndarray:
    d = grid.d
    k = stacked_k_odd(grid)
    div = np.sum(k * coeffs, axis=-(d + 1))
    return coeffs - k * np.expand_dims(div * _inverse_k2_odd(grid), -(d + 1))


def _divergence_of_tensor(grid: GridSpec, coeffs: np.ndarray) -> np.ndarray:
    # (∇·F)_i = Σ_j ∂_j F_ij
    return 1j * np.sum(stacked_k_odd(grid) * coeffs, axis=-(grid.d + 1))


def _tensor_product(grid: GridSpec, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    d = grid.d
    mask = grid.dealias
    up = inverse_samples(u * mask, grid).real
    vp = up if v is u else inverse_samples(v * mask, grid).real
    prod = np.expand_dims(up, -(d + 1)) * np.expand_dims(vp, -(d + 2))
    return forward_coeffs(prod, grid) * mask


def _nonlinear(grid: GridSpec, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return _project(grid, _divergence_of_tensor(grid, _tensor_product(grid, u, v)))


# --- public operators ---

def fractional_laplacian(f: F, s: float) -> F:
    """Λ^s f with symbol |k|^s (0 at k = 0)."""
    if s < 0:
        _require_mean_zero(f, f"fractional_laplacian(s={s})")
    if s == 0:
        return f.without_mean()
    return f.with_coeffs(f.coeffs * _power_symbol(f.grid, float(s)))


def riesz_transform(f: SpectralField, j: int) -> SpectralField:
    """R_j f with symbol i k_j/|k|; j is a 0-based axis index."""
    _require_mean_zero(f, "riesz_transform")
    grid = f.grid
    if not 0 <= j < grid.d:
        raise DomainError(f"axis {j} out of range for d={grid.d}")
    k = grid.kmag_odd
    sym = np.divide(1j * grid.k_odd[j], k, out=np.zeros(grid.shape, dtype=np.complex128), where=k > 0)
    return f.with_coeffs(f.coeffs * sym)


def leray_project(v: VectorField) -> VectorField:
    """Helmholtz-Leray projection (Pv)_j = v_j + Σ_l R_j R_l v_l."""
    _require_mean_zero(v, "leray_project")
    return v.with_coeffs(_project(v.grid, v.coeffs))


def heat_semigroup(f: F, t: float) -> F:
    """e^{tΔ} f with the exact multiplier e^{-t|k|²}."""
    return f.with_coeffs(f.coeffs * heat_factor(f.grid, t))


def laplacian(f: F) -> F:
    return f.with_coeffs(-f.coeffs * f.grid.k2)


def gradient(f: SpectralField) -> VectorField:
    return VectorField(f.grid, 1j * stacked_k_odd(f.grid) * f.coeffs)


def divergence(field):
    """Divergence of a vector field (scalar) or of a tensor field row-wise (vector)."""
    grid = field.grid
    if isinstance(field, TensorField):
        return VectorField(grid, _divergence_of_tensor(grid, field.coeffs))
    return SpectralField(grid, 1j * np.sum(stacked_k_odd(grid) * field.coeffs, axis=0))


def dealiased_product(f: SpectralField, g: SpectralField) -> SpectralField:
    """Pointwise product with 2/3-rule truncation of inputs and output."""
    f.same_grid(g)
    grid = f.grid
    mask = grid.dealias
    prod = inverse_samples(f.coeffs * mask, grid).real * inverse_samples(g.coeffs * mask, grid).real
    return SpectralField(grid, forward_coeffs(prod, grid) * mask)


def tensor_product(u: VectorField, v: VectorField) -> TensorField:
    """(u⊗v)_ij = u_i v_j, dealiased."""
    u.same_grid(v)
    return TensorField(u.grid, _tensor_product(u.grid, u.coeffs, v.coeffs))


def nonlinear_term(u: VectorField, v: VectorField) -> VectorField:
    """P∇·(u⊗v), the integrand of the bilinear Duhamel operator."""
    u.same_grid(v)
    return VectorField(u.grid, _nonlinear(u.grid, u.coeffs, v.coeffs))
