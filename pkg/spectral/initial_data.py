# -*- coding: utf-8 -*-
"""
Initial data and test fields: Taylor-Green vortices, random power-law
spectra, Gaussian vortices, periodized Gaussians and single Fourier modes.
"""

import logging
from typing import Any, Dict, Optional, Sequence

import numpy as np

from spectral.fields import SpectralField, VectorField
from spectral.grid import GridSpec, reflect
from spectral.operators import _project, stacked_k_odd
from utils.errors import DomainError

log = logging.getLogger(__name__)

INITIAL_DATA_KINDS = ("taylor_green", "random_slope", "gaussian_vortex")
PHASE_KINDS = ("random", "focused")


def _hermitian_part(coeffs: np.ndarray, d: int) -> np.ndarray:
    return 0.5 * (coeffs + np.conj(reflect(coeffs, d)))


def _band_radius(grid: GridSpec, k_max: Optional[int]) -> int:
    if k_max is None:
        return (grid.N - 1) // 3
    k_max = int(k_max)
    if k_max < 1 or 3 * k_max >= grid.N:
        raise DomainError(f"k_max={k_max} is not resolved by the dealiased band of N={grid.N}")
    return k_max


def _band_amplitude(grid: GridSpec, beta: float, radius: int):
    """|k|^{-β} on the index ball 0 < |n| <= radius of the cube [-radius, radius]^d."""
    idx = np.arange(-radius, radius + 1)
    n_cube = np.meshgrid(*([idx] * grid.d), indexing="ij")
    n2 = sum(n ** 2 for n in n_cube)
    kmag = np.sqrt(n2) * grid.k_min
    amp = np.zeros_like(kmag)
    inside = (n2 > 0) & (n2 <= radius ** 2)
    amp[inside] = kmag[inside] ** (-beta)
    return idx, n_cube, amp


def _random_band(grid: GridSpec, beta: float, seed: int, radius: int, count: int,
                 phases: str = "random") -> np.ndarray:
    """
    Coefficients |k|^{-β}·e^{iφ} on the index ball |n| <= radius, embedded in
    the grid. Random phases are drawn on the cube [-radius, radius]^d, so the
    result does not depend on N.

    Focused phases φ = -k·x0 line every mode up at one seeded point x0, with a
    seeded polarization shared by all modes; with β = d - 1 the field is a
    band-limited piece of a degree -1 homogeneous profile.
    """
    d = grid.d
    rng = np.random.default_rng(seed)
    idx, n_cube, amp = _band_amplitude(grid, beta, radius)
    if phases == "focused":
        polarization = rng.standard_normal(count)
        polarization /= np.linalg.norm(polarization)
        x0 = rng.uniform(0.0, grid.L, size=d)
        phase = -grid.k_min * sum(n_cube[i] * x0[i] for i in range(d))
        blocks = [p * amp * np.exp(1j * phase) for p in polarization]
    elif phases == "random":
        side = 2 * radius + 1
        drawn = rng.uniform(0.0, 2.0 * np.pi, size=(count,) + (side,) * d)
        # odd phase => û(-k) = conj(û(k)); the centre of the cube is the zero mode
        drawn = 0.5 * (drawn - np.flip(drawn, axis=tuple(range(-d, 0))))
        blocks = [amp * np.exp(1j * drawn[c]) for c in range(count)]
    else:
        raise DomainError(f"unknown phase kind '{phases}'; expected one of {PHASE_KINDS}")

    coeffs = np.zeros((count,) + grid.shape, dtype=np.complex128)
    target = np.ix_(*([idx % grid.N] * d))
    for c in range(count):
        coeffs[c][target] = blocks[c]
    return coeffs


def _rms(coeffs: np.ndarray) -> float:
    return float(np.sqrt(np.sum(np.abs(coeffs) ** 2)))


def _scaled_to_rms(coeffs: np.ndarray, amplitude: float) -> np.ndarray:
    rms = _rms(coeffs)
    if amplitude == 0 or rms == 0:
        return np.zeros_like(coeffs)
    return coeffs * (amplitude / rms)


def taylor_green(grid: GridSpec, amplitude: float = 1.0, mode: int = 1) -> VectorField:
    """Classical Taylor-Green vortex at wavenumber mode·2π/L."""
    kappa = mode * grid.k_min
    x = grid.x
    if grid.d == 2:
        ux = np.sin(kappa * x[0]) * np.cos(kappa * x[1])
        uy = -np.cos(kappa * x[0]) * np.sin(kappa * x[1])
        samples = np.stack(np.broadcast_arrays(ux, uy))
    else:
        ux = np.sin(kappa * x[0]) * np.cos(kappa * x[1]) * np.cos(kappa * x[2])
        uy = -np.cos(kappa * x[0]) * np.sin(kappa * x[1]) * np.cos(kappa * x[2])
        uz = np.zeros(grid.shape)
        samples = np.stack(np.broadcast_arrays(ux, uy, uz))
    return VectorField.from_physical(grid, amplitude * samples)


def random_slope(grid: GridSpec, beta: float, seed: int, amplitude: float = 1.0,
                 k_max: Optional[int] = None, phases: str = "random") -> VectorField:
    """
    Divergence-free field with |û(k)| ∝ |k|^{-β} before projection,
    normalized so that the rms speed (‖u‖₂/L^{d/2}) equals amplitude.
    phases="focused" concentrates the spectrum at a seeded point instead of
    spreading it with random phases.
    """
    radius = _band_radius(grid, k_max)
    coeffs = _random_band(grid, beta, seed, radius, grid.d, phases)
    coeffs = _project(grid, coeffs)
    return VectorField(grid, _scaled_to_rms(coeffs, amplitude))


def random_slope_scalar(grid: GridSpec, beta: float, seed: int, amplitude: float = 1.0,
                        k_max: Optional[int] = None, phases: str = "random") -> SpectralField:
    radius = _band_radius(grid, k_max)
    coeffs = _random_band(grid, beta, seed, radius, 1, phases)[0]
    return SpectralField(grid, _scaled_to_rms(coeffs, amplitude))


def _center(grid: GridSpec, center: Optional[Sequence[float]]) -> np.ndarray:
    if center is None:
        return np.full(grid.d, grid.L / 2.0)
    center = np.asarray(center, dtype=np.float64)
    if center.shape != (grid.d,):
        raise DomainError(f"center must have {grid.d} coordinates")
    return center


def gaussian_field(grid: GridSpec, a: float, center: Optional[Sequence[float]] = None,
                   mean_zero: bool = True) -> SpectralField:
    """
    The periodized heat kernel G_a(x - x0) = Σ_m (4πa)^{-d/2} e^{-|x-x0-mL|²/4a},
    built from its exact Fourier coefficients L^{-d} e^{-a|k|²} e^{-ik·x0}.
    """
    if a <= 0:
        raise DomainError(f"Gaussian width parameter must be positive, got {a}")
    x0 = _center(grid, center)
    phase = sum(grid.k[i] * x0[i] for i in range(grid.d))
    coeffs = np.exp(-a * grid.k2 - 1j * phase) / grid.volume
    coeffs = _hermitian_part(coeffs, grid.d)
    field = SpectralField(grid, coeffs)
    return field.without_mean() if mean_zero else field


def gaussian_profile(grid: GridSpec, b: float, center: Optional[Sequence[float]] = None) -> np.ndarray:
    """Whole-space heat kernel G_b sampled at nearest-image distances from x0."""
    x0 = _center(grid, center)
    r2 = np.zeros(grid.shape)
    for i in range(grid.d):
        dx = grid.x[i] - x0[i]
        dx = dx - grid.L * np.round(dx / grid.L)
        r2 = r2 + dx ** 2
    return (4.0 * np.pi * b) ** (-grid.d / 2.0) * np.exp(-r2 / (4.0 * b))


def gaussian_vortex(grid: GridSpec, a: float, amplitude: float = 1.0,
                    center: Optional[Sequence[float]] = None) -> VectorField:
    """Velocity (∂₂ψ, -∂₁ψ[, 0]) of a Gaussian stream function ψ = G_a, rms speed = amplitude."""
    psi = gaussian_field(grid, a, center, mean_zero=True).coeffs
    k = stacked_k_odd(grid)
    coeffs = np.zeros((grid.d,) + grid.shape, dtype=np.complex128)
    coeffs[0] = 1j * k[1] * psi
    coeffs[1] = -1j * k[0] * psi
    return VectorField(grid, _scaled_to_rms(coeffs, amplitude))


def single_mode(grid: GridSpec, n: Sequence[int], amplitude: float = 1.0, phase: str = "sin") -> SpectralField:
    """amplitude·sin(k·x) (or cos) with k = (2π/L)·n."""
    arg = sum(grid.k_min * n[i] * grid.x[i] for i in range(grid.d))
    wave = np.sin(arg) if phase == "sin" else np.cos(arg)
    return SpectralField.from_physical(grid, amplitude * np.broadcast_to(wave, grid.shape))


def make_initial_data(kind: str, params: Dict[str, Any], grid: GridSpec) -> VectorField:
    """Builds divergence-free, mean-zero, real initial velocity of the given kind."""
    params = dict(params or {})
    log.info(f"Building initial data '{kind}' with params {params} on {grid}")
    if kind == "taylor_green":
        return taylor_green(grid, **params)
    if kind == "random_slope":
        return random_slope(grid, **params)
    if kind == "gaussian_vortex":
        return gaussian_vortex(grid, **params)
    raise DomainError(f"unknown initial data kind '{kind}'; expected one of {INITIAL_DATA_KINDS}")
