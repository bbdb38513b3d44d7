# -*- coding: utf-8 -*-
"""
Standalone Test Script for the Spectral Layer

Checks the grid tables, the forward/inverse transform convention, the Fourier
multipliers (Riesz, Leray, fractional Laplacian, heat) and the dealiased
products against closed-form values, plus the .nsf field files.

---
HOW TO RUN THIS SCRIPT:
---
1. Make sure you have run the main setup script first:
   bash scripts/setup.sh

2. Activate the virtual environment:
   source .venv/bin/activate

3. Run this script from the project's root directory:
   python test_spectral.py
---
"""

import os
import sys

# This ensures the script can find the project packages
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

try:
    from spectral.field_io import read_field, write_field
    from spectral.fields import FORWARD, INVERSE, SpectralField, VectorField, transform
    from spectral.grid import GridSpec
    from spectral.initial_data import (gaussian_field, gaussian_profile, make_initial_data, random_slope,
                                       random_slope_scalar, single_mode, taylor_green)
    from spectral.operators import (dealiased_product, divergence, fractional_laplacian, gradient, heat_semigroup,
                                    laplacian, leray_project, nonlinear_term, riesz_transform)
    from spaces.norms import inner_product, l2_from_coeffs, lq_norm
    from utils.errors import DimensionError, DomainError, GridMismatchError, ZeroModeError
except ImportError as e:
    print(f"ERROR: Could not import modules: {e}")
    print("Please ensure you have run 'bash scripts/setup.sh' and are running this script")
    print("from the root of the project directory.")
    sys.exit(1)

GRID_2D = GridSpec(2, 32, 2 * np.pi)
GRID_3D = GridSpec(3, 16, 2 * np.pi)

seeds = st.integers(min_value=0, max_value=10_000)
betas = st.floats(min_value=0.5, max_value=2.5)


def _random_vector(grid, seed):
    """A mean-zero real vector field with every resolved mode populated."""
    rng = np.random.default_rng(seed)
    samples = rng.standard_normal((grid.d,) + grid.shape)
    return VectorField.from_physical(grid, samples).without_mean()


# --- Grid ---

@pytest.mark.parametrize("d, N, L", [(1, 16, 1.0), (4, 16, 1.0), (2, 12, 1.0), (2, 4, 1.0), (2, 16, 0.0), (2, 16, -1.0)])
def test_grid_rejects_bad_parameters(d, N, L):
    with pytest.raises(DimensionError):
        GridSpec(d, N, L)


def test_grid_tables():
    grid = GridSpec(2, 16, 4 * np.pi)
    assert grid.shape == (16, 16)
    assert grid.k_min == pytest.approx(0.5)
    assert grid.k_max == pytest.approx(4.0)
    assert grid.validity_time == pytest.approx(4.0)
    assert grid.resolve_time == pytest.approx(10 * (np.pi / 4) ** 2)
    # the Nyquist row is zero only in the odd-symbol table
    assert grid.k[0][8, 0] == pytest.approx(-4.0)
    assert grid.k_odd[0][8, 0] == 0.0
    # 2/3 rule keeps |n| <= 5 on each axis for N = 16
    assert grid.dealias[5, 0] and not grid.dealias[6, 0]
    assert grid.refined().N == 32


def test_grid_tables_are_read_only():
    with pytest.raises(ValueError):
        GRID_2D.k2[0, 0] = 1.0


# --- Transforms ---

def test_sine_mode_coefficients():
    f = single_mode(GRID_2D, (1, 0))
    assert f.coeffs[1, 0] == pytest.approx(-0.5j, abs=1e-14)
    assert f.coeffs[-1, 0] == pytest.approx(0.5j, abs=1e-14)
    f.coeffs[1, 0] = f.coeffs[-1, 0] = 0.0
    assert f.max_abs() < 1e-14


def test_transform_directions():
    samples = np.cos(GRID_2D.x[0] + 2 * GRID_2D.x[1]) * np.ones(GRID_2D.shape)
    f = transform(samples, FORWARD, GRID_2D)
    assert isinstance(f, SpectralField)
    assert np.allclose(transform(f, INVERSE), samples, atol=1e-13)
    assert f.imag_residual() < 1e-14


def test_transform_rejects_wrong_shape():
    with pytest.raises(DimensionError):
        transform(np.zeros((3, 32, 32)), FORWARD, GRID_2D)
    with pytest.raises(DimensionError):
        transform(np.zeros((32, 32)), FORWARD)


def test_mixed_grids_are_rejected():
    f = single_mode(GRID_2D, (1, 0))
    g = single_mode(GridSpec(2, 64, 2 * np.pi), (1, 0))
    with pytest.raises(GridMismatchError):
        f + g


def test_plancherel():
    f = random_slope_scalar(GRID_2D, beta=1.0, seed=3)
    assert lq_norm(f, 2) == pytest.approx(l2_from_coeffs(f), rel=1e-12)


# --- Multipliers ---

@settings(max_examples=20, deadline=None)
@given(seed=seeds)
def test_leray_projection_is_idempotent_and_solenoidal(seed):
    v = _random_vector(GRID_2D, seed)
    pv = leray_project(v)
    assert np.max(np.abs(leray_project(pv).coeffs - pv.coeffs)) < 1e-13
    assert pv.divergence_defect() < 1e-12


@settings(max_examples=20, deadline=None)
@given(seed=seeds)
def test_leray_projection_is_orthogonal(seed):
    v, w = _random_vector(GRID_2D, seed), _random_vector(GRID_2D, seed + 1)
    pv, pw = leray_project(v), leray_project(w)
    scale = l2_from_coeffs(v) * l2_from_coeffs(w)
    assert abs(inner_product(pv, w - pw)) < 1e-12 * scale
    assert l2_from_coeffs(pv) <= l2_from_coeffs(v) * (1 + 1e-14)


def test_leray_projection_in_three_dimensions():
    pv = leray_project(_random_vector(GRID_3D, 11))
    assert pv.divergence_defect() < 1e-12
    assert divergence(pv).max_abs() < 1e-12


def test_leray_projection_keeps_gradients_out():
    grad = gradient(random_slope_scalar(GRID_2D, 1.0, 5))
    assert leray_project(grad).max_abs() < 1e-13


@settings(max_examples=20, deadline=None)
@given(seed=seeds, beta=betas)
def test_riesz_square_sum_is_minus_identity(seed, beta):
    f = random_slope_scalar(GRID_2D, beta=beta, seed=seed)
    total = riesz_transform(riesz_transform(f, 0), 0) + riesz_transform(riesz_transform(f, 1), 1)
    assert np.max(np.abs(total.coeffs + f.coeffs)) < 1e-13


def test_riesz_rejects_mean_and_bad_axis():
    f = single_mode(GRID_2D, (1, 1))
    with pytest.raises(DomainError):
        riesz_transform(f, 2)
    constant = SpectralField.from_physical(GRID_2D, np.ones(GRID_2D.shape))
    with pytest.raises(ZeroModeError):
        riesz_transform(constant, 0)


def test_fractional_laplacian():
    f = random_slope_scalar(GRID_2D, beta=1.5, seed=8)
    assert np.allclose(fractional_laplacian(f, 2.0).coeffs, -laplacian(f).coeffs, atol=1e-13)
    back = fractional_laplacian(fractional_laplacian(f, 0.7), -0.7)
    assert np.allclose(back.coeffs, f.coeffs, atol=1e-14)
    mode = single_mode(GRID_2D, (0, 3))
    assert np.allclose(fractional_laplacian(mode, 0.5).coeffs, np.sqrt(3.0) * mode.coeffs, atol=1e-14)


@settings(max_examples=20, deadline=None)
@given(seed=seeds, s=st.floats(min_value=-1.5, max_value=2.5), t=st.floats(min_value=0.0, max_value=1.0))
def test_fractional_laplacian_commutes_with_heat_and_riesz(seed, s, t):
    f = random_slope_scalar(GRID_2D, beta=1.0, seed=seed)
    scale = fractional_laplacian(f, s).max_abs()
    heat_first = fractional_laplacian(heat_semigroup(f, t), s)
    heat_last = heat_semigroup(fractional_laplacian(f, s), t)
    assert np.max(np.abs(heat_first.coeffs - heat_last.coeffs)) <= 1e-13 * scale
    for j in range(GRID_2D.d):
        riesz_first = fractional_laplacian(riesz_transform(f, j), s)
        riesz_last = riesz_transform(fractional_laplacian(f, s), j)
        assert np.max(np.abs(riesz_first.coeffs - riesz_last.coeffs)) <= 1e-13 * scale


def test_negative_order_needs_mean_zero():
    shifted = single_mode(GRID_2D, (1, 0)) + SpectralField.from_physical(GRID_2D, np.ones(GRID_2D.shape))
    with pytest.raises(ZeroModeError):
        fractional_laplacian(shifted, -0.5)
    assert fractional_laplacian(shifted, 0.5).is_mean_zero()


def test_heat_semigroup():
    f = single_mode(GRID_2D, (1, 2))
    assert np.allclose(heat_semigroup(f, 0.3).coeffs, np.exp(-1.5) * f.coeffs, atol=1e-15)
    g = random_slope_scalar(GRID_2D, beta=1.0, seed=1)
    composed = heat_semigroup(heat_semigroup(g, 0.1), 0.25)
    assert np.allclose(composed.coeffs, heat_semigroup(g, 0.35).coeffs, atol=1e-15)
    with pytest.raises(DomainError):
        heat_semigroup(g, -1e-3)


def test_heat_flow_of_gaussian_matches_whole_space_kernel():
    grid = GridSpec(2, 128, 16.0)
    a, t = 0.1, 0.5
    evolved = heat_semigroup(gaussian_field(grid, a, mean_zero=False), t)
    assert np.max(np.abs(evolved.physical() - gaussian_profile(grid, a + t))) < 1e-10


# --- Products ---

def test_dealiased_product_of_low_modes_is_exact():
    f = single_mode(GRID_2D, (1, 0))
    g = single_mode(GRID_2D, (0, 1))
    expected = np.sin(GRID_2D.x[0]) * np.sin(GRID_2D.x[1])
    assert np.allclose(dealiased_product(f, g).physical(), expected, atol=1e-13)


def test_dealiased_product_drops_high_modes():
    f = single_mode(GRID_2D, (11, 0))
    g = single_mode(GRID_2D, (3, 0))
    assert dealiased_product(f, g).max_abs() < 1e-15
    h = single_mode(GRID_2D, (6, 0))
    # sin(6x)^2 = (1 - cos 12x)/2 and n = 12 is outside the band
    assert np.allclose(dealiased_product(h, h).physical(), 0.5, atol=1e-13)


@settings(max_examples=20, deadline=None)
@given(seed=seeds, c=st.floats(min_value=-50.0, max_value=50.0).filter(lambda c: abs(c) > 1e-3))
def test_transport_term_is_quadratic(seed, c):
    u = random_slope(GRID_2D, beta=1.5, seed=seed)
    base = nonlinear_term(u, u).coeffs
    scaled = nonlinear_term(u * c, u * c).coeffs
    assert np.max(np.abs(scaled - c ** 2 * base)) <= 1e-12 * c ** 2 * np.max(np.abs(base))


def test_taylor_green_is_a_steady_euler_state():
    u = taylor_green(GRID_2D)
    assert nonlinear_term(u, u).max_abs() < 1e-12
    assert taylor_green(GRID_3D).divergence_defect() < 1e-12


# --- Initial data ---

@pytest.mark.parametrize("kind, params", [
    ("taylor_green", {"amplitude": 2.0, "mode": 2}),
    ("random_slope", {"beta": 1.5, "seed": 4}),
    ("gaussian_vortex", {"a": 0.2}),
])
def test_initial_data_is_admissible(kind, params):
    u = make_initial_data(kind, params, GRID_2D)
    assert u.is_mean_zero()
    assert u.divergence_defect() < 1e-12
    assert u.imag_residual() < 1e-12


def test_unknown_initial_data_kind():
    with pytest.raises(DomainError):
        make_initial_data("vortex_sheet", {}, GRID_2D)


def test_random_slope_is_resolution_independent():
    coarse = random_slope(GridSpec(2, 32, 2 * np.pi), beta=1.0, seed=9, k_max=5)
    fine = random_slope(GridSpec(2, 64, 2 * np.pi), beta=1.0, seed=9, k_max=5)
    assert np.allclose(fine.physical()[:, ::2, ::2], coarse.physical(), atol=1e-12)


def test_random_slope_amplitude_is_rms_speed():
    u = random_slope(GRID_2D, beta=2.0, seed=2, amplitude=0.3)
    assert l2_from_coeffs(u) / GRID_2D.L == pytest.approx(0.3, rel=1e-12)


def test_random_slope_rejects_unresolved_band():
    with pytest.raises(DomainError):
        random_slope(GRID_2D, beta=1.0, seed=0, k_max=11)


def test_focused_random_slope_is_admissible():
    u = make_initial_data("random_slope", {"beta": 1.0, "seed": 5, "amplitude": 0.1, "phases": "focused"}, GRID_2D)
    assert u.is_mean_zero()
    assert u.divergence_defect() < 1e-12
    assert u.imag_residual() < 1e-12
    assert l2_from_coeffs(u) / GRID_2D.L == pytest.approx(0.1, rel=1e-12)
    again = random_slope(GRID_2D, beta=1.0, seed=5, amplitude=0.1, phases="focused")
    assert np.array_equal(u.coeffs, again.coeffs)


def test_focused_phases_concentrate_the_field():
    grid = GridSpec(2, 64, 2 * np.pi)
    spread = random_slope(grid, beta=1.0, seed=2)
    focused = random_slope(grid, beta=1.0, seed=2, phases="focused")
    # same |û| profile and rms, but one peak instead of Gaussian-like statistics
    assert lq_norm(focused, 8.0) > 1.5 * lq_norm(spread, 8.0)
    assert np.max(np.abs(focused.physical())) > 2.5 * np.max(np.abs(spread.physical()))


def test_random_slope_rejects_unknown_phases():
    with pytest.raises(DomainError):
        random_slope(GRID_2D, beta=1.0, seed=0, phases="sorted")


# --- Field files ---

def test_field_file_round_trip(tmp_path):
    u = taylor_green(GRID_3D, amplitude=0.5)
    path = str(tmp_path / "u.nsf")
    write_field(path, u, time=1.25)
    loaded, t = read_field(path)
    assert isinstance(loaded, VectorField)
    assert loaded.grid == GRID_3D
    assert t == 1.25
    assert np.array_equal(loaded.coeffs, u.coeffs)


def test_field_file_rejects_foreign_bytes(tmp_path):
    path = tmp_path / "bogus.nsf"
    path.write_bytes(b"not a field file at all, just some bytes" * 2)
    with pytest.raises(DimensionError):
        read_field(str(path))


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
