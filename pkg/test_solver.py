# -*- coding: utf-8 -*-
"""
Standalone Test Script for the Solver

Exercises the Picard solve of the mild formulation, the integrating-factor
time-stepper, the energy budget, the PDE-derived time derivatives and pressure,
and the contraction diagnostics.

The Taylor-Green vortex is the main oracle: its transport term is a pure
gradient, so the velocity decays as u0·e^{-2t} and the pressure is
¼(cos 2x + cos 2y)e^{-4t}.

---
HOW TO RUN THIS SCRIPT:
---
1. Make sure you have run the main setup script first:
   bash scripts/setup.sh

2. Activate the virtual environment:
   source .venv/bin/activate

3. Run this script from the project's root directory:
   python test_solver.py
---
"""

import logging
import os
import sys

# This ensures the script can find the project packages
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import numpy as np
import pytest

try:
    from solver.config import CONTRACTIVE, NON_CONTRACTIVE, ContractionEstimate, SolverConfig
    from solver.contraction import bisect_smallness_threshold, estimate_contraction
    from solver.derivatives import pressure, time_derivative, time_derivatives
    from solver.duhamel import bilinear_B, duhamel_sweep, picard_solve
    from solver.integrator import energy_budget, integrate
    from spaces.norms import NormSpec, l2_from_coeffs
    from spaces.trajectory import Trajectory
    from spectral.fields import VectorField
    from spectral.grid import GridSpec
    from spectral.initial_data import random_slope, taylor_green
    from spectral.operators import divergence, gradient, nonlinear_term, tensor_product
    from utils.errors import BlowUpError, DerivativeOrderError, DomainError, SmallnessViolatedError
except ImportError as e:
    print(f"ERROR: Could not import modules: {e}")
    print("Please ensure you have run 'bash scripts/setup.sh' and are running this script")
    print("from the root of the project directory.")
    sys.exit(1)

GRID = GridSpec(2, 32, 2 * np.pi)
TG_GRID = GridSpec(2, 64, 2 * np.pi)
TG_CONFIG = SolverConfig(T=1.0, n_steps=128)
SMALL_CONFIG = SolverConfig(T=0.5, n_steps=64)


def _small_data(amplitude=0.05, seed=1, k_max=4):
    return random_slope(GRID, beta=1.0, seed=seed, amplitude=amplitude, k_max=k_max)


def _tg_exact(times):
    return Trajectory.heat(taylor_green(TG_GRID), times)


def _relative_l2_error(traj, exact):
    return max(
        l2_from_coeffs(VectorField(traj.grid, traj.coeffs[i] - exact.coeffs[i])) / l2_from_coeffs(exact.sample(i))
        for i in range(len(traj))
    )


# --- Configuration ---

@pytest.mark.parametrize("kwargs", [
    {"T": 0.0, "n_steps": 10},
    {"T": 1.0, "n_steps": 1},
    {"T": 1.0, "n_steps": 10, "mesh": "logarithmic"},
    {"T": 1.0, "n_steps": 10, "picard_tol": 0.0},
    {"T": 1.0, "n_steps": 10, "picard_max_iter": 0},
    {"T": 1.0, "n_steps": 10, "max_derivative_order": 5},
    {"T": 1.0, "n_steps": 10, "max_derivative_order": -1},
    {"T": 1.0, "n_steps": 10, "max_derivative_order": 2.5},
])
def test_solver_config_rejects_bad_values(kwargs):
    with pytest.raises(DomainError):
        SolverConfig(**kwargs)


def test_mesh_nodes():
    uniform = SolverConfig(T=2.0, n_steps=4).times()
    assert np.allclose(uniform, [0.0, 0.5, 1.0, 1.5, 2.0])
    graded = SolverConfig(T=1.0, n_steps=4, mesh="graded", grading=2.0).times()
    assert np.allclose(graded, [0.0, 1 / 16, 1 / 4, 9 / 16, 1.0])


def test_default_monitor_spec():
    assert SolverConfig(T=1.0, n_steps=4).monitor_spec(3) == NormSpec(0.0, 6.0)


def test_fingerprint_tracks_settings():
    assert SolverConfig(T=1.0, n_steps=8).fingerprint() == SolverConfig(T=1.0, n_steps=8).fingerprint()
    assert SolverConfig(T=1.0, n_steps=8).fingerprint() != SolverConfig(T=1.0, n_steps=16).fingerprint()


# --- Taylor-Green oracle ---

def test_integrator_reproduces_taylor_green_decay():
    traj = integrate(taylor_green(TG_GRID), TG_CONFIG)
    assert _relative_l2_error(traj, _tg_exact(traj.times)) < 1e-6
    assert traj.divergence_defect() < 1e-12
    assert traj.metadata["config_hash"] == TG_CONFIG.fingerprint()


def test_picard_reproduces_taylor_green_decay():
    traj, estimate = picard_solve(taylor_green(TG_GRID), TG_CONFIG)
    assert estimate.converged
    assert _relative_l2_error(traj, _tg_exact(traj.times)) < 1e-6
    assert estimate.residual < 1e-10


def test_taylor_green_pressure_and_momentum_balance():
    u = taylor_green(TG_GRID)
    p = pressure(u)
    x, y = TG_GRID.x
    assert np.allclose(p.physical(), 0.25 * (np.cos(2 * x) + np.cos(2 * y)), atol=1e-12)
    # ∂_t u - Δu + ∇·(u⊗u) + ∇p = 0 with ∂_t u = -2u
    residual = -2.0 * u.coeffs + TG_GRID.k2 * u.coeffs + divergence(tensor_product(u, u)).coeffs + gradient(p).coeffs
    assert np.max(np.abs(residual)) < 1e-10


def test_pressure_closes_the_momentum_equation_for_any_field():
    u = random_slope(GRID, beta=1.5, seed=6)
    transport = divergence(tensor_product(u, u)).coeffs + gradient(pressure(u)).coeffs
    projected = nonlinear_term(u, u).coeffs
    assert np.max(np.abs(transport - projected)) < 1e-12 * max(1.0, np.max(np.abs(projected)))


def test_taylor_green_time_derivatives():
    u = taylor_green(GRID)
    for n, d_n in enumerate(time_derivatives(u, 4)):
        assert np.allclose(d_n.coeffs, (-2.0) ** n * u.coeffs, atol=1e-12)
    with pytest.raises(DerivativeOrderError):
        time_derivatives(u, 5)


# --- Special regimes ---

@pytest.mark.parametrize("solve", [integrate, lambda u0, cfg: picard_solve(u0, cfg)[0]])
def test_zero_data_stays_zero(solve):
    traj = solve(VectorField.zeros(GRID), SMALL_CONFIG)
    assert len(traj) == SMALL_CONFIG.n_steps + 1
    assert np.max(np.abs(traj.coeffs)) == 0.0


def test_linear_mode_is_the_exact_heat_flow():
    cfg = SolverConfig(T=0.5, n_steps=64, nonlinear=False)
    u0 = _small_data(amplitude=1.0)
    exact = Trajectory.heat(u0, cfg.times())
    assert np.allclose(integrate(u0, cfg).coeffs, exact.coeffs, rtol=0.0, atol=1e-12)
    traj, estimate = picard_solve(u0, cfg)
    assert estimate.converged and estimate.iterations == 0
    assert np.allclose(traj.coeffs, exact.coeffs, rtol=0.0, atol=1e-15)


def test_integrator_and_picard_agree_on_small_data():
    u0 = _small_data()
    stepped = integrate(u0, SMALL_CONFIG)
    mild, estimate = picard_solve(u0, SMALL_CONFIG)
    assert estimate.converged
    assert estimate.verdict == CONTRACTIVE
    scale = np.max(np.abs(stepped.coeffs))
    assert np.max(np.abs(stepped.coeffs - mild.coeffs)) < 1e-8 * scale


def test_picard_logs_each_iteration(caplog):
    caplog.set_level(logging.INFO, logger="solver.duhamel")
    picard_solve(_small_data(), SMALL_CONFIG)
    assert "Picard iteration 1: residual=" in caplog.text
    assert "Picard converged" in caplog.text


def test_integrator_preserves_incompressibility():
    traj = integrate(_small_data(amplitude=0.5), SMALL_CONFIG)
    assert traj.divergence_defect() < 1e-12


def test_blow_up_is_reported_with_last_valid_time():
    with pytest.raises(BlowUpError) as excinfo:
        integrate(_small_data(amplitude=1e200), SMALL_CONFIG)
    assert excinfo.value.last_valid_time == 0.0


def test_large_data_violates_smallness():
    cfg = SolverConfig(T=1.0, n_steps=32, picard_max_iter=10)
    with pytest.raises(SmallnessViolatedError) as excinfo:
        picard_solve(_small_data(amplitude=100.0), cfg)
    assert excinfo.value.estimate.iterations >= 1


# --- Energy budget ---

def test_energy_balance_for_taylor_green():
    budget = energy_budget(integrate(taylor_green(TG_GRID), TG_CONFIG))
    assert budget.defect < 1e-6
    assert budget.energy[-1] == pytest.approx(budget.energy[0] * np.exp(-4.0), rel=1e-10)


def test_energy_balance_for_small_random_data():
    budget = energy_budget(integrate(_small_data(), SMALL_CONFIG))
    assert budget.defect < 1e-4
    assert np.all(np.diff(budget.energy) < 0)


def test_energy_of_linear_flow_is_budgeted_without_transport():
    cfg = SolverConfig(T=0.5, n_steps=64, nonlinear=False)
    budget = energy_budget(integrate(_small_data(amplitude=1.0), cfg), nonlinear=False)
    assert budget.defect < 1e-5


# --- Duhamel operator ---

def test_bilinear_operator_on_and_off_the_mesh():
    y = Trajectory.heat(_small_data(amplitude=1.0), SMALL_CONFIG.times())
    sweep = duhamel_sweep(y, y)
    t_node = y.times[16]
    assert np.allclose(bilinear_B(y, y, t_node).coeffs, sweep.coeffs[16], atol=1e-14)
    between = bilinear_B(y, y, 0.5 * (y.times[16] + y.times[17]))
    lo, hi = sweep.coeffs[16], sweep.coeffs[17]
    # the midpoint value lies between its neighbours up to O(Δt²)
    assert np.max(np.abs(between.coeffs - 0.5 * (lo + hi))) < 1e-2 * np.max(np.abs(hi))
    with pytest.raises(DomainError):
        bilinear_B(y, y, SMALL_CONFIG.T * 1.5)
    with pytest.raises(DomainError):
        bilinear_B(y, y, -0.1)


def _bilinear_at_horizon(u0, T, n_steps):
    y = Trajectory.heat(u0, np.linspace(0.0, T, n_steps + 1))
    return bilinear_B(y, y, T).coeffs


def test_bilinear_operator_is_second_order_in_the_step():
    u0 = _small_data(amplitude=1.0, k_max=2)
    coarse, mid, fine = (_bilinear_at_horizon(u0, 0.25, n) for n in (32, 64, 128))
    ratio = np.linalg.norm(coarse - mid) / np.linalg.norm(mid - fine)
    assert 3.5 <= ratio <= 4.5


def test_bilinear_operator_vanishes_at_time_zero_and_on_taylor_green():
    y = _tg_exact(TG_CONFIG.times())
    sweep = duhamel_sweep(y, y)
    assert np.max(np.abs(sweep.coeffs[0])) == 0.0
    assert np.max(np.abs(sweep.coeffs)) < 1e-12


def test_recursion_derivative_matches_trajectory_difference():
    cfg = SolverConfig(T=0.25, n_steps=64)
    traj = integrate(_small_data(amplitude=0.5, k_max=2), cfg)
    h = cfg.T / cfg.n_steps
    centred = (traj.coeffs[33] - traj.coeffs[31]) / (2 * h)
    recursion = time_derivative(traj, traj.times[32], 1).coeffs
    assert np.max(np.abs(centred - recursion)) < 1e-2 * np.max(np.abs(recursion))


def test_centred_differences_converge_to_the_recursion_derivative():
    cfg = SolverConfig(T=0.25, n_steps=512)
    traj = integrate(_small_data(amplitude=0.5, k_max=2), cfg)
    dt = cfg.T / cfg.n_steps
    mid = 256
    recursion = time_derivative(traj, traj.times[mid], 1).coeffs
    errors = []
    for offset in (32, 16):
        centred = (traj.coeffs[mid + offset] - traj.coeffs[mid - offset]) / (2 * offset * dt)
        errors.append(np.linalg.norm(centred - recursion))
    assert 3.5 <= errors[0] / errors[1] <= 4.5


# --- Contraction diagnostics ---

def test_first_contraction_ratio_scales_with_amplitude():
    _, small = picard_solve(_small_data(amplitude=0.05), SMALL_CONFIG)
    _, double = picard_solve(_small_data(amplitude=0.1), SMALL_CONFIG)
    assert 1.8 <= double.ratios[0] / small.ratios[0] <= 2.2


def test_contraction_estimate_for_small_data():
    estimate = estimate_contraction(_small_data(), SMALL_CONFIG)
    assert estimate.verdict == CONTRACTIVE
    assert estimate.eta_hat > 0.0
    assert estimate.smallness_product == pytest.approx(4.0 * estimate.eta_hat * estimate.y_norm)
    assert estimate.to_dict()["verdict"] == CONTRACTIVE


def test_heat_norm_of_the_estimate_is_homogeneous():
    small = estimate_contraction(_small_data(amplitude=0.05), SMALL_CONFIG)
    double = estimate_contraction(_small_data(amplitude=0.1), SMALL_CONFIG)
    assert double.y_norm == pytest.approx(2.0 * small.y_norm, rel=1e-2)


def test_estimate_without_ratios_is_not_contractive():
    cfg = SolverConfig(T=0.5, n_steps=32, picard_max_iter=1)
    estimate = estimate_contraction(_small_data(), cfg)
    assert estimate.ratios == []
    assert not estimate.converged
    assert estimate.verdict == NON_CONTRACTIVE
    assert estimate.to_dict()["verdict"] == NON_CONTRACTIVE


def test_verdict_of_an_empty_estimate_follows_convergence():
    assert ContractionEstimate().verdict == NON_CONTRACTIVE
    assert ContractionEstimate(converged=True).verdict == CONTRACTIVE
    assert ContractionEstimate(ratios=[0.2, 1.3], converged=False).verdict == NON_CONTRACTIVE


def test_contraction_estimate_does_not_raise_for_large_data():
    cfg = SolverConfig(T=1.0, n_steps=32, picard_max_iter=10)
    estimate = estimate_contraction(_small_data(amplitude=100.0), cfg)
    assert estimate.verdict == NON_CONTRACTIVE or not estimate.converged


def test_smallness_threshold_bisection():
    cfg = SolverConfig(T=0.5, n_steps=32, picard_max_iter=20)
    threshold, history = bisect_smallness_threshold(
        lambda a: _small_data(amplitude=a), cfg, lo=0.01, hi=100.0, steps=4
    )
    assert 0.01 < threshold < 100.0
    assert len(history) == 6
    with pytest.raises(DomainError):
        bisect_smallness_threshold(lambda a: _small_data(amplitude=a), cfg, lo=1.0, hi=0.5)


def test_smallness_threshold_is_stable_under_step_refinement():
    thresholds = []
    for n_steps in (32, 64):
        cfg = SolverConfig(T=0.5, n_steps=n_steps, picard_max_iter=20)
        threshold, _ = bisect_smallness_threshold(lambda a: _small_data(amplitude=a), cfg, lo=0.01, hi=100.0, steps=12)
        thresholds.append(threshold)
    assert thresholds[1] == pytest.approx(thresholds[0], rel=0.1)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
