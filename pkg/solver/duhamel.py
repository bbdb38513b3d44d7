# -*- coding: utf-8 -*-
"""
The bilinear Duhamel operator B(u, v)(t) = ∫₀ᵗ e^{(t-τ)Δ} P∇·(u⊗v)(τ) dτ and the
Picard solve of the mild formulation u = e^{tΔ}u₀ - B(u, u).

B is evaluated on the trajectory's own mesh by the composite trapezoid rule with
the exact heat multiplier, which turns into a one-pass recursion:
    B(t_{m+1}) = E(Δ_m)[B(t_m) + Δ_m/2·N_m] + Δ_m/2·N_{m+1},  E(Δ) = e^{-Δ|k|²}.
"""

import logging
import math
from typing import Tuple

import numpy as np

from solver.config import ContractionEstimate, SolverConfig
from spaces.kato import kato_norm
from spaces.trajectory import Trajectory
from spectral.fields import VectorField
from spectral.grid import GridSpec
from spectral.operators import _nonlinear
from utils.errors import DomainError, SmallnessViolatedError

log = logging.getLogger(__name__)

_CHUNK = 16


def _nonlinear_nodes(grid: GridSpec, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    out = np.empty_like(u)
    same = u is v
    for start in range(0, u.shape[0], _CHUNK):
        ub = u[start:start + _CHUNK]
        out[start:start + _CHUNK] = _nonlinear(grid, ub, ub if same else v[start:start + _CHUNK])
    return out


def _trapezoid_recursion(grid: GridSpec, times: np.ndarray, integrand: np.ndarray) -> np.ndarray:
    out = np.zeros_like(integrand)
    for m in range(len(times) - 1):
        dt = times[m + 1] - times[m]
        decay = np.exp(-dt * grid.k2)
        out[m + 1] = decay * (out[m] + 0.5 * dt * integrand[m]) + 0.5 * dt * integrand[m + 1]
    return out


def duhamel_sweep(u: Trajectory, v: Trajectory) -> Trajectory:
    """B(u, v) at every mesh node of u and v."""
    u.same_mesh(v)
    with np.errstate(over="ignore", invalid="ignore"):
        integrand = _nonlinear_nodes(u.grid, u.coeffs, u.coeffs if v is u else v.coeffs)
        return u.with_coeffs(_trapezoid_recursion(u.grid, u.times, integrand))


def bilinear_B(u: Trajectory, v: Trajectory, t: float) -> VectorField:
    """
    B(u, v)(t). When t is not a mesh node the integrand state at t is linearly
    interpolated from the neighbouring samples.
    """
    u.same_mesh(v)
    times = u.times
    if t < 0 or t > times[-1] * (1 + 1e-12):
        raise DomainError(f"t={t} lies outside the trajectory horizon [0, {times[-1]}]")
    below = int(np.searchsorted(times, t, side="right"))
    on_node = math.isclose(times[below - 1], t, rel_tol=1e-12, abs_tol=1e-15)
    if on_node:
        nodes = times[:below]
        uc, vc = u.coeffs[:below], v.coeffs[:below]
    else:
        w = (t - times[below - 1]) / (times[below] - times[below - 1])
        u_t = (1 - w) * u.coeffs[below - 1] + w * u.coeffs[below]
        v_t = (1 - w) * v.coeffs[below - 1] + w * v.coeffs[below]
        nodes = np.append(times[:below], t)
        uc = np.concatenate([u.coeffs[:below], u_t[None]])
        vc = np.concatenate([v.coeffs[:below], v_t[None]])
    if v is u:
        vc = uc
    integrand = _nonlinear_nodes(u.grid, uc, vc)
    return VectorField(u.grid, _trapezoid_recursion(u.grid, nodes, integrand)[-1])


def picard_solve(u0: VectorField, cfg: SolverConfig) -> Tuple[Trajectory, ContractionEstimate]:
    """
    Iterates u⁽ⁿ⁺¹⁾ = e^{tΔ}u₀ - B(u⁽ⁿ⁾, u⁽ⁿ⁾) from u⁽⁰⁾ = e^{tΔ}u₀ until the Kato
    norm (first monitor spec) of successive differences drops below picard_tol.

    Raises SmallnessViolatedError, carrying the diagnostics, when the contraction
    ratio stays >= 1 for picard_max_iter/2 consecutive iterations, when the
    iterates overflow, or when the iteration budget runs out.
    """
    grid = u0.grid
    spec = cfg.monitor_spec(grid.d)
    y = Trajectory.heat(u0, cfg.times(), metadata={"config_hash": cfg.fingerprint()})
    estimate = ContractionEstimate(y_norm=kato_norm(y, spec))

    if not cfg.nonlinear:
        estimate.converged = True
        return y, estimate

    patience = max(1, cfg.picard_max_iter // 2)
    x = y
    previous = None
    expanding = 0
    for iteration in range(1, cfg.picard_max_iter + 1):
        x_new = y - duhamel_sweep(x, x)
        diff = kato_norm(x_new - x, spec)
        estimate.iterations = iteration
        ratio = None
        if not math.isfinite(diff):
            log.warning(f"Picard iteration {iteration}: iterates overflowed")
            estimate.ratios.append(math.inf)
            raise SmallnessViolatedError("Picard iterates overflowed; data too large for the horizon", estimate)
        if iteration == 1 and estimate.y_norm > 0:
            # ‖u⁽¹⁾ - u⁽⁰⁾‖ = ‖B(y, y)‖
            estimate.eta_hat = diff / estimate.y_norm ** 2
        if previous:
            ratio = diff / previous
            estimate.ratios.append(ratio)
            expanding = expanding + 1 if ratio >= 1.0 else 0
        log.info(f"Picard iteration {iteration}: residual={diff:.3e}, ratio={'n/a' if ratio is None else f'{ratio:.4f}'}")
        x, previous = x_new, diff
        if diff < cfg.picard_tol:
            estimate.converged = True
            break
        if expanding >= patience:
            raise SmallnessViolatedError(
                f"Picard ratios stayed >= 1 for {expanding} consecutive iterations", estimate
            )
    else:
        raise SmallnessViolatedError(f"Picard iteration did not converge in {cfg.picard_max_iter} iterations", estimate)

    estimate.residual = kato_norm(x - (y - duhamel_sweep(x, x)), spec)
    log.info(f"Picard converged in {estimate.iterations} iterations; mild residual {estimate.residual:.3e}")
    return x, estimate
