# -*- coding: utf-8 -*-
"""
Empirical smallness diagnostics for the Picard solve: an estimate of the bilinear
bound η in ‖B(x, y)‖ ≤ η‖x‖‖y‖, and a bisection over data amplitude for the
point where the iteration stops contracting.
"""

import itertools
import logging
from typing import Callable, List, Tuple

from solver.config import ContractionEstimate, SolverConfig
from solver.duhamel import duhamel_sweep, picard_solve
from spaces.kato import kato_norm
from spaces.trajectory import Trajectory
from spectral.fields import VectorField
from spectral.initial_data import random_slope
from utils.errors import DomainError, SmallnessViolatedError

log = logging.getLogger(__name__)

TRIAL_SEED = 7919


def _trial_band(grid) -> int:
    return max(1, min(4, (grid.N - 1) // 3))


def estimate_contraction(u0: VectorField, cfg: SolverConfig, trials: int = 1) -> ContractionEstimate:
    """
    eta_hat = max over ordered candidate pairs of ‖B(a, b)‖/(‖a‖‖b‖), candidates
    being the heat trajectory y, B(y, y) and seeded random heat trajectories.
    Never raises for non-contraction; the Picard ratios come back in the estimate.
    """
    grid = u0.grid
    spec = cfg.monitor_spec(grid.d)
    times = cfg.times()
    y = Trajectory.heat(u0, times)

    candidates: List[Tuple[Trajectory, float]] = []
    y_norm = kato_norm(y, spec)
    if y_norm > 0:
        candidates.append((y, y_norm))
        z = duhamel_sweep(y, y)
        z_norm = kato_norm(z, spec)
        if z_norm > 0:
            candidates.append((z, z_norm))
    for i in range(trials):
        trial = random_slope(grid, beta=1.0, seed=TRIAL_SEED + i, k_max=_trial_band(grid))
        p = Trajectory.heat(trial, times)
        candidates.append((p, kato_norm(p, spec)))

    eta_hat = 0.0
    for (a, a_norm), (b, b_norm) in itertools.product(candidates, repeat=2):
        if a_norm > 0 and b_norm > 0:
            eta_hat = max(eta_hat, kato_norm(duhamel_sweep(a, b), spec) / (a_norm * b_norm))

    try:
        _, estimate = picard_solve(u0, cfg)
    except SmallnessViolatedError as err:
        estimate = err.estimate
    estimate.eta_hat = max(eta_hat, estimate.eta_hat)
    estimate.y_norm = y_norm
    log.info(
        f"Contraction estimate: eta_hat={estimate.eta_hat:.4e}, y_norm={y_norm:.4e}, "
        f"4·eta·y={estimate.smallness_product:.3f}, verdict={estimate.verdict}"
    )
    return estimate


def _contracts(u0: VectorField, cfg: SolverConfig) -> bool:
    try:
        _, estimate = picard_solve(u0, cfg)
    except SmallnessViolatedError:
        return False
    return estimate.converged and all(r < 1.0 for r in estimate.ratios)


def bisect_smallness_threshold(make_u0: Callable[[float], VectorField], cfg: SolverConfig,
                               lo: float, hi: float, steps: int = 12) -> Tuple[float, List[Tuple[float, bool]]]:
    """
    Amplitude A* where the Picard verdict flips, bracketed in [lo, hi] and halved
    `steps` times. Returns the bracket midpoint and the (amplitude, contractive) history.
    """
    if not 0 <= lo < hi:
        raise DomainError(f"bisection bracket [{lo}, {hi}] is not ordered")
    history = [(lo, _contracts(make_u0(lo), cfg)), (hi, _contracts(make_u0(hi), cfg))]
    if not history[0][1] or history[1][1]:
        raise DomainError(f"verdict does not flip on [{lo}, {hi}]: {history}")

    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        ok = _contracts(make_u0(mid), cfg)
        history.append((mid, ok))
        log.debug(f"Bisection: amplitude {mid:.6g} -> {'contractive' if ok else 'non-contractive'}")
        if ok:
            lo = mid
        else:
            hi = mid
    threshold = 0.5 * (lo + hi)
    log.info(f"Smallness threshold located at amplitude {threshold:.6g}")
    return threshold, history
