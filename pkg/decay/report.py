# -*- coding: utf-8 -*-
"""
Decay reports: fit the decay exponent of a norm series on the observable window
and compare it with the theoretical envelope.

On a periodic box the algebraic decay of the whole-space theory is only visible
before the lowest mode dominates, so windows are clipped to
[10·(L/N)², (L/2π)²/4].
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from decay.exponents import ExponentSpec, theoretical_exponent
from decay.fitting import FLAT, INCREASING, fit_decay_exponent, tail_trend
from solver.derivatives import MAX_DERIVATIVE_ORDER
from spaces.kato import NormSeries, rescaled_norm_series
from spaces.trajectory import Trajectory
from utils.errors import DomainError

log = logging.getLogger(__name__)

PASS = "PASS"
FAIL = "FAIL"
DEFAULT_SLACK = 0.15

EXPONENT_TABLE_HEADER = ["kind", "s", "q", "n", "theoretical", "fitted", "r_squared", "t_lo", "t_hi", "trend", "verdict"]


@dataclass(frozen=True)
class DecayReport:
    spec: ExponentSpec
    fitted_exponent: float
    theoretical_exponent: float
    window: Tuple[float, float]
    r_squared: float
    rescaled_trend: str
    verdict: str
    degenerate: bool = False
    sample_count: int = 0
    slack: float = DEFAULT_SLACK

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_record(self) -> Dict[str, str]:
        """Ordered key/value record for the text report."""
        return {
            "spec": self.spec.label,
            "kind": self.spec.kind,
            "s": f"{self.spec.s:.17g}",
            "q": f"{self.spec.q:.17g}",
            "n": str(self.spec.n),
            "theoretical_exponent": f"{self.theoretical_exponent:.17g}",
            "fitted_exponent": f"{self.fitted_exponent:.17g}",
            "r_squared": f"{self.r_squared:.17g}",
            "window": f"{self.window[0]:.17g} {self.window[1]:.17g}",
            "samples": str(self.sample_count),
            "rescaled_trend": self.rescaled_trend,
            "slack": f"{self.slack:.17g}",
            "degenerate": "yes" if self.degenerate else "no",
            "verdict": self.verdict,
        }

    def table_row(self) -> List[str]:
        return [
            self.spec.kind, f"{self.spec.s:.17g}", f"{self.spec.q:.17g}", str(self.spec.n),
            f"{self.theoretical_exponent:.17g}", f"{self.fitted_exponent:.17g}", f"{self.r_squared:.17g}",
            f"{self.window[0]:.17g}", f"{self.window[1]:.17g}", self.rescaled_trend, self.verdict,
        ]


def observable_window(traj: Trajectory, window: Optional[Sequence[float]] = None) -> Tuple[float, float]:
    """Clips a requested window to the resolved, pre-spectral-gap part of the horizon."""
    grid = traj.grid
    lo_bound = grid.resolve_time
    hi_bound = min(grid.validity_time / 4.0, traj.horizon)
    if lo_bound >= hi_bound:
        raise DomainError(
            f"no observable decay window: resolve time {lo_bound:.4g} >= upper bound {hi_bound:.4g} "
            f"(refine N or enlarge L/T)"
        )
    requested = (lo_bound, hi_bound) if window is None else (float(window[0]), float(window[1]))
    if requested[0] >= requested[1]:
        raise DomainError(f"decay window {requested} is empty")
    t_lo, t_hi = max(requested[0], lo_bound), min(requested[1], hi_bound)
    if t_lo >= t_hi:
        raise DomainError(
            f"decay window {requested} lies outside the observable range [{lo_bound:.4g}, {hi_bound:.4g}]"
        )
    if (t_lo, t_hi) != requested:
        log.warning(f"Decay window {requested} clipped to [{t_lo:.4g}, {t_hi:.4g}]")
    return t_lo, t_hi


def report_from_series(series: NormSeries, spec: ExponentSpec, theoretical: float,
                       window: Tuple[float, float], slack: float = DEFAULT_SLACK) -> DecayReport:
    if series.raw.size == 0 or float(np.max(series.raw)) == 0.0:
        log.info(f"Decay report {spec.label}: all norms vanish, degenerate PASS")
        return DecayReport(spec, math.nan, theoretical, window, 1.0, FLAT, PASS, True, int(series.raw.size), slack)

    fitted, r_squared = fit_decay_exponent((series.times, series.raw))
    trend = tail_trend(series.times, series.rescaled)
    verdict = PASS if fitted <= -theoretical + slack and trend != INCREASING else FAIL
    log.info(
        f"Decay report {spec.label}: fitted {fitted:.4f} vs envelope {-theoretical:.4f} "
        f"(r²={r_squared:.4f}, trend {trend}) -> {verdict}"
    )
    return DecayReport(spec, fitted, theoretical, window, r_squared, trend, verdict, False, int(series.raw.size), slack)


def decay_report(traj: Trajectory, spec: ExponentSpec, window: Optional[Sequence[float]] = None,
                 slack: float = DEFAULT_SLACK, max_order: int = MAX_DERIVATIVE_ORDER) -> DecayReport:
    """
    PASS iff the fitted exponent of ‖·‖ is at most -theoretical + slack and the
    rescaled series is not increasing over the final third of the window.
    """
    theoretical = theoretical_exponent(spec, traj.grid.d, max_order)
    t_lo, t_hi = observable_window(traj, window)
    series = rescaled_norm_series(traj.window(t_lo, t_hi), spec.norm, spec.n, spec.kind, max_order)
    return report_from_series(series, spec, theoretical, (t_lo, t_hi), slack)
