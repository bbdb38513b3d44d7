# -*- coding: utf-8 -*-
"""
Power-law fitting of norm time series: least squares on log t against log value,
plus the rank-correlation trend of a rescaled series.
"""

import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from utils.errors import DomainError

log = logging.getLogger(__name__)

MIN_SAMPLES = 5
INCREASING = "increasing"
FLAT = "flat"
DECREASING = "decreasing"
TREND_THRESHOLD = 0.1


def _as_arrays(series) -> Tuple[np.ndarray, np.ndarray]:
    if isinstance(series, tuple) and len(series) == 2 and np.ndim(series[0]) == 1:
        times, values = series
    else:
        pairs = np.asarray(series, dtype=np.float64).reshape(-1, 2)
        times, values = pairs[:, 0], pairs[:, 1]
    return np.asarray(times, dtype=np.float64), np.asarray(values, dtype=np.float64)


def fit_decay_exponent(series, window: Optional[Sequence[float]] = None) -> Tuple[float, float]:
    """
    Slope of log(value) against log(t) over the window, i.e. the power of t
    (negative for decay), and the coefficient of determination.

    series: (t, value) pairs or a (times, values) tuple of arrays.
    """
    times, values = _as_arrays(series)
    if window is not None:
        keep = (times >= window[0]) & (times <= window[1])
        times, values = times[keep], values[keep]
    if times.size < MIN_SAMPLES:
        raise DomainError(f"need at least {MIN_SAMPLES} samples to fit an exponent, got {times.size}")
    if np.any(times <= 0):
        raise DomainError("power-law fits need strictly positive times")
    if np.any(~(values > 0)):
        raise DomainError("power-law fits need strictly positive values")

    log_t, log_v = np.log(times), np.log(values)
    # a flat series is fitted exactly by slope 0
    if np.ptp(log_v) == 0.0:
        return 0.0, 1.0
    ss_tot = float(np.sum((log_v - log_v.mean()) ** 2))
    fit = stats.linregress(log_t, log_v)
    ss_res = float(np.sum((log_v - (fit.intercept + fit.slope * log_t)) ** 2))
    return float(fit.slope), min(1.0, max(0.0, 1.0 - ss_res / ss_tot))


def tail_trend(times: np.ndarray, values: np.ndarray) -> str:
    """Sign of the Spearman correlation over the final third of the samples."""
    start = (2 * len(times)) // 3
    t_tail, v_tail = times[start:], values[start:]
    if len(t_tail) < 3 or np.ptp(v_tail) == 0:
        return FLAT
    rho = stats.spearmanr(t_tail, v_tail)[0]
    if rho is None or math.isnan(rho):
        return FLAT
    if rho > TREND_THRESHOLD:
        return INCREASING
    if rho < -TREND_THRESHOLD:
        return DECREASING
    return FLAT
