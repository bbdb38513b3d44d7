# -*- coding: utf-8 -*-
"""
Heat smoothing estimate ‖Λ^s e^{tΔ}f‖_q <= C t^{-d/2(1/p-1/q)-s/2} ‖f‖_p.
"""

import logging
from typing import Sequence

import numpy as np

from checks.common import FieldFamily, InequalityCheck, refinement_check
from spaces.norms import NormSpec, lq_norm, sobolev_of_coeffs
from spectral.grid import GridSpec
from spectral.operators import heat_factor
from utils.errors import DomainError, HypothesisError

log = logging.getLogger(__name__)


def smoothing_exponent(d: int, p: float, q: float, s: float) -> float:
    return d / 2.0 * (1.0 / p - 1.0 / q) + s / 2.0


def check_smoothing(family: FieldFamily, p: float, q: float, s: float, t_grid: Sequence[float],
                    refine: bool = True) -> InequalityCheck:
    if not (1.0 < p <= q < np.inf):
        raise HypothesisError(f"smoothing check needs 1 < p <= q < ∞, got p={p}, q={q}")
    if s < 0:
        raise HypothesisError(f"smoothing check needs s >= 0, got s={s}")
    t_grid = np.asarray(t_grid, dtype=np.float64)
    if t_grid.size == 0 or np.any(t_grid <= 0) or np.any(t_grid > family.grid.validity_time * (1 + 1e-12)):
        raise DomainError(f"t_grid must lie in (0, {family.grid.validity_time:.4g}]")

    spec = NormSpec(s, q)
    weight = t_grid ** smoothing_exponent(family.grid.d, p, q, s)

    def ratios_on(grid: GridSpec) -> np.ndarray:
        out = []
        for f in family.fields(grid):
            denom = lq_norm(f, p)
            if denom == 0:
                continue
            smoothed = f.coeffs[None] * heat_factor(grid, t_grid)
            out.append(sobolev_of_coeffs(grid, smoothed, spec, rank=0) * weight / denom)
        return np.concatenate(out) if out else np.zeros(0)

    params = {"p": p, "q": q, "s": s, "family": family.name, "t_count": int(t_grid.size)}
    return refinement_check("smoothing", params, family.grid, len(family) * int(t_grid.size), ratios_on, refine)
