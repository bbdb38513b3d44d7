# -*- coding: utf-8 -*-
"""
Equivalence of the heat characterization sup_t t^{-s/2}‖e^{tΔ}f‖_q with a
dyadic-shell estimate of the Ḃ^{s,∞}_q norm, s < 0.

The shell estimate is c_s·max_j (2^{j+1/2})^s ‖Δ_j f‖_q with shells
2^j <= |k| < 2^{j+1} and c_s = (-s/2)^{-s/2} e^{s/2}, the peak of
t^{-s/2}e^{-t|k|²}|k|^{-s}; on a single mode at a shell centre both agree.
"""

import logging
import math
from typing import Tuple

import numpy as np

from checks.common import FieldFamily, InequalityCheck, refinement_check
from spaces.norms import BesovSpec, besov_norm, lq_of_coeffs
from spectral.fields import SpectralField
from spectral.grid import GridSpec
from utils.errors import HypothesisError

log = logging.getLogger(__name__)


def heat_profile_constant(s: float) -> float:
    return (-s / 2.0) ** (-s / 2.0) * math.exp(s / 2.0)


def shell_masks(grid: GridSpec) -> Tuple[np.ndarray, int]:
    """Stacked indicators of the dyadic shells meeting the grid band, and the first shell index."""
    kmag = grid.kmag
    j_lo = math.floor(math.log2(grid.k_min))
    j_hi = math.floor(math.log2(float(np.max(kmag))))
    return np.stack([(kmag >= 2.0 ** j) & (kmag < 2.0 ** (j + 1)) for j in range(j_lo, j_hi + 1)]), j_lo


def shell_estimate(f: SpectralField, s: float, q: float) -> float:
    if s >= 0:
        raise HypothesisError(f"shell estimate of Ḃ^{{s,∞}}_q needs s < 0, got s={s}")
    masks, j_lo = shell_masks(f.grid)
    centres = 2.0 ** (np.arange(j_lo, j_lo + len(masks)) + 0.5)
    norms = lq_of_coeffs(f.grid, masks * f.coeffs[None], q)
    return heat_profile_constant(s) * float(np.max(centres ** s * norms))


def check_besov_equivalence(family: FieldFamily, s: float, q: float, refine: bool = True) -> InequalityCheck:
    """Two-sided: worst_ratio/fitted_C is the largest heat/shell ratio, lower_C the smallest."""
    if s >= 0:
        raise HypothesisError(f"Besov equivalence needs s < 0, got s={s}")

    def ratios_on(grid: GridSpec) -> np.ndarray:
        spec = BesovSpec.for_grid(grid, s, q)
        out = []
        for f in family.fields(grid):
            shells = shell_estimate(f, s, q)
            if shells > 0:
                out.append(besov_norm(f, spec) / shells)
        return np.array(out)

    params = {"s": s, "q": q, "family": family.name}
    return refinement_check("besov_equivalence", params, family.grid, len(family), ratios_on, refine, two_sided=True)
