# -*- coding: utf-8 -*-
"""
L^q boundedness of the Riesz transforms, ‖R_j f‖_q <= C‖f‖_q for 1 < q < ∞.
"""

import logging

import numpy as np

from checks.common import FieldFamily, InequalityCheck, refinement_check
from spaces.norms import lq_norm
from spectral.grid import GridSpec
from spectral.operators import riesz_transform
from utils.errors import DomainError

log = logging.getLogger(__name__)


def check_riesz_bound(family: FieldFamily, q: float, refine: bool = True) -> InequalityCheck:
    if not 1.0 < q < np.inf:
        raise DomainError(f"Riesz check needs q in (1, ∞), got {q}")

    def ratios_on(grid: GridSpec) -> np.ndarray:
        out = []
        for f in family.fields(grid):
            norm = lq_norm(f, q)
            if norm == 0:
                continue
            out.extend(lq_norm(riesz_transform(f, j), q) / norm for j in range(grid.d))
        return np.array(out)

    params = {"q": q, "family": family.name}
    return refinement_check("riesz_bound", params, family.grid, len(family) * family.grid.d, ratios_on, refine)
