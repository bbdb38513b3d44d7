# -*- coding: utf-8 -*-
"""
Sobolev embedding Ḣ^{s1}_{q1} ↪ Ḣ^{s2}_{q2} along s1 - d/q1 = s2 - d/q2, s1 >= s2.
"""

import logging
import math

import numpy as np

from checks.common import FieldFamily, InequalityCheck, refinement_check
from spaces.norms import NormSpec, sobolev_norm
from spectral.grid import GridSpec
from utils.errors import HypothesisError

log = logging.getLogger(__name__)


def check_embedding(family: FieldFamily, s1: float, q1: float, s2: float, q2: float,
                    refine: bool = True) -> InequalityCheck:
    source, target = NormSpec(s1, q1), NormSpec(s2, q2)
    d = family.grid.d
    if not math.isclose(s1 - d / q1, s2 - d / q2, rel_tol=1e-12, abs_tol=1e-12):
        raise HypothesisError(f"embedding needs s1 - d/q1 = s2 - d/q2, got {s1 - d / q1} vs {s2 - d / q2}")
    if s1 < s2:
        raise HypothesisError(f"embedding needs s1 >= s2, got s1={s1}, s2={s2}")

    def ratios_on(grid: GridSpec) -> np.ndarray:
        out = []
        for f in family.fields(grid):
            norm = sobolev_norm(f, source)
            if norm > 0:
                out.append(sobolev_norm(f, target) / norm)
        return np.array(out)

    params = {"s1": s1, "q1": q1, "s2": s2, "q2": q2, "family": family.name}
    return refinement_check("embedding", params, family.grid, len(family), ratios_on, refine)
