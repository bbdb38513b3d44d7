# -*- coding: utf-8 -*-
"""
Product estimate ‖fg‖_{Ḣ^s_r} <= C(‖f‖_{Ḣ^s_{p1}}‖g‖_{q1} + ‖f‖_{p2}‖g‖_{Ḣ^s_{q2}})
with 1/r = 1/p1 + 1/q1 = 1/p2 + 1/q2.
"""

import logging
import math
from typing import Tuple

import numpy as np

from checks.common import FieldFamily, InequalityCheck, refinement_check
from spaces.norms import NormSpec, lq_norm, sobolev_norm
from spectral.fields import SpectralField
from spectral.grid import GridSpec
from spectral.operators import dealiased_product
from utils.errors import ConfigError, DimensionError, HypothesisError

log = logging.getLogger(__name__)


def _hs(f: SpectralField, s: float, q: float) -> float:
    return sobolev_norm(f, NormSpec(s, q)) if s > 0 else lq_norm(f, q)


def product_terms(f: SpectralField, g: SpectralField, r: float, p1: float, q1: float,
                  p2: float, q2: float, s: float) -> Tuple[float, float, float]:
    """(‖fg‖_{Ḣ^s_r}, ‖f‖_{Ḣ^s_{p1}}‖g‖_{q1}, ‖f‖_{p2}‖g‖_{Ḣ^s_{q2}}) with a dealiased product."""
    lhs = _hs(dealiased_product(f, g), s, r)
    return lhs, _hs(f, s, p1) * lq_norm(g, q1), lq_norm(f, p2) * _hs(g, s, q2)


def check_product(f: FieldFamily, g: FieldFamily, r: float, p1: float, q1: float, p2: float, q2: float,
                  s: float, refine: bool = True) -> InequalityCheck:
    """Ratios over the index-wise pairs (f_i, g_i) of two families."""
    for label, value in (("r", r), ("p1", p1), ("q1", q1), ("p2", p2), ("q2", q2)):
        if not 1.0 < value < math.inf:
            raise ConfigError(f"product.{label}", f"must lie in (1, ∞), got {value}")
    if not (math.isclose(1 / r, 1 / p1 + 1 / q1, rel_tol=1e-12) and math.isclose(1 / r, 1 / p2 + 1 / q2, rel_tol=1e-12)):
        raise ConfigError("product.exponents", f"1/r = 1/p1 + 1/q1 = 1/p2 + 1/q2 fails for r={r}, p1={p1}, q1={q1}, p2={p2}, q2={q2}")
    if s < 0:
        raise HypothesisError(f"product estimate needs s >= 0, got s={s}")
    if len(f) != len(g) or f.grid != g.grid:
        raise DimensionError(f"product families must pair up on one grid ({len(f)} vs {len(g)} members)")

    def ratios_on(grid: GridSpec) -> np.ndarray:
        out = []
        for fi, gi in zip(f.fields(grid), g.fields(grid)):
            lhs, first, second = product_terms(fi, gi, r, p1, q1, p2, q2, s)
            if first + second > 0:
                out.append(lhs / (first + second))
        return np.array(out)

    params = {"r": r, "p1": p1, "q1": q1, "p2": p2, "q2": q2, "s": s, "family": f"{f.name}x{g.name}"}
    return refinement_check("product", params, f.grid, len(f), ratios_on, refine)
