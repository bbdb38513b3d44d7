# -*- coding: utf-8 -*-
"""
Theoretical decay exponents: velocity norms t^{(s+1+2n-d/q)/2}‖D_t^n u‖_{Ḣ^s_q}
and pressure norms t^{(s+2-d/q)/2}‖p‖_{Ḣ^s_q} stay bounded (and vanish as t→∞).
"""

import logging
from dataclasses import dataclass
from typing import Optional

from solver.derivatives import MAX_DERIVATIVE_ORDER
from spaces.kato import PRESSURE, VELOCITY, series_exponent
from spaces.norms import NormSpec
from utils.errors import DerivativeOrderError, DomainError

log = logging.getLogger(__name__)

SERIES_KINDS = (VELOCITY, PRESSURE)


@dataclass(frozen=True)
class ExponentSpec:
    s: float
    q: float
    n: int = 0
    kind: str = VELOCITY
    # integrability index of the critical data space Ḣ^{d/p-1}_p, when known
    p: Optional[float] = None

    def __post_init__(self):
        NormSpec(self.s, self.q)
        if self.kind not in SERIES_KINDS:
            raise DomainError(f"unknown series kind '{self.kind}'; expected one of {SERIES_KINDS}")
        if int(self.n) != self.n or not 0 <= self.n <= MAX_DERIVATIVE_ORDER:
            raise DomainError(f"derivative order n={self.n} must be an integer in [0, {MAX_DERIVATIVE_ORDER}]")
        if self.kind == PRESSURE and self.n != 0:
            raise DomainError("pressure exponents are defined for n = 0 only")
        if self.p is not None and not self.p > 1:
            raise DomainError(f"data index p={self.p} must exceed 1")

    @property
    def norm(self) -> NormSpec:
        return NormSpec(self.s, self.q)

    @property
    def label(self) -> str:
        return f"{self.kind}_s{self.s:g}_q{self.q:g}_n{self.n}"

    def validate(self, d: int, max_order: int = MAX_DERIVATIVE_ORDER):
        """
        Regularity floor: s >= d/p - 1 for velocity, s >= max(d/p - 1, 0) for pressure.
        n must not exceed the configured max_order.
        """
        if self.n > max_order:
            raise DerivativeOrderError(f"derivative order n={self.n} exceeds the configured maximum {max_order}")
        floor = d / self.p - 1.0 if self.p is not None else None
        if self.kind == PRESSURE:
            floor = max(floor if floor is not None else 0.0, 0.0)
        if floor is not None and self.s < floor - 1e-12:
            raise DomainError(f"{self.kind} exponent needs s >= {floor:g} in d={d}, got s={self.s:g}")


def theoretical_exponent(spec: ExponentSpec, d: int, max_order: int = MAX_DERIVATIVE_ORDER) -> float:
    spec.validate(d, max_order)
    return series_exponent(spec.norm, d, spec.n, spec.kind)
