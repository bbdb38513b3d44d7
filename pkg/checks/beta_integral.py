# -*- coding: utf-8 -*-
"""
The two halves of the Beta-type integral
    ∫₀^{t/2} (t-τ)^{-γ} τ^{-θ} dτ = C·t^{1-γ-θ}    (θ < 1)
    ∫_{t/2}^t (t-τ)^{-γ} τ^{-θ} dτ = C·t^{1-γ-θ}    (γ < 1)
by adaptive quadrature after removing the endpoint singularity.
"""

import logging
import math
from typing import Iterable, Tuple

from scipy import integrate, special

from checks.common import InequalityCheck
from utils.errors import DivergentIntegralError, DomainError, NsDecayError

log = logging.getLogger(__name__)

LOWER = "lower"
UPPER = "upper"
SCALING_TIMES = (1.0, 2.0, 5.0)
SCALING_TOL = 1e-8
QUAD_TOL = 1e-10


def _lower_half(gamma: float, theta: float, t: float) -> float:
    # τ = w^{1/(1-θ)} turns τ^{-θ}dτ into dw/(1-θ)
    power = 1.0 / (1.0 - theta)
    upper = (t / 2.0) ** (1.0 - theta)
    value, _ = integrate.quad(
        lambda w: (t - w ** power) ** (-gamma), 0.0, upper, epsabs=0.0, epsrel=QUAD_TOL * 1e-2, limit=200
    )
    return value * power


def half_integral(gamma: float, theta: float, half: str, t: float = 1.0) -> float:
    """One half of the integral at time t."""
    if t <= 0:
        raise DomainError(f"t must be positive, got {t}")
    if half == LOWER:
        if theta >= 1:
            raise DivergentIntegralError(f"lower half diverges for θ={theta} >= 1")
        return _lower_half(gamma, theta, t)
    if half == UPPER:
        if gamma >= 1:
            raise DivergentIntegralError(f"upper half diverges for γ={gamma} >= 1")
        # σ = t - τ mirrors the upper half onto the lower one
        return _lower_half(theta, gamma, t)
    raise DomainError(f"half must be '{LOWER}' or '{UPPER}', got '{half}'")


def beta_integral(gamma: float, theta: float, half: str) -> float:
    """
    The constant C of the half integral. Evaluates at t ∈ {1, 2, 5} and requires
    value·t^{γ+θ-1} to agree within 1e-8 before returning the t = 1 value.
    """
    scaled = [half_integral(gamma, theta, half, t) * t ** (gamma + theta - 1.0) for t in SCALING_TIMES]
    spread = max(abs(v - scaled[0]) for v in scaled) / max(abs(scaled[0]), 1e-300)
    if spread > SCALING_TOL:
        log.error(f"Beta integral γ={gamma}, θ={theta} ({half}) breaks t-scaling: spread {spread:.3e}")
        raise NsDecayError(f"t-scaling identity violated by {spread:.3e} for γ={gamma}, θ={theta}, {half}")
    return scaled[0]


def complete_beta_check(gamma: float, theta: float) -> Tuple[float, float, float]:
    """(lower + upper, B(1-γ, 1-θ), relative error)."""
    total = beta_integral(gamma, theta, LOWER) + beta_integral(gamma, theta, UPPER)
    exact = float(special.beta(1.0 - gamma, 1.0 - theta))
    return total, exact, abs(total - exact) / abs(exact)


def check_beta_integrals(cases: Iterable[Tuple[float, float]]) -> InequalityCheck:
    """Suite wrapper: worst ratio of quadrature to closed form over (γ, θ) cases."""
    cases = list(cases)
    worst, worst_error = 0.0, 0.0
    for gamma, theta in cases:
        total, exact, error = complete_beta_check(gamma, theta)
        worst = max(worst, total / exact)
        worst_error = max(worst_error, error)
        log.debug(f"Beta γ={gamma}, θ={theta}: quadrature {total:.15g} vs {exact:.15g}")
    check = InequalityCheck(
        "beta_integral", {"cases": len(cases), "max_rel_error": f"{worst_error:.3e}"}, len(cases), worst, worst
    )
    if worst_error > SCALING_TOL:
        check.failure = f"relative error {worst_error:.3e} exceeds {SCALING_TOL:g}"
    log.info(f"Check beta_integral over {len(cases)} cases: max relative error {worst_error:.3e} -> {check.verdict}")
    return check
