# -*- coding: utf-8 -*-
"""
Solver settings and the contraction diagnostics returned by the Picard solver.
"""

import hashlib
import json
import logging
from dataclasses import asdict, dataclass, field
from typing import List, Tuple

import numpy as np

from solver.derivatives import MAX_DERIVATIVE_ORDER
from spaces.norms import NormSpec
from utils.errors import DomainError

log = logging.getLogger(__name__)

MESH_KINDS = ("uniform", "graded")
CONTRACTIVE = "contractive"
NON_CONTRACTIVE = "non-contractive"


@dataclass(frozen=True)
class SolverConfig:
    T: float
    n_steps: int
    mesh: str = "uniform"
    grading: float = 2.0
    picard_tol: float = 1e-10
    picard_max_iter: int = 40
    monitor_specs: Tuple[NormSpec, ...] = ()
    nonlinear: bool = True
    corrector_max_iter: int = 8
    corrector_tol: float = 1e-14
    max_derivative_order: int = 4

    def __post_init__(self):
        if not self.T > 0:
            raise DomainError(f"horizon T={self.T} must be positive")
        if int(self.n_steps) != self.n_steps or self.n_steps < 2:
            raise DomainError(f"n_steps={self.n_steps} must be an integer >= 2")
        if not self.picard_tol > 0:
            raise DomainError(f"picard_tol={self.picard_tol} must be positive")
        if self.picard_max_iter < 1:
            raise DomainError("picard_max_iter must be at least 1")
        if self.mesh not in MESH_KINDS:
            raise DomainError(f"unknown mesh '{self.mesh}'; expected one of {MESH_KINDS}")
        if not self.grading > 0:
            raise DomainError(f"mesh grading exponent must be positive, got {self.grading}")
        order = self.max_derivative_order
        if int(order) != order or not 0 <= order <= MAX_DERIVATIVE_ORDER:
            raise DomainError(f"max_derivative_order={order} must be an integer in [0, {MAX_DERIVATIVE_ORDER}]")
        object.__setattr__(self, "monitor_specs", tuple(self.monitor_specs))

    def times(self) -> np.ndarray:
        """Mesh nodes t_0 = 0 < ... < t_n = T; graded nodes are T·(i/n)^γ."""
        frac = np.arange(self.n_steps + 1) / self.n_steps
        if self.mesh == "graded":
            frac = frac ** self.grading
        return self.T * frac

    def monitor_spec(self, d: int) -> NormSpec:
        """First monitor spec, defaulting to K⁰ with q̃ = 2d."""
        return self.monitor_specs[0] if self.monitor_specs else NormSpec(0.0, 2.0 * d)

    def fingerprint(self) -> str:
        payload = json.dumps(asdict(self), sort_keys=True, default=str)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


@dataclass
class ContractionEstimate:
    eta_hat: float = 0.0
    y_norm: float = 0.0
    ratios: List[float] = field(default_factory=list)
    iterations: int = 0
    residual: float = 0.0
    converged: bool = False

    @property
    def verdict(self) -> str:
        """Contractive when every observed ratio is < 1; with no ratios, only a converged solve counts."""
        if not self.ratios:
            return CONTRACTIVE if self.converged else NON_CONTRACTIVE
        return CONTRACTIVE if all(r < 1.0 for r in self.ratios) else NON_CONTRACTIVE

    @property
    def smallness_product(self) -> float:
        """4·η̂·‖y‖, the empirical stand-in for the fixed-point smallness condition."""
        return 4.0 * self.eta_hat * self.y_norm

    @property
    def smallness_satisfied(self) -> bool:
        return self.smallness_product < 1.0

    def to_dict(self) -> dict:
        return {
            "eta_hat": self.eta_hat,
            "y_norm": self.y_norm,
            "ratios": list(self.ratios),
            "iterations": self.iterations,
            "residual": self.residual,
            "converged": self.converged,
            "verdict": self.verdict,
            "smallness_product": self.smallness_product,
        }
