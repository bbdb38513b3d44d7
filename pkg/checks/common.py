# -*- coding: utf-8 -*-
"""
Shared pieces of the inequality checks: the result record, sample families of
test fields, and the N -> 2N refinement harness.

A family stores builders rather than arrays, so the same functions can be
re-sampled on a refined grid.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from spectral.fields import SpectralField
from spectral.grid import GridSpec
from spectral.initial_data import gaussian_field, random_slope_scalar, single_mode
from utils.errors import DimensionError

log = logging.getLogger(__name__)

PASS = "PASS"
FAIL = "FAIL"
STABILITY_LIMIT = 2.0

CHECK_TABLE_HEADER = ["name", "params", "worst_ratio", "fitted_C", "stability", "verdict"]

Builder = Callable[[GridSpec], SpectralField]


@dataclass
class InequalityCheck:
    name: str
    params: Dict[str, Any]
    sample_count: int
    worst_ratio: float
    fitted_C: float
    refinement_stability: float = 1.0
    lower_C: Optional[float] = None
    failure: Optional[str] = None

    @property
    def verdict(self) -> str:
        if self.failure or not math.isfinite(self.worst_ratio):
            return FAIL
        return FAIL if self.refinement_stability > STABILITY_LIMIT else PASS

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def params_text(self) -> str:
        return ";".join(f"{k}={v}" for k, v in sorted(self.params.items()))

    def table_row(self) -> List[str]:
        return [
            self.name, self.params_text(), f"{self.worst_ratio:.17g}", f"{self.fitted_C:.17g}",
            f"{self.refinement_stability:.17g}", self.verdict,
        ]


def prolong(f: SpectralField, grid: GridSpec) -> SpectralField:
    """Exact trigonometric interpolation of f onto a finer grid of the same box."""
    src = f.grid
    if src.d != grid.d or src.L != grid.L or grid.N < src.N:
        raise DimensionError(f"cannot interpolate from {src} to {grid}")
    if grid == src:
        return f
    n = np.fft.fftfreq(src.N, 1.0 / src.N).astype(int)
    # the source Nyquist column has no unique image on the finer grid
    keep = n != -(src.N // 2)
    idx_src = np.nonzero(keep)[0]
    idx_dst = n[keep] % grid.N
    coeffs = np.zeros(grid.shape, dtype=np.complex128)
    coeffs[np.ix_(*([idx_dst] * grid.d))] = f.coeffs[np.ix_(*([idx_src] * grid.d))]
    return SpectralField(grid, coeffs)


@dataclass(frozen=True)
class FieldFamily:
    name: str
    grid: GridSpec
    builders: Tuple[Tuple[str, Builder], ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.builders)

    def __add__(self, other: "FieldFamily") -> "FieldFamily":
        if self.grid != other.grid:
            raise DimensionError("cannot merge families on different grids")
        return FieldFamily(f"{self.name}+{other.name}", self.grid, self.builders + other.builders)

    @property
    def labels(self) -> List[str]:
        return [label for label, _ in self.builders]

    def fields(self, grid: Optional[GridSpec] = None) -> List[SpectralField]:
        grid = grid or self.grid
        return [build(grid) for _, build in self.builders]

    def scaled(self, factor: float) -> "FieldFamily":
        builders = tuple((label, (lambda g, b=build: b(g) * factor)) for label, build in self.builders)
        return FieldFamily(f"{self.name}*{factor:g}", self.grid, builders)

    @classmethod
    def from_fields(cls, name: str, fields: Sequence[SpectralField]) -> "FieldFamily":
        grid = fields[0].grid
        builders = tuple((f"{name}[{i}]", (lambda g, f=f: prolong(f, g))) for i, f in enumerate(fields))
        return cls(name, grid, builders)


def _padded(n: Sequence[int], d: int) -> Tuple[int, ...]:
    return tuple(list(n)[:d]) + (0,) * max(0, d - len(n))


def mode_family(grid: GridSpec, modes: Iterable[Sequence[int]] = ((1, 0), (0, 2), (1, 1), (2, 3))) -> FieldFamily:
    builders = tuple(
        (f"mode{_padded(n, grid.d)}", (lambda g, n=_padded(n, grid.d): single_mode(g, n))) for n in modes
    )
    return FieldFamily("modes", grid, builders)


def gaussian_family(grid: GridSpec, widths: Iterable[float] = (0.01, 0.03, 0.1)) -> FieldFamily:
    """Mean-zero periodized Gaussians G_a with a = width·L²."""
    builders = tuple(
        (f"gaussian(a={w:g}L²)", (lambda g, w=w: gaussian_field(g, w * g.L ** 2))) for w in widths
    )
    return FieldFamily("gaussians", grid, builders)


def sharp_gaussian_family(grid: GridSpec, cells: Iterable[float] = (4.0, 8.0)) -> FieldFamily:
    """
    Mean-zero Gaussians G_a with a = cells·h², h the spacing of the grid they are
    built on: they sharpen under refinement, so a bound with the wrong scaling
    grows by a power of 2 at 2N.
    """
    builders = tuple(
        (f"gaussian(a={c:g}h²)", (lambda g, c=c: gaussian_field(g, c * g.spacing ** 2))) for c in cells
    )
    return FieldFamily("sharp_gaussians", grid, builders)


def random_family(grid: GridSpec, betas: Iterable[float] = (1.0, 1.5, 2.0), seeds: Iterable[int] = range(20),
                  k_max: Optional[int] = None) -> FieldFamily:
    """Random power-law fields; without k_max the band fills the dealiased range of each grid."""
    builders = tuple(
        (f"random(beta={b:g},seed={s})", (lambda g, b=b, s=s: random_slope_scalar(g, b, s, k_max=k_max)))
        for b in betas for s in seeds
    )
    return FieldFamily("random_slope", grid, builders)


def default_family(grid: GridSpec) -> FieldFamily:
    return mode_family(grid) + gaussian_family(grid) + sharp_gaussian_family(grid) + random_family(grid)


def refinement_check(name: str, params: Dict[str, Any], grid: GridSpec, sample_count: int,
                     ratios_on: Callable[[GridSpec], np.ndarray], refine: bool = True,
                     two_sided: bool = False) -> InequalityCheck:
    """
    Evaluates the per-sample ratios on grid (and on grid.refined() when refine is set)
    and folds them into an InequalityCheck. Two-sided checks also record the
    smallest ratio and count its drift in the stability figure.
    """
    coarse = np.asarray(ratios_on(grid), dtype=np.float64)
    worst = float(np.max(coarse)) if coarse.size else 0.0
    lower = float(np.min(coarse)) if (two_sided and coarse.size) else None
    stability = 1.0
    if refine:
        fine_grid = grid.refined()
        fine = np.asarray(ratios_on(fine_grid), dtype=np.float64)
        worst_fine = float(np.max(fine)) if fine.size else 0.0
        stability = worst_fine / worst if worst > 0 else 1.0
        if two_sided and lower:
            stability = max(stability, lower / float(np.min(fine)) if np.min(fine) > 0 else math.inf)
        log.debug(f"{name}: worst ratio {worst:.6g} at N={grid.N}, {worst_fine:.6g} at N={fine_grid.N}")

    check = InequalityCheck(name, dict(params), sample_count, worst, worst, stability, lower)
    log.info(f"Check {name} {check.params_text()}: C≈{worst:.6g}, stability {stability:.4f} -> {check.verdict}")
    return check
