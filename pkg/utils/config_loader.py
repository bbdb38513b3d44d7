# -*- coding: utf-8 -*-
"""
Loads experiment configuration files and validates them into an ExperimentConfig.

The YAML file is read with safe_load, "${VAR}" values are filled from the
environment (after .env is loaded), and every section is checked strictly:
unknown keys and out-of-range values raise ConfigError naming the dotted path.
"""

import logging
import math
import os
import re
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple

import pytz
import yaml
from dotenv import load_dotenv

from decay.exponents import ExponentSpec
from solver.config import MESH_KINDS, SolverConfig
from spaces.norms import NormSpec
from spectral.grid import GridSpec
from spectral.initial_data import INITIAL_DATA_KINDS
from utils.errors import ConfigError, NsDecayError

log = logging.getLogger(__name__)

OUTPUT_DIR_ENV = "NSDECAY_OUTPUT_DIR"
SOLVER_METHODS = ("integrate", "picard")
FAMILIES = ("default", "modes", "gaussians", "sharp_gaussians", "random")

_ENV_PATTERN = re.compile(r"^\$\{([A-Za-z_][A-Za-z0-9_]*)\}$")
_PI_PATTERN = re.compile(r"^\s*([0-9.eE+-]*)\s*\*?\s*pi\s*$")

# allowed keys per suite check (besides 'check'); N, family and refine are shared
_SUITE_KEYS = {
    "smoothing": {"p", "q", "s", "t_grid", "t_count"},
    "product": {"r", "p1", "q1", "p2", "q2", "s"},
    "beta_integral": {"cases"},
    "riesz_bound": {"q"},
    "embedding": {"s1", "q1", "s2", "q2"},
    "besov_equivalence": {"s", "q"},
}
_SUITE_SHARED = {"N", "family", "refine"}
_SUITE_OPTIONAL = {"t_grid", "t_count"}


def substitute_env_vars(item: Any, path: str = "") -> Any:
    """Recursively replaces "${VAR}" strings with environment values."""
    if isinstance(item, dict):
        return {k: substitute_env_vars(v, f"{path}.{k}" if path else str(k)) for k, v in item.items()}
    if isinstance(item, list):
        return [substitute_env_vars(v, f"{path}[{i}]") for i, v in enumerate(item)]
    if isinstance(item, str):
        match = _ENV_PATTERN.match(item)
        if match:
            env_value = os.getenv(match.group(1))
            if not env_value:
                raise ConfigError(path, f"environment variable '{match.group(1)}' is not set")
            return env_value
    return item


def load_config(config_path: str) -> Dict[str, Any]:
    """Loads the YAML configuration file and substitutes environment variables."""
    log.info(f"Loading configuration from '{config_path}'...")
    try:
        with open(config_path, "r", encoding="utf-8") as f:
            config = yaml.safe_load(f)
    except FileNotFoundError:
        raise ConfigError("", f"configuration file not found at '{config_path}'")
    except yaml.YAMLError as e:
        raise ConfigError("", f"configuration file '{config_path}' is not valid YAML: {e}")
    if not isinstance(config, dict):
        raise ConfigError("", "configuration must be a mapping of sections")

    load_dotenv()
    config = substitute_env_vars(config)
    override = os.getenv(OUTPUT_DIR_ENV)
    if override:
        log.info(f"Output directory overridden by {OUTPUT_DIR_ENV}: {override}")
        config["output_dir"] = override
    log.info("Configuration loaded successfully.")
    return config


# --- field helpers ---

def _section(raw: Any, path: str, allowed: Dict[str, Any]) -> Dict[str, Any]:
    """Merges defaults into a mapping after rejecting unknown keys."""
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError(path, "must be a mapping")
    unknown = sorted(set(raw) - set(allowed))
    if unknown:
        raise ConfigError(f"{path}.{unknown[0]}" if path else unknown[0], f"unknown key (allowed: {sorted(allowed)})")
    return {**allowed, **raw}


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool):
        raise ConfigError(path, f"expected a number, got {value!r}")
    if isinstance(value, str):
        # "8pi" / "2*pi" / "pi"
        match = _PI_PATTERN.match(value)
        if match:
            factor = match.group(1)
            return (float(factor) if factor else 1.0) * math.pi
        if value.strip().lower() in ("inf", "infinity"):
            return math.inf
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(path, f"expected a number, got {value!r}")


def _integer(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
        raise ConfigError(path, f"expected an integer, got {value!r}")
    return int(value)


def _flag(value: Any, path: str) -> bool:
    if not isinstance(value, bool):
        raise ConfigError(path, f"expected true or false, got {value!r}")
    return value


def _lebesgue_index(value: Any, path: str) -> float:
    q = _number(value, path)
    if not 1.0 < q < math.inf:
        raise ConfigError(path, f"must lie in (1, ∞), got {q:g}")
    return q


def _wrapped(path: str, build, *args, **kwargs):
    try:
        return build(*args, **kwargs)
    except ConfigError:
        raise
    except (NsDecayError, TypeError) as e:
        raise ConfigError(path, str(e))


@dataclass(frozen=True)
class SuiteSpec:
    check: str
    params: Dict[str, Any] = field(default_factory=dict)
    N: Optional[int] = None
    family: str = "default"
    refine: bool = True

    def to_dict(self) -> Dict[str, Any]:
        out = {"check": self.check, **self.params, "family": self.family, "refine": self.refine}
        if self.N is not None:
            out["N"] = self.N
        return out


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    timezone: str
    logging: Dict[str, Any]
    grid: GridSpec
    initial_kind: str
    initial_params: Dict[str, Any]
    solver: SolverConfig
    method: str
    norm_specs: Tuple[ExponentSpec, ...]
    decay_window: Optional[Tuple[float, float]]
    decay_slack: float
    suites: Tuple[SuiteSpec, ...]
    output_dir: str
    notify: Dict[str, Any]

    @classmethod
    def from_dict(cls, raw: Dict[str, Any]) -> "ExperimentConfig":
        top = _section(raw, "", {
            "general": None, "logging": None, "grid": None, "initial_data": None, "solver": None,
            "norm_specs": None, "decay": None, "suites": None, "output_dir": "./runs/latest", "notify": None,
        })

        general = _section(top["general"], "general", {"name": "experiment", "timezone": "UTC"})
        try:
            pytz.timezone(str(general["timezone"]))
        except pytz.UnknownTimeZoneError:
            raise ConfigError("general.timezone", f"unknown timezone {general['timezone']!r}")
        logging_cfg = _section(top["logging"], "logging", {"level": "INFO", "log_dir": "./logs", "max_days": 7})
        if str(logging_cfg["level"]).upper() not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ConfigError("logging.level", f"unknown level {logging_cfg['level']!r}")
        logging_cfg["max_days"] = _integer(logging_cfg["max_days"], "logging.max_days")

        if top["grid"] is None:
            raise ConfigError("grid", "section is required")
        grid_raw = _section(top["grid"], "grid", {"d": 2, "N": 64, "L": 2 * math.pi})
        grid = _wrapped("grid", GridSpec, _integer(grid_raw["d"], "grid.d"), _integer(grid_raw["N"], "grid.N"),
                        _number(grid_raw["L"], "grid.L"))

        initial = _section(top["initial_data"], "initial_data", {"kind": "taylor_green", "params": {}})
        if initial["kind"] not in INITIAL_DATA_KINDS:
            raise ConfigError("initial_data.kind", f"unknown kind {initial['kind']!r}; expected one of {INITIAL_DATA_KINDS}")
        if not isinstance(initial["params"] or {}, dict):
            raise ConfigError("initial_data.params", "must be a mapping")

        solver, method = cls._solver_from(top["solver"])
        norm_specs = cls._norm_specs_from(top["norm_specs"], grid.d, solver.max_derivative_order)

        decay = _section(top["decay"], "decay", {"window": None, "slack": 0.15})
        window = None
        if decay["window"] is not None:
            if not isinstance(decay["window"], (list, tuple)) or len(decay["window"]) != 2:
                raise ConfigError("decay.window", "expected [t_lo, t_hi]")
            window = (_number(decay["window"][0], "decay.window[0]"), _number(decay["window"][1], "decay.window[1]"))
            if not 0 <= window[0] < window[1]:
                raise ConfigError("decay.window", f"needs 0 <= t_lo < t_hi, got {list(window)}")
        slack = _number(decay["slack"], "decay.slack")
        if slack < 0:
            raise ConfigError("decay.slack", "must be non-negative")

        suites = cls._suites_from(top["suites"])
        notify = _section(top["notify"], "notify", {"enabled": False, "webhook_url": None})
        _flag(notify["enabled"], "notify.enabled")
        if notify["enabled"] and not notify["webhook_url"]:
            raise ConfigError("notify.webhook_url", "required when notify.enabled is true")

        return cls(
            name=str(general["name"]), timezone=str(general["timezone"]), logging=logging_cfg, grid=grid,
            initial_kind=initial["kind"], initial_params=dict(initial["params"] or {}), solver=solver,
            method=method, norm_specs=norm_specs, decay_window=window, decay_slack=slack, suites=suites,
            output_dir=str(top["output_dir"]), notify=notify,
        )

    @staticmethod
    def _solver_from(raw: Any) -> Tuple[SolverConfig, str]:
        defaults = SolverConfig(T=1.0, n_steps=2)
        section = _section(raw, "solver", {
            "method": "integrate", "T": None, "n_steps": None, "mesh": defaults.mesh, "grading": defaults.grading,
            "picard_tol": defaults.picard_tol, "picard_max_iter": defaults.picard_max_iter, "monitor_specs": [],
            "nonlinear": defaults.nonlinear, "corrector_max_iter": defaults.corrector_max_iter,
            "corrector_tol": defaults.corrector_tol, "max_derivative_order": defaults.max_derivative_order,
        })
        if section["method"] not in SOLVER_METHODS:
            raise ConfigError("solver.method", f"unknown method {section['method']!r}; expected one of {SOLVER_METHODS}")
        for key in ("T", "n_steps"):
            if section[key] is None:
                raise ConfigError(f"solver.{key}", "is required")
        if section["mesh"] not in MESH_KINDS:
            raise ConfigError("solver.mesh", f"unknown mesh {section['mesh']!r}; expected one of {MESH_KINDS}")
        monitors = []
        for i, spec in enumerate(section["monitor_specs"] or []):
            item = _section(spec, f"solver.monitor_specs[{i}]", {"s": 0.0, "q": None})
            monitors.append(NormSpec(_number(item["s"], f"solver.monitor_specs[{i}].s"),
                                     _lebesgue_index(item["q"], f"solver.monitor_specs[{i}].q")))
        solver = _wrapped(
            "solver", SolverConfig,
            T=_number(section["T"], "solver.T"),
            n_steps=_integer(section["n_steps"], "solver.n_steps"),
            mesh=section["mesh"],
            grading=_number(section["grading"], "solver.grading"),
            picard_tol=_number(section["picard_tol"], "solver.picard_tol"),
            picard_max_iter=_integer(section["picard_max_iter"], "solver.picard_max_iter"),
            monitor_specs=tuple(monitors),
            nonlinear=_flag(section["nonlinear"], "solver.nonlinear"),
            corrector_max_iter=_integer(section["corrector_max_iter"], "solver.corrector_max_iter"),
            corrector_tol=_number(section["corrector_tol"], "solver.corrector_tol"),
            max_derivative_order=_integer(section["max_derivative_order"], "solver.max_derivative_order"),
        )
        return solver, section["method"]

    @staticmethod
    def _norm_specs_from(raw: Any, d: int, max_order: int) -> Tuple[ExponentSpec, ...]:
        if raw is None:
            return ()
        if not isinstance(raw, list):
            raise ConfigError("norm_specs", "must be a list")
        specs = []
        for i, item in enumerate(raw):
            path = f"norm_specs[{i}]"
            entry = _section(item, path, {"s": 0.0, "q": None, "n": 0, "kind": "velocity", "p": None})
            p = None if entry["p"] is None else _number(entry["p"], f"{path}.p")
            spec = _wrapped(path, ExponentSpec, _number(entry["s"], f"{path}.s"), _lebesgue_index(entry["q"], f"{path}.q"),
                            _integer(entry["n"], f"{path}.n"), str(entry["kind"]), p)
            _wrapped(path, spec.validate, d, max_order)
            specs.append(spec)
        return tuple(specs)

    @staticmethod
    def _suites_from(raw: Any) -> Tuple[SuiteSpec, ...]:
        if raw is None:
            return ()
        if not isinstance(raw, list):
            raise ConfigError("suites", "must be a list")
        suites = []
        for i, item in enumerate(raw):
            path = f"suites[{i}]"
            if not isinstance(item, dict) or "check" not in item:
                raise ConfigError(path, "each suite needs a 'check' key")
            check = item["check"]
            if check not in _SUITE_KEYS:
                raise ConfigError(f"{path}.check", f"unknown check {check!r}; expected one of {sorted(_SUITE_KEYS)}")
            allowed = {key: None for key in _SUITE_KEYS[check] | _SUITE_SHARED}
            entry = _section({k: v for k, v in item.items() if k != "check"}, path, allowed)
            family = entry["family"] or "default"
            if family not in FAMILIES:
                raise ConfigError(f"{path}.family", f"unknown family {family!r}; expected one of {FAMILIES}")
            params = {}
            for key in sorted(_SUITE_KEYS[check]):
                value = entry[key]
                if value is None:
                    if key not in _SUITE_OPTIONAL:
                        raise ConfigError(f"{path}.{key}", "is required")
                    continue
                if key in ("q", "p", "r", "p1", "q1", "p2", "q2"):
                    params[key] = _lebesgue_index(value, f"{path}.{key}")
                elif key == "t_grid":
                    params[key] = [_number(t, f"{path}.t_grid[{j}]") for j, t in enumerate(value)]
                elif key == "t_count":
                    params[key] = _integer(value, f"{path}.t_count")
                elif key == "cases":
                    params[key] = [[_number(c, f"{path}.cases[{j}]") for c in case] for j, case in enumerate(value)]
                else:
                    params[key] = _number(value, f"{path}.{key}")
            N = None if entry["N"] is None else _integer(entry["N"], f"{path}.N")
            refine = True if entry["refine"] is None else _flag(entry["refine"], f"{path}.refine")
            suites.append(SuiteSpec(check, params, N, family, refine))
        return tuple(suites)

    def to_dict(self) -> Dict[str, Any]:
        """Plain-data form; from_dict(to_dict()) reproduces the config."""
        solver = self.solver
        return {
            "general": {"name": self.name, "timezone": self.timezone},
            "logging": dict(self.logging),
            "grid": {"d": self.grid.d, "N": self.grid.N, "L": self.grid.L},
            "initial_data": {"kind": self.initial_kind, "params": dict(self.initial_params)},
            "solver": {
                "method": self.method, "T": solver.T, "n_steps": solver.n_steps, "mesh": solver.mesh,
                "grading": solver.grading, "picard_tol": solver.picard_tol, "picard_max_iter": solver.picard_max_iter,
                "monitor_specs": [{"s": m.s, "q": m.q} for m in solver.monitor_specs],
                "nonlinear": solver.nonlinear, "corrector_max_iter": solver.corrector_max_iter,
                "corrector_tol": solver.corrector_tol, "max_derivative_order": solver.max_derivative_order,
            },
            "norm_specs": [{"s": s.s, "q": s.q, "n": s.n, "kind": s.kind, "p": s.p} for s in self.norm_specs],
            "decay": {"window": list(self.decay_window) if self.decay_window else None, "slack": self.decay_slack},
            "suites": [suite.to_dict() for suite in self.suites],
            "output_dir": self.output_dir,
            "notify": dict(self.notify),
        }


def load_experiment(config_path: str) -> Tuple[ExperimentConfig, Dict[str, Any]]:
    """Reads, substitutes and validates a config file; returns the config and its raw dict."""
    raw = load_config(config_path)
    return ExperimentConfig.from_dict(raw), raw
