"""
Configuration management for ising-traffic
Loads the pinned defaults, merges a user file and validates the result
"""

import os
import copy
import logging
import yaml
from typing import Dict, Any, List, Literal, Optional, Tuple
from pathlib import Path
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..errors import InputError

load_dotenv()

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parents[2] / "ising_traffic_config.yaml"
THREADS_ENV = "ISING_TRAFFIC_THREADS"


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class SolverSection(_Section):
    a: float = 0.5
    b: float = 0.05
    c: float = 1.0
    zeta: float = 0.05
    j_xk: float = -1.0
    j_kx: float = 1.0
    dt: float = 0.05
    n_steps: int = 5000
    gain_ramp: Optional[Tuple[float, float]] = None
    coupling_scale: Optional[float] = None
    init_amplitude: float = 0.01
    readout: Literal["best", "final"] = "best"
    readout_stride: int = Field(default=10, ge=1)
    block_size: int = Field(default=64, ge=1)
    trajectory_stride: int = Field(default=0, ge=0)


class AnnealSection(_Section):
    t_start: Optional[float] = None
    t_end: Optional[float] = None
    t_end_ratio: float = 1e-3
    n_sweeps: int = 2000


class BatchSection(_Section):
    trials: int = Field(default=1000, ge=1)
    seed: int = 0
    threads: Optional[int] = None


class MaxcutSection(_Section):
    law: str = "pm1s"
    n_nodes: int = 18
    density: float = 0.1
    instance_seed: int = 0
    reference_path: Optional[str] = None
    oracle: bool = False


class TapSection(_Section):
    group_size: float = Field(default=1.0, gt=0)
    zeta: Optional[float] = Field(default=0.01, ge=0)
    routes_per_group: int = Field(default=3, ge=1)
    lambda_override: Optional[float] = None
    solvers: List[str] = Field(default_factory=lambda: ["fw", "dia", "sa", "snn", "gfsnn"])
    two_step: bool = False
    fw_max_iters: int = 500
    fw_gap_tol: float = 1e-8
    dia_trials: int = 1000
    yen_k: int = 10
    detour_max_overlap: float = 0.5
    min_width_groups: float = 2.0
    case_group: Optional[int] = None
    dump_model: bool = True


class CalibrateSection(_Section):
    grid: Dict[str, List[float]] = Field(default_factory=lambda: {
        "a": [0.25, 0.5, 0.75], "b": [0.05, 0.1, 0.2], "c": [0.5, 1.0], "zeta": [0.02, 0.05, 0.1]})
    laws: List[str] = Field(default_factory=lambda: ["pm1s", "pw01", "w01"])
    instances_per_law: int = Field(default=6, ge=1)
    first_instance_seed: int = 100
    trials: int = Field(default=20, ge=1)
    tap: bool = True
    tap_trials: int = Field(default=8, ge=1)
    tolerance: float = Field(default=1e-3, ge=0)


class FitSection(_Section):
    samples: int = 201
    table_rows: int = 11


class OutputSection(_Section):
    directory: str = "results"


class LoggingSection(_Section):
    level: str = "INFO"


class RunConfig(_Section):
    """Validated run configuration; every field carries the pinned default."""
    config_version: int = 2
    solver: SolverSection = Field(default_factory=SolverSection)
    anneal: AnnealSection = Field(default_factory=AnnealSection)
    batch: BatchSection = Field(default_factory=BatchSection)
    maxcut: MaxcutSection = Field(default_factory=MaxcutSection)
    tap: TapSection = Field(default_factory=TapSection)
    calibrate: CalibrateSection = Field(default_factory=CalibrateSection)
    fit: FitSection = Field(default_factory=FitSection)
    output: OutputSection = Field(default_factory=OutputSection)
    logging: LoggingSection = Field(default_factory=LoggingSection)


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


class ConfigManager:
    """Centralized configuration management."""

    def __init__(self, config_path: Optional[str] = None,
                 defaults_path: Optional[str] = None):
        """
        Initialize configuration manager.

        Args:
            config_path: Optional user YAML file merged over the defaults
            defaults_path: Pinned defaults file (the repository default if None)
        """
        self.defaults_path = Path(defaults_path) if defaults_path else DEFAULT_CONFIG_PATH
        self.config_path = Path(config_path) if config_path else None
        self._config = self._load_config()
        self._validate_environment()

    def _read_yaml(self, path: Path) -> Dict[str, Any]:
        if not path.exists():
            raise FileNotFoundError(f"Configuration file not found: {path}")
        with open(path, 'r') as file:
            data = yaml.safe_load(file) or {}
        if not isinstance(data, dict):
            raise InputError(f"Configuration file {path} must contain a mapping")
        return data

    def _load_config(self) -> Dict[str, Any]:
        """Load defaults and merge the user file over them."""
        config = self._read_yaml(self.defaults_path)
        if self.config_path is not None:
            config = _deep_merge(config, self._read_yaml(self.config_path))
            logger.debug(f"Merged user configuration from {self.config_path}")
        return config

    def _validate_environment(self):
        """Validate environment variables the package reads."""
        threads = os.getenv(THREADS_ENV)
        if threads is not None:
            try:
                if int(threads) < 1:
                    raise ValueError
            except ValueError:
                raise InputError(f"{THREADS_ENV} must be a positive integer, got '{threads}'")

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value using dot notation."""
        keys = key.split('.')
        value = self._config

        try:
            for k in keys:
                value = value[k]
            return value
        except (KeyError, TypeError):
            return default

    def set(self, key: str, value: Any):
        """Override one value using dot notation (used for CLI flags)."""
        keys = key.split('.')
        target = self._config
        for k in keys[:-1]:
            target = target.setdefault(k, {})
        target[keys[-1]] = value

    def run_config(self) -> RunConfig:
        """Validate the merged mapping into a RunConfig."""
        try:
            return RunConfig.model_validate(self._config)
        except ValidationError as e:
            raise InputError(f"Invalid configuration: {e}") from e

    @property
    def config(self) -> Dict[str, Any]:
        """Get full configuration."""
        return copy.deepcopy(self._config)


def worker_count(configured: Optional[int] = None) -> int:
    """Worker threads for trial batches: explicit value, else the env cap, else 1."""
    if configured is not None:
        return max(1, int(configured))
    threads = os.getenv(THREADS_ENV)
    return max(1, int(threads)) if threads else 1
