"""Run-level configuration: a TOML file, then command-line overrides."""
from __future__ import annotations

import logging
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from hemon import ConfigError, ModelConfig


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

VARIANTS = ("hemon", "ea1", "dft", "fnn")


class SyntheticSpec(BaseModel):
    """Planted-tree generator settings.

    ``readout`` maps each rating category to the planted levels whose newly
    reached nodes drive it; categories beyond the list reuse it cyclically.
    The default leaves the main trunk out of the readout, so a model that
    only sees level 1 cannot recover the ratings.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    node_count: int = Field(50, ge=2)
    noise: float = Field(0.0, ge=0.0)
    coupling: float = Field(0.8, gt=0.0, lt=1.0)
    time_points: int = Field(400, ge=3)
    stimuli: int = Field(240, ge=1)
    categories: int = Field(1, ge=1)
    readout: List[List[int]] = Field(default_factory=lambda: [[2, 3]])
    readout_scale: float = Field(1.5, gt=0.0)
    seed: int = Field(0, ge=0)

    @field_validator("readout")
    @classmethod
    def _levels_positive(cls, value: List[List[int]]) -> List[List[int]]:
        if not value or any(not levels or min(levels) < 1 for levels in value):
            raise ValueError("readout needs at least one level list with levels >= 1")
        return value


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    seed: int = Field(0, ge=0)
    out: Path = Path("artifacts")
    timeseries: List[Path] = Field(default_factory=list)
    ratings: Optional[Path] = None
    atlas: Optional[Path] = None
    stimuli_features: Optional[Path] = None
    stimuli_ratings: Optional[Path] = None
    category: Optional[str] = None
    quantile: float = Field(0.75, gt=0.0, lt=1.0)
    aggregate: str = "mean"
    fisher_z: bool = False
    abs_weights: bool = False
    test_fraction: float = Field(1.0 / 3.0, gt=0.0, lt=1.0)
    variant: Literal["hemon", "ea1", "dft", "fnn"] = "hemon"
    ablation_variants: List[str] = Field(default_factory=lambda: list(VARIANTS))
    ablation_seeds: List[int] = Field(default_factory=lambda: list(range(10)))
    plot: bool = False
    model: ModelConfig = Field(default_factory=ModelConfig)
    synth: SyntheticSpec = Field(default_factory=SyntheticSpec)

    @field_validator("ablation_variants")
    @classmethod
    def _known_variants(cls, value: List[str]) -> List[str]:
        unknown = sorted(set(value) - set(VARIANTS))
        if unknown:
            raise ValueError(f"unknown variants {unknown}; choose from {list(VARIANTS)}")
        return value

    @property
    def uses_synthetic_data(self) -> bool:
        return not self.timeseries

    def seeded(self) -> "RunConfig":
        """The run seed propagated into the model and generator configs."""
        return self.model_copy(
            update={
                "model": self.model.model_copy(update={"seed": self.seed}),
                "synth": self.synth.model_copy(update={"seed": self.seed}),
            }
        )


def _merge(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in overrides.items():
        if value is None:
            continue
        if isinstance(value, dict):
            nested = merged.get(key)
            merged[key] = _merge(nested if isinstance(nested, dict) else {}, value)
        else:
            merged[key] = value
    return merged


def load_run_config(path: Optional[PathLike] = None, **overrides: Any) -> RunConfig:
    """Read ``path`` (TOML) if given, apply non-``None`` overrides, validate.

    Nested tables ``[model]`` and ``[synth]`` may be overridden with dicts.
    """
    data: Dict[str, Any] = {}
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Config file not found: {path}")
        try:
            data = tomllib.loads(path.read_text(encoding="utf-8"))
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    try:
        config = RunConfig.model_validate(_merge(data, overrides))
    except ValidationError as exc:
        raise ConfigError(f"invalid run config: {exc}") from exc
    logger.debug("Run config: %s", config.model_dump_json())
    return config.seeded()
