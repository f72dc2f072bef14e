from __future__ import annotations

from typing import Any, Dict, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator


class ConfigError(ValueError):
    pass


class ModelConfig(BaseModel):
    """Hyperparameters for HEmoN and the FNN baseline.

    Defaults follow the published training recipe: 64-d input embedding,
    three 64-unit LSTM layers, dropout 0.2, batch 32, Adam at 5e-4 halved
    after 10 stale epochs down to 2e-5, at most 300 epochs.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    input_dim: int = Field(1, gt=0)
    embed_dim: int = Field(64, gt=0)
    hidden_dim: int = Field(64, gt=0)
    lstm_layers: int = Field(3, gt=0)
    dropout: float = Field(0.2, ge=0.0, lt=1.0)
    batch_size: int = Field(32, gt=0)
    lr_init: float = Field(5e-4, gt=0.0)
    lr_factor: float = Field(0.5, gt=0.0, lt=1.0)
    lr_patience: int = Field(10, gt=0)
    lr_min: float = Field(2e-5, gt=0.0)
    max_epochs: int = Field(300, gt=0)
    head: Literal["regression", "classification"] = "regression"
    num_outputs: int = Field(1, gt=0)
    max_rating: float = Field(100.0, gt=0.0)
    loss: Literal["l1", "mse"] = "l1"
    share_across_levels: bool = False
    fnn_hidden: int = Field(64, gt=0)
    val_fraction: float = Field(0.1, ge=0.0, lt=1.0)
    seed: int = Field(0, ge=0)

    @model_validator(mode="after")
    def _check_schedule(self) -> "ModelConfig":
        if self.lr_min >= self.lr_init:
            raise ValueError(f"lr_min ({self.lr_min}) must be below lr_init ({self.lr_init})")
        if self.head == "classification" and self.num_outputs < 2:
            raise ValueError("classification needs at least two classes")
        return self


def build_model_config(data: Dict[str, Any] | None = None, **overrides: Any) -> ModelConfig:
    payload = dict(data or {})
    payload.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return ModelConfig.model_validate(payload)
    except ValidationError as exc:
        raise ConfigError(f"invalid model config: {exc}") from exc
