from .baseline import FeedForwardBaseline, baseline_fnn
from .checkpoint import load_checkpoint, save_checkpoint
from .config import ConfigError, ModelConfig, build_model_config
from .initializers import xavier_init
from .lstm import LSTMStack, lstm_forward
from .metrics import accuracy, mae
from .model import HemonModel, Predictor, substream
from .training import (
    NumericError,
    Sample,
    TrainReport,
    evaluate,
    split_samples,
    split_validation,
    train,
)
from .variants import build_dft_variant, build_ea1_variant, dft_sequence

__all__ = [
    "ConfigError",
    "FeedForwardBaseline",
    "HemonModel",
    "LSTMStack",
    "ModelConfig",
    "NumericError",
    "Predictor",
    "Sample",
    "TrainReport",
    "accuracy",
    "baseline_fnn",
    "build_dft_variant",
    "build_ea1_variant",
    "build_model_config",
    "dft_sequence",
    "evaluate",
    "load_checkpoint",
    "lstm_forward",
    "mae",
    "save_checkpoint",
    "split_samples",
    "split_validation",
    "substream",
    "train",
    "xavier_init",
]
