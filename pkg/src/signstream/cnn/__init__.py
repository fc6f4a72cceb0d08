"""Convolutional gesture classifier: architecture config, numpy model,
Adam training loop, and the weight file format."""

from .config import Architecture, ConvSpec, TrainConfig, DEFAULT_ARCHITECTURE
from .model import GestureNet, log_softmax, softmax, parameter_shapes
from .training import (
    EpochMetrics,
    TrainReport,
    TrainingDivergedError,
    evaluate,
    train,
)
from .weights_io import (
    ClassOrderError,
    WeightCorruptionError,
    WeightFormatError,
    WeightsError,
    load_weights,
    save_weights,
)

__all__ = [
    "Architecture",
    "ConvSpec",
    "TrainConfig",
    "DEFAULT_ARCHITECTURE",
    "GestureNet",
    "log_softmax",
    "softmax",
    "parameter_shapes",
    "EpochMetrics",
    "TrainReport",
    "TrainingDivergedError",
    "evaluate",
    "train",
    "ClassOrderError",
    "WeightCorruptionError",
    "WeightFormatError",
    "WeightsError",
    "load_weights",
    "save_weights",
]
