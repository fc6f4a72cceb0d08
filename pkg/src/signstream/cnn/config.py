"""Architecture and training hyperparameter records.

The default architecture is fixed by the recognizer's input format: a 90x21
single-channel matrix feeding three valid-padding conv layers (33 filters
with 2x2 max pooling, then 64 and 64 without), a 64-unit hidden dense layer,
and an 11-way softmax output.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..landmarks import NUM_CLASSES
from ..motion import MATRIX_SHAPE


@dataclass(frozen=True)
class ConvSpec:
    """One conv layer: `filters` 3x3 kernels, optionally followed by 2x2 max pooling."""

    filters: int
    kernel: int = 3
    pool: bool = False

    def __post_init__(self):
        if self.filters < 1:
            raise ValueError("a conv layer needs at least one filter")
        if self.kernel < 1:
            raise ValueError("kernel size must be positive")


@dataclass(frozen=True)
class Architecture:
    """Network shape. `conv` lists the conv layers in order; `hidden` is the
    width of the dense layer between the flattened conv stack and the output."""

    input_shape: tuple[int, int] = MATRIX_SHAPE
    conv: tuple[ConvSpec, ...] = (
        ConvSpec(33, pool=True),
        ConvSpec(64),
        ConvSpec(64),
    )
    hidden: int = 64
    classes: int = NUM_CLASSES

    def __post_init__(self):
        object.__setattr__(self, "conv", tuple(self.conv))
        if self.hidden < 1:
            raise ValueError("hidden width must be positive")
        if self.classes < 2:
            raise ValueError("need at least two classes")
        # Walk the shape through the stack so an impossible configuration
        # fails at construction, not mid-forward.
        h, w = self.input_shape
        for i, spec in enumerate(self.conv):
            h, w = h - spec.kernel + 1, w - spec.kernel + 1
            if h < 1 or w < 1:
                raise ValueError(f"conv layer {i} shrinks the input below 1x1")
            if spec.pool:
                h, w = h // 2, w // 2
                if h < 1 or w < 1:
                    raise ValueError(f"pool after conv layer {i} empties the input")

    def feature_shapes(self) -> list[tuple[int, int, int]]:
        """(height, width, channels) after each conv (and its pool, if any)."""
        shapes = []
        h, w = self.input_shape
        for spec in self.conv:
            h, w = h - spec.kernel + 1, w - spec.kernel + 1
            if spec.pool:
                h, w = h // 2, w // 2
            shapes.append((h, w, spec.filters))
        return shapes

    @property
    def flat_size(self) -> int:
        h, w, c = self.feature_shapes()[-1]
        return h * w * c

    def parameter_count(self) -> int:
        total = 0
        in_ch = 1
        for spec in self.conv:
            total += spec.filters * (spec.kernel * spec.kernel * in_ch + 1)
            in_ch = spec.filters
        total += self.hidden * (self.flat_size + 1)
        total += self.classes * (self.hidden + 1)
        return total


DEFAULT_ARCHITECTURE = Architecture()


@dataclass(frozen=True)
class TrainConfig:
    """Optimization hyperparameters. Defaults: Adam with a 1e-6 learning
    rate, batch size 8, 150 epochs, L1 sparsity (1e-4) on the kernels of
    every conv layer after the first and of the hidden dense layer."""

    learning_rate: float = 1e-6
    batch_size: int = 8
    epochs: int = 150
    l1_lambda: float = 1e-4
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate < 0:
            raise ValueError("learning rate must be >= 0")
        if self.batch_size < 1:
            raise ValueError("batch size must be >= 1")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.l1_lambda < 0:
            raise ValueError("l1 lambda must be >= 0")
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise ValueError("Adam betas must lie in [0, 1)")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
