"""Adam training loop with per-epoch metrics.

The loop is deterministic: one seeded generator drives the per-epoch
shuffles, batches are consecutive slices of the shuffled order (the
remainder forms a final short batch), and Adam keeps bias-corrected first
and second moments per parameter tensor. After every epoch the model is
evaluated on the full training set (and validation set, when given) and the
row is recorded; the final-epoch model is the result, no early stopping.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .config import TrainConfig
from .model import GestureNet, log_softmax


class TrainingDivergedError(RuntimeError):
    """Raised when a non-finite loss appears; carries epoch/step diagnostics."""


@dataclass(frozen=True)
class EpochMetrics:
    epoch: int
    train_accuracy: float
    train_loss: float
    val_accuracy: Optional[float] = None
    val_loss: Optional[float] = None


@dataclass(frozen=True)
class TrainReport:
    config: TrainConfig
    epochs: tuple[EpochMetrics, ...]

    def to_csv(self) -> str:
        """Metrics as CSV, one row per epoch. Validation columns are left
        empty when no validation set was supplied."""
        lines = ["epoch,train_acc,train_loss,val_acc,val_loss"]
        for m in self.epochs:
            va = "" if m.val_accuracy is None else repr(m.val_accuracy)
            vl = "" if m.val_loss is None else repr(m.val_loss)
            lines.append(f"{m.epoch},{m.train_accuracy!r},{m.train_loss!r},{va},{vl}")
        return "\n".join(lines) + "\n"


Dataset = Sequence[tuple[np.ndarray, int]]


def _stack(dataset: Dataset, dtype) -> tuple[np.ndarray, np.ndarray]:
    if len(dataset) == 0:
        raise ValueError("dataset is empty")
    x = np.stack([np.asarray(m, dtype=dtype) for m, _ in dataset])
    y = np.array([int(label) for _, label in dataset], dtype=np.intp)
    return x, y


def evaluate(model: GestureNet, dataset: Dataset, l1_lambda: float = 0.0) -> tuple[float, float]:
    """Full-pass (loss, accuracy) on a dataset, in evaluation chunks.

    The loss is the mean cross-entropy over every example plus the L1 term
    once, identical to ``model.loss`` on the whole set at once.
    """
    x, y = _stack(dataset, model.dtype)
    total_logp = 0.0
    correct = 0
    for start in range(0, len(y), 64):
        logits = model.forward(x[start : start + 64])
        logp = log_softmax(logits)
        yy = y[start : start + 64]
        total_logp += float(logp[np.arange(len(yy)), yy].sum())
        correct += int((logp.argmax(axis=1) == yy).sum())
    loss = -total_logp / len(y) + model.regularization_term(l1_lambda)
    return loss, correct / len(y)


class _Adam:
    def __init__(self, params: dict[str, np.ndarray], cfg: TrainConfig):
        self.cfg = cfg
        self.t = 0
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}

    def step(self, params: dict[str, np.ndarray], grads: dict[str, np.ndarray]) -> None:
        cfg = self.cfg
        self.t += 1
        correction1 = 1.0 - cfg.beta1**self.t
        correction2 = 1.0 - cfg.beta2**self.t
        for name, g in grads.items():
            m = self.m[name]
            v = self.v[name]
            m *= cfg.beta1
            m += (1.0 - cfg.beta1) * g
            v *= cfg.beta2
            v += (1.0 - cfg.beta2) * np.square(g)
            m_hat = m / correction1
            v_hat = v / correction2
            params[name] -= cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.epsilon)


def train(
    model: GestureNet,
    train_set: Dataset,
    val_set: Optional[Dataset] = None,
    cfg: TrainConfig = TrainConfig(),
) -> tuple[GestureNet, TrainReport]:
    """Train the model in place for cfg.epochs epochs; returns it with the
    per-epoch metrics report."""
    x, y = _stack(train_set, model.dtype)
    n = len(y)
    rng = np.random.default_rng(cfg.seed)
    adam = _Adam(model.params, cfg)

    history = []
    for epoch in range(1, cfg.epochs + 1):
        order = rng.permutation(n)
        for start in range(0, n, cfg.batch_size):
            batch = order[start : start + cfg.batch_size]
            loss, grads = model.loss_and_grads(x[batch], y[batch], cfg.l1_lambda)
            if not np.isfinite(loss):
                raise TrainingDivergedError(
                    f"non-finite loss {loss} at epoch {epoch}, "
                    f"step {adam.t + 1} (batch starting at index {start})"
                )
            adam.step(model.params, grads)
        train_loss, train_acc = evaluate(model, train_set, cfg.l1_lambda)
        if val_set is not None:
            val_loss, val_acc = evaluate(model, val_set, cfg.l1_lambda)
            history.append(EpochMetrics(epoch, train_acc, train_loss, val_acc, val_loss))
        else:
            history.append(EpochMetrics(epoch, train_acc, train_loss))

    return model, TrainReport(cfg, tuple(history))
