"""From-scratch convolutional network over motion matrices.

Pure numpy, no autograd: the forward pass records a cache and
``loss_and_grads`` replays it backwards. Convolutions are valid padding and
run as im2col plus one matrix product per layer. Parameters live in a flat
name-to-array dict so the optimizer and the weight file format can treat
them uniformly.

Numerical convention: parameters and activations use the model dtype
(float32 by default), but probabilities and losses are always computed in
float64 from the logits, so a loss recomputed from saved probabilities
matches ``loss()`` to rounding.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .config import DEFAULT_ARCHITECTURE, Architecture


def log_softmax(logits: np.ndarray) -> np.ndarray:
    """Row-wise log-softmax in float64, stable for any logit magnitude."""
    z = np.asarray(logits, dtype=np.float64)
    with np.errstate(over="ignore"):  # huge spreads shift to -inf, exp to 0
        z = z - z.max(axis=-1, keepdims=True)
    return z - np.log(np.exp(z).sum(axis=-1, keepdims=True))


def softmax(logits: np.ndarray) -> np.ndarray:
    return np.exp(log_softmax(logits))


def _conv_forward(x: np.ndarray, w: np.ndarray, b: np.ndarray):
    """Valid-padding convolution. x is (n, h, w, c); w is (kh, kw, c, f)."""
    kh, kw, _, f = w.shape
    n = x.shape[0]
    windows = sliding_window_view(x, (kh, kw), axis=(1, 2))  # (n, oh, ow, c, kh, kw)
    oh, ow = windows.shape[1], windows.shape[2]
    cols = windows.transpose(0, 1, 2, 4, 5, 3).reshape(n * oh * ow, kh * kw * x.shape[3])
    out = cols @ w.reshape(-1, f) + b
    return out.reshape(n, oh, ow, f), cols


def _conv_backward(dout: np.ndarray, cols: np.ndarray, x_shape, w: np.ndarray):
    kh, kw, _, f = w.shape
    n, h, width, c = x_shape
    oh, ow = h - kh + 1, width - kw + 1
    dflat = dout.reshape(n * oh * ow, f)
    dw = (cols.T @ dflat).reshape(w.shape)
    db = dflat.sum(axis=0)
    dcols = (dflat @ w.reshape(-1, f).T).reshape(n, oh, ow, kh, kw, c)
    dx = np.zeros(x_shape, dtype=dout.dtype)
    for i in range(kh):
        for j in range(kw):
            dx[:, i : i + oh, j : j + ow, :] += dcols[:, :, :, i, j, :]
    return dx, dw, db


def _pool_forward(x: np.ndarray):
    """2x2 max pooling, stride 2. Odd trailing rows/columns are dropped.
    Ties go to the first cell in (top-left, top-right, bottom-left,
    bottom-right) order, and the backward pass routes gradient there."""
    n, h, w, c = x.shape
    h2, w2 = h // 2, w // 2
    tiles = (
        x[:, : 2 * h2, : 2 * w2, :]
        .reshape(n, h2, 2, w2, 2, c)
        .transpose(0, 1, 3, 5, 2, 4)
        .reshape(n, h2, w2, c, 4)
    )
    idx = tiles.argmax(axis=-1)
    out = np.take_along_axis(tiles, idx[..., None], axis=-1)[..., 0]
    return out, idx


def _pool_backward(dout: np.ndarray, idx: np.ndarray, x_shape):
    n, h, w, c = x_shape
    h2, w2 = h // 2, w // 2
    dtiles = np.zeros((n, h2, w2, c, 4), dtype=dout.dtype)
    np.put_along_axis(dtiles, idx[..., None], dout[..., None], axis=-1)
    dx = np.zeros(x_shape, dtype=dout.dtype)
    dx[:, : 2 * h2, : 2 * w2, :] = (
        dtiles.reshape(n, h2, w2, c, 2, 2)
        .transpose(0, 1, 4, 2, 5, 3)
        .reshape(n, 2 * h2, 2 * w2, c)
    )
    return dx


def _init_params(arch: Architecture, seed: int, dtype: np.dtype) -> dict[str, np.ndarray]:
    """Uniform(-sqrt(6/fan_in), +sqrt(6/fan_in)) kernels, zero biases.
    Draw order is fixed (conv layers in order, then hidden, then output) so
    a seed pins every weight."""
    rng = np.random.default_rng(seed)
    params: dict[str, np.ndarray] = {}
    in_ch = 1
    for i, spec in enumerate(arch.conv):
        fan_in = spec.kernel * spec.kernel * in_ch
        limit = math.sqrt(6.0 / fan_in)
        shape = (spec.kernel, spec.kernel, in_ch, spec.filters)
        params[f"conv{i}_w"] = rng.uniform(-limit, limit, shape).astype(dtype)
        params[f"conv{i}_b"] = np.zeros(spec.filters, dtype=dtype)
        in_ch = spec.filters
    limit = math.sqrt(6.0 / arch.flat_size)
    params["hidden_w"] = rng.uniform(-limit, limit, (arch.flat_size, arch.hidden)).astype(dtype)
    params["hidden_b"] = np.zeros(arch.hidden, dtype=dtype)
    limit = math.sqrt(6.0 / arch.hidden)
    params["out_w"] = rng.uniform(-limit, limit, (arch.hidden, arch.classes)).astype(dtype)
    params["out_b"] = np.zeros(arch.classes, dtype=dtype)
    return params


def parameter_shapes(arch: Architecture) -> dict[str, tuple[int, ...]]:
    """Expected shape of every parameter tensor, in storage order."""
    shapes: dict[str, tuple[int, ...]] = {}
    in_ch = 1
    for i, spec in enumerate(arch.conv):
        shapes[f"conv{i}_w"] = (spec.kernel, spec.kernel, in_ch, spec.filters)
        shapes[f"conv{i}_b"] = (spec.filters,)
        in_ch = spec.filters
    shapes["hidden_w"] = (arch.flat_size, arch.hidden)
    shapes["hidden_b"] = (arch.hidden,)
    shapes["out_w"] = (arch.hidden, arch.classes)
    shapes["out_b"] = (arch.classes,)
    return shapes


class GestureNet:
    """Conv stack (relu, optional 2x2 max pool per layer), a relu hidden
    dense layer, and a linear output head producing one logit per class."""

    def __init__(
        self,
        architecture: Architecture = DEFAULT_ARCHITECTURE,
        *,
        seed: int = 0,
        dtype=np.float32,
    ):
        self.architecture = architecture
        self.dtype = np.dtype(dtype)
        self.created_seed = seed
        self.params = _init_params(architecture, seed, self.dtype)

    @classmethod
    def from_params(
        cls, architecture: Architecture, params: dict[str, np.ndarray], *, dtype=np.float32
    ) -> "GestureNet":
        """Wrap an existing parameter dict, validating names and shapes."""
        expected = parameter_shapes(architecture)
        if set(params) != set(expected):
            raise ValueError(
                f"parameter names {sorted(params)} do not match architecture "
                f"(expected {sorted(expected)})"
            )
        net = cls.__new__(cls)
        net.architecture = architecture
        net.dtype = np.dtype(dtype)
        net.created_seed = 0
        net.params = {}
        for name, shape in expected.items():
            arr = np.asarray(params[name], dtype=net.dtype)
            if arr.shape != shape:
                raise ValueError(f"parameter {name} has shape {arr.shape}, expected {shape}")
            net.params[name] = arr
        return net

    # L1 regularization touches the kernels (never the biases) of every conv
    # layer after the first and of the hidden dense layer.
    def l1_param_names(self) -> tuple[str, ...]:
        names = [f"conv{i}_w" for i in range(1, len(self.architecture.conv))]
        names.append("hidden_w")
        return tuple(names)

    def parameter_count(self) -> int:
        return sum(p.size for p in self.params.values())

    # -- forward ----------------------------------------------------------

    def _as_batch(self, x) -> tuple[np.ndarray, bool]:
        a = np.asarray(x, dtype=self.dtype)
        single = a.ndim == 2
        if single:
            a = a[None]
        if a.ndim != 3 or a.shape[1:] != self.architecture.input_shape:
            raise ValueError(
                f"input must be shaped {self.architecture.input_shape} "
                f"(optionally batched), got {np.shape(x)}"
            )
        if a.shape[0] == 0:
            raise ValueError("batch is empty")
        return a[..., None], single

    def _forward_full(self, batch: np.ndarray):
        cache = []
        x = batch
        for i, spec in enumerate(self.architecture.conv):
            pre, cols = _conv_forward(x, self.params[f"conv{i}_w"], self.params[f"conv{i}_b"])
            act = np.maximum(pre, 0)
            layer = {"in_shape": x.shape, "cols": cols, "pre": pre}
            if spec.pool:
                x, idx = _pool_forward(act)
                layer["pool_idx"] = idx
                layer["pool_in_shape"] = act.shape
            else:
                x = act
            cache.append(layer)
        n = x.shape[0]
        flat = x.reshape(n, -1)
        hidden_pre = flat @ self.params["hidden_w"] + self.params["hidden_b"]
        hidden_act = np.maximum(hidden_pre, 0)
        logits = hidden_act @ self.params["out_w"] + self.params["out_b"]
        dense = {
            "flat": flat,
            "feature_shape": x.shape,
            "hidden_pre": hidden_pre,
            "hidden_act": hidden_act,
        }
        return logits, cache, dense

    def forward(self, x) -> np.ndarray:
        """Logits in model dtype: (classes,) for a single matrix, else
        (n, classes)."""
        batch, single = self._as_batch(x)
        logits, _, _ = self._forward_full(batch)
        return logits[0] if single else logits

    def predict_proba(self, x) -> np.ndarray:
        return softmax(self.forward(x))

    def predict(self, x):
        p = self.predict_proba(x)
        labels = np.argmax(p, axis=-1)
        return int(labels) if p.ndim == 1 else labels

    # -- loss and gradients -------------------------------------------------

    def regularization_term(self, l1_lambda: float) -> float:
        """The L1 penalty at the current weights, float64."""
        if l1_lambda == 0.0:
            return 0.0
        return l1_lambda * float(
            sum(np.abs(self.params[n]).sum(dtype=np.float64) for n in self.l1_param_names())
        )

    def loss(self, x, y, l1_lambda: float = 0.0) -> float:
        """Mean cross-entropy over the batch plus the L1 penalty, float64."""
        batch, _ = self._as_batch(x)
        y = np.atleast_1d(np.asarray(y, dtype=np.intp))
        logits, _, _ = self._forward_full(batch)
        logp = log_softmax(logits)
        ce = -float(logp[np.arange(len(y)), y].mean())
        return ce + self.regularization_term(l1_lambda)

    def loss_and_grads(self, x, y, l1_lambda: float = 0.0):
        batch, _ = self._as_batch(x)
        y = np.atleast_1d(np.asarray(y, dtype=np.intp))
        n = len(y)
        logits, cache, dense = self._forward_full(batch)

        logp = log_softmax(logits)
        ce = -float(logp[np.arange(n), y].mean())
        loss = ce + self.regularization_term(l1_lambda)

        p = np.exp(logp)
        p[np.arange(n), y] -= 1.0
        dlogits = (p / n).astype(self.dtype)

        grads: dict[str, np.ndarray] = {}
        grads["out_w"] = dense["hidden_act"].T @ dlogits
        grads["out_b"] = dlogits.sum(axis=0)
        dhid = dlogits @ self.params["out_w"].T
        dhid *= dense["hidden_pre"] > 0
        grads["hidden_w"] = dense["flat"].T @ dhid
        grads["hidden_b"] = dhid.sum(axis=0)
        dx = (dhid @ self.params["hidden_w"].T).reshape(dense["feature_shape"])

        for i in reversed(range(len(self.architecture.conv))):
            layer = cache[i]
            if "pool_idx" in layer:
                dx = _pool_backward(dx, layer["pool_idx"], layer["pool_in_shape"])
            dx = dx * (layer["pre"] > 0)
            dx, dw, db = _conv_backward(dx, layer["cols"], layer["in_shape"], self.params[f"conv{i}_w"])
            grads[f"conv{i}_w"] = dw
            grads[f"conv{i}_b"] = db

        if l1_lambda != 0.0:
            for name in self.l1_param_names():
                grads[name] += (l1_lambda * np.sign(self.params[name])).astype(self.dtype)

        return loss, grads
