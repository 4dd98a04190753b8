"""From-scratch dense binary classifier.

Architecture: a stack of dense layers with ReLU after every layer except
the last; the last layer has a single output whose sigmoid is the
political-poster probability. Gradients are hand-derived for this fixed
dense/ReLU/sigmoid/BCE graph (the sigmoid and loss are fused in logit
form, so dL/dz = p - y and ln(0) can never occur). Optimization is Adam
with bias correction. All training arithmetic is float64.

Checkpoint format: magic ``PFNET1\\0\\0``, uint32 LE layer count, then per
layer uint32 LE (in_dim, out_dim); parameters follow as float64 LE,
weights row-major in (out_dim, in_dim) orientation then bias, per layer.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K

CHECKPOINT_MAGIC = b"PFNET1\x00\x00"


class NetError(ValueError):
    pass


class TrainingDiverged(RuntimeError):
    pass


@dataclass
class DenseLayer:
    weights: np.ndarray  # (in_dim, out_dim), float64
    bias: np.ndarray  # (out_dim,), float64

    @property
    def in_dim(self):
        return self.weights.shape[0]

    @property
    def out_dim(self):
        return self.weights.shape[1]


@dataclass
class MLPClassifier:
    layers: list[DenseLayer]

    @property
    def input_dim(self):
        return self.layers[0].in_dim

    @property
    def depth(self):
        return len(self.layers)

    def parameters(self):
        for layer in self.layers:
            yield layer.weights
            yield layer.bias


def init_model(layer_dims: list[int], seed: int) -> MLPClassifier:
    """Seeded Glorot-uniform weights, zero biases.

    layer_dims chains input through hidden sizes to the single output,
    e.g. [5048, 512, 64, 1] for the 3-layer model.
    """
    if len(layer_dims) < 2:
        raise NetError("need at least input and output dims")
    if layer_dims[-1] != 1:
        raise NetError(f"output dim must be 1, got {layer_dims[-1]}")
    rng = np.random.default_rng(seed)
    layers = []
    for fan_in, fan_out in zip(layer_dims[:-1], layer_dims[1:]):
        limit = math.sqrt(6.0 / (fan_in + fan_out))
        w = rng.uniform(-limit, limit, size=(fan_in, fan_out))
        layers.append(DenseLayer(weights=w, bias=np.zeros(fan_out)))
    return MLPClassifier(layers)


def default_hidden_dims(input_dim: int, depth: int) -> list[int]:
    """Paper-faithful shapes: depth 1 is a single dense layer, depth 3 adds
    512 and 64 hidden units. Other depths interpolate by halving from 512."""
    if depth == 1:
        return [input_dim, 1]
    if depth == 3:
        return [input_dim, 512, 64, 1]
    hidden = [max(2, 512 // (2**i)) for i in range(depth - 1)]
    return [input_dim, *hidden, 1]


def sigmoid(z):
    """Numerically stable logistic function (scalar or array)."""
    arr = np.asarray(z, dtype=np.float64)
    out = K.sigmoid_vec(np.ascontiguousarray(arr.reshape(-1, 1)))
    out = out.reshape(arr.shape)
    return float(out) if np.isscalar(z) or arr.ndim == 0 else out


def bce_loss(logits, targets) -> float:
    """Mean binary cross-entropy from logits (stable fused form)."""
    z = np.ascontiguousarray(np.asarray(logits, dtype=np.float64).ravel())
    y = np.ascontiguousarray(np.asarray(targets, dtype=np.float64).ravel())
    if z.size != y.size:
        raise NetError(f"length mismatch: {z.size} logits vs {y.size} targets")
    return K.bce_from_logits(z, y)


def forward(model: MLPClassifier, x) -> np.ndarray:
    """Batch of logits for x of shape (B, input_dim) or a single vector."""
    a = np.ascontiguousarray(np.atleast_2d(np.asarray(x, dtype=np.float64)))
    if a.shape[1] != model.input_dim:
        raise NetError(f"input dim mismatch: expected {model.input_dim}, got {a.shape[1]}")
    last = len(model.layers) - 1
    for i, layer in enumerate(model.layers):
        a = K.affine(a, layer.weights, layer.bias)
        if i != last:
            a = K.relu(a)
    return a[:, 0]


def _forward_cached(model, a0):
    """Forward pass keeping pre-activations and activations for backprop."""
    activations = [a0]
    pre = []
    last = len(model.layers) - 1
    a = a0
    for i, layer in enumerate(model.layers):
        z = K.affine(a, layer.weights, layer.bias)
        pre.append(z)
        a = K.relu(z) if i != last else z
        activations.append(a)
    return pre, activations


def backward(model: MLPClassifier, x, y):
    """Gradient of mean BCE over the batch for every weight and bias.

    Returns (loss, grads) where grads mirrors model.layers as
    [(gw, gb), ...].
    """
    a0 = np.ascontiguousarray(np.atleast_2d(np.asarray(x, dtype=np.float64)))
    yv = np.asarray(y, dtype=np.float64).ravel()
    if a0.shape[0] == 0:
        raise NetError("batch is empty")
    pre, activations = _forward_cached(model, a0)
    logits = pre[-1][:, 0]
    loss = K.bce_from_logits(np.ascontiguousarray(logits), np.ascontiguousarray(yv))

    batch = a0.shape[0]
    p = K.sigmoid_vec(pre[-1])
    delta = (p - yv.reshape(-1, 1)) / batch  # dL/dz for the fused sigmoid+BCE
    grads = [None] * len(model.layers)
    for i in range(len(model.layers) - 1, -1, -1):
        gw, gb = K.affine_grads(activations[i], delta)
        grads[i] = (gw, gb)
        if i > 0:
            delta = K.delta_backward(delta, model.layers[i].weights)
            delta = K.relu_backward(delta, pre[i - 1])
    return loss, grads


@dataclass
class AdamState:
    """Per-parameter first/second moments plus the shared step count."""

    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    t: int = 0
    first_moment: list = field(default_factory=list)
    second_moment: list = field(default_factory=list)

    @classmethod
    def for_model(cls, model: MLPClassifier, lr: float = 1e-3, **kw) -> "AdamState":
        state = cls(lr=lr, **kw)
        for p in model.parameters():
            state.first_moment.append(np.zeros_like(p))
            state.second_moment.append(np.zeros_like(p))
        return state


def adam_step(model: MLPClassifier, grads, state: AdamState) -> None:
    """One in-place Adam update over every parameter."""
    state.t += 1
    flat_grads = [g for gw_gb in grads for g in gw_gb]
    for p, g, m, v in zip(model.parameters(), flat_grads, state.first_moment, state.second_moment):
        K.adam_update(
            p.ravel(),
            np.ascontiguousarray(g, dtype=np.float64).ravel(),
            m.ravel(),
            v.ravel(),
            state.t,
            state.lr,
            state.beta1,
            state.beta2,
            state.eps,
        )


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 90
    batch_size: int = 64
    learning_rate: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")


def train(model: MLPClassifier, X, y, cfg: TrainConfig):
    """Mini-batch Adam training; deterministic given (model init, seed).

    Returns the per-epoch mean-loss history (full-dataset loss after each
    epoch). Raises TrainingDiverged if the loss goes non-finite.
    """
    X = np.ascontiguousarray(np.asarray(X, dtype=np.float64))
    y = np.asarray(y, dtype=np.float64).ravel()
    if X.shape[0] == 0:
        raise NetError("dataset is empty")
    rng = np.random.default_rng(cfg.seed)
    state = AdamState.for_model(model, lr=cfg.learning_rate)
    history = []
    for epoch in range(cfg.epochs):
        order = rng.permutation(X.shape[0])
        for start in range(0, X.shape[0], cfg.batch_size):
            idx = order[start : start + cfg.batch_size]
            loss, grads = backward(model, X[idx], y[idx])
            if not math.isfinite(loss):
                raise TrainingDiverged(
                    f"non-finite loss at epoch {epoch}, batch offset {start}; "
                    f"try a smaller learning rate (current {cfg.learning_rate})"
                )
            adam_step(model, grads, state)
        epoch_loss = bce_loss(forward(model, X), y)
        if not math.isfinite(epoch_loss):
            raise TrainingDiverged(
                f"non-finite epoch loss at epoch {epoch}; "
                f"try a smaller learning rate (current {cfg.learning_rate})"
            )
        history.append(epoch_loss)
    return history


def predict(model: MLPClassifier, x) -> np.ndarray:
    """Binary predictions; probability 0.5 (logit 0) classifies as positive."""
    logits = forward(model, x)
    return (logits >= 0.0).astype(np.int64)


def save_checkpoint(model: MLPClassifier, path) -> None:
    parts = [CHECKPOINT_MAGIC, struct.pack("<I", len(model.layers))]
    for layer in model.layers:
        parts.append(struct.pack("<II", layer.in_dim, layer.out_dim))
    for layer in model.layers:
        # on-disk orientation is (out_dim, in_dim) row-major
        parts.append(np.ascontiguousarray(layer.weights.T).astype("<f8").tobytes())
        parts.append(layer.bias.astype("<f8").tobytes())
    with open(path, "wb") as f:
        f.write(b"".join(parts))


def load_checkpoint(path) -> MLPClassifier:
    with open(path, "rb") as f:
        data = f.read()
    if data[:8] != CHECKPOINT_MAGIC:
        raise NetError(f"{path}: bad checkpoint magic {data[:8]!r}")
    (count,) = struct.unpack_from("<I", data, 8)
    offset = 12
    dims = []
    for _ in range(count):
        dims.append(struct.unpack_from("<II", data, offset))
        offset += 8
    layers = []
    for in_dim, out_dim in dims:
        w = np.frombuffer(data, dtype="<f8", count=in_dim * out_dim, offset=offset)
        offset += 8 * in_dim * out_dim
        b = np.frombuffer(data, dtype="<f8", count=out_dim, offset=offset)
        offset += 8 * out_dim
        layers.append(DenseLayer(weights=w.reshape(out_dim, in_dim).T.copy(), bias=b.copy()))
    if offset != len(data):
        raise NetError(f"{path}: {len(data) - offset} trailing bytes")
    return MLPClassifier(layers)
