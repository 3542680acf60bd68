"""Small hand-written network core in float64.

Layers are plain functions over a ``ParamStore``: the forward pass returns
its output plus whatever the backward pass needs, and the backward pass
adds parameter gradients into ``store.grads`` and returns the input
gradient. Shapes are batch first throughout.
"""

from __future__ import annotations

import io
import json
import os
from typing import Callable, Optional, Union

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


class ShapeError(ValueError):
    pass


class ParamStore:
    """Named parameter blocks with matching gradients and Adam moments."""

    def __init__(self):
        self.params: dict[str, np.ndarray] = {}
        self.grads: dict[str, np.ndarray] = {}
        self.m: dict[str, np.ndarray] = {}
        self.v: dict[str, np.ndarray] = {}
        self.step = 0

    def add(self, name: str, value: np.ndarray) -> np.ndarray:
        if name in self.params:
            raise KeyError(f"duplicate parameter {name!r}")
        value = np.array(value, dtype=np.float64)
        self.params[name] = value
        self.grads[name] = np.zeros_like(value)
        self.m[name] = np.zeros_like(value)
        self.v[name] = np.zeros_like(value)
        return value

    def __getitem__(self, name: str) -> np.ndarray:
        return self.params[name]

    def __contains__(self, name: str) -> bool:
        return name in self.params

    def names(self) -> list[str]:
        return list(self.params)

    def size(self) -> int:
        return sum(p.size for p in self.params.values())

    def zero_grad(self) -> None:
        for g in self.grads.values():
            g.fill(0.0)

    def snapshot(self) -> dict[str, np.ndarray]:
        return {k: v.copy() for k, v in self.params.items()}

    def restore(self, snap: dict[str, np.ndarray]) -> None:
        for k, v in snap.items():
            if self.params[k].shape != v.shape:
                raise ShapeError(f"shape mismatch for {k}: {v.shape} vs {self.params[k].shape}")
            self.params[k][...] = v

    def flat(self) -> np.ndarray:
        return np.concatenate([p.ravel() for p in self.params.values()])

    def to_manifest(self) -> dict:
        return {"params": [{"name": k, "shape": list(v.shape), "values": v.ravel().tolist()}
                           for k, v in self.params.items()],
                "adam_step": self.step}

    def save(self, path: Union[str, os.PathLike]) -> None:
        with io.open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_manifest(), fh)

    def load(self, path: Union[str, os.PathLike]) -> None:
        with io.open(path, encoding="utf-8") as fh:
            manifest = json.load(fh)
        self.restore({p["name"]: np.array(p["values"], dtype=np.float64).reshape(p["shape"])
                      for p in manifest["params"]})


def glorot_uniform(rng: np.random.Generator, shape, fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


def add_dense(store: ParamStore, name: str, fan_in: int, fan_out: int,
              rng: np.random.Generator) -> None:
    if fan_in <= 0 or fan_out <= 0:
        raise ShapeError("dense dimensions must be positive")
    store.add(f"{name}.W", glorot_uniform(rng, (fan_out, fan_in), fan_in, fan_out))
    store.add(f"{name}.b", np.zeros(fan_out))


def dense_forward(store: ParamStore, name: str, x: np.ndarray) -> np.ndarray:
    W, b = store[f"{name}.W"], store[f"{name}.b"]
    if x.shape[-1] != W.shape[1]:
        raise ShapeError(f"{name}: input width {x.shape[-1]} != {W.shape[1]}")
    return x @ W.T + b


def dense_backward(store: ParamStore, name: str, x: np.ndarray, dy: np.ndarray) -> np.ndarray:
    W = store[f"{name}.W"]
    x2, dy2 = np.atleast_2d(x), np.atleast_2d(dy)
    store.grads[f"{name}.W"] += dy2.T @ x2
    store.grads[f"{name}.b"] += dy2.sum(axis=0)
    return dy @ W


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def relu_backward(pre: np.ndarray, dy: np.ndarray) -> np.ndarray:
    return dy * (pre > 0)


def add_conv1d(store: ParamStore, name: str, width: int, in_dim: int, n_filters: int,
               rng: np.random.Generator) -> None:
    if width <= 0 or in_dim <= 0 or n_filters <= 0:
        raise ShapeError("conv dimensions must be positive")
    fan_in = width * in_dim
    store.add(f"{name}.W", glorot_uniform(rng, (n_filters, width, in_dim), fan_in, n_filters))
    store.add(f"{name}.b", np.zeros(n_filters))


def conv1d_maxpool_forward(store: ParamStore, name: str, x: np.ndarray,
                           lengths: np.ndarray) -> tuple[np.ndarray, dict]:
    """Valid convolution, bias, ReLU and max over valid time steps.

    ``x`` is (B, T, D). A window starting at ``p`` is valid when
    ``p + width <= length``. A sentence shorter than the filter has no valid
    window; it gets one all-zero window, so the output is ``relu(bias)``.
    Returns (B, F) and a cache for the backward pass.
    """
    W, b = store[f"{name}.W"], store[f"{name}.b"]
    F, w, D = W.shape
    B, T, Dx = x.shape
    if Dx != D:
        raise ShapeError(f"{name}: input width {Dx} != {D}")
    lengths = np.asarray(lengths)
    n_pos = T - w + 1
    short = lengths < w
    if n_pos > 0:
        win = sliding_window_view(x, w, axis=1)            # (B, P, D, w)
        win = win.transpose(0, 1, 3, 2).reshape(B, n_pos, w * D)
        pre = win @ W.reshape(F, w * D).T + b              # (B, P, F)
        valid = np.arange(n_pos)[None, :] < (lengths - w + 1)[:, None]
        pre = np.where(valid[:, :, None], pre, -np.inf)
        idx = pre.argmax(axis=1)                           # (B, F)
        peak = np.take_along_axis(pre, idx[:, None, :], axis=1)[:, 0, :]
    else:
        win = None
        idx = np.zeros((B, F), dtype=np.int64)
        peak = np.empty((B, F))
    peak = np.where(short[:, None], b[None, :], peak)
    out = relu(peak)
    return out, {"win": win, "idx": idx, "peak": peak, "short": short}


def conv1d_maxpool_backward(store: ParamStore, name: str, cache: dict,
                            dout: np.ndarray) -> None:
    """Accumulate filter/bias gradients. Embeddings are frozen, so no input gradient."""
    W = store[f"{name}.W"]
    dpeak = relu_backward(cache["peak"], dout)            # (B, F)
    store.grads[f"{name}.b"] += dpeak.sum(axis=0)
    if cache["win"] is None:
        return
    dwin = np.where(cache["short"][:, None], 0.0, dpeak)
    win = cache["win"]
    B = win.shape[0]
    chosen = win[np.arange(B)[:, None], cache["idx"]]    # (B, F, w*D)
    dW = np.einsum("bf,bfk->fk", dwin, chosen)
    store.grads[f"{name}.W"] += dW.reshape(W.shape)


def softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def softmax_xent(logits: np.ndarray, label: int) -> tuple[float, np.ndarray, np.ndarray]:
    """Loss ``-log p[label]``, probabilities, and gradient ``p - onehot``."""
    logits = np.asarray(logits, dtype=np.float64)
    if not 0 <= label < logits.shape[-1]:
        raise ValueError(f"label {label} out of range for {logits.shape[-1]} classes")
    z = logits - logits.max()
    log_norm = np.log(np.exp(z).sum())
    p = np.exp(z - log_norm)
    grad = p.copy()
    grad[label] -= 1.0
    return float(log_norm - z[label]), p, grad


def softmax_xent_batch(logits: np.ndarray, labels: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
    """Mean cross-entropy over the batch; gradient already divided by B."""
    labels = np.asarray(labels)
    B, C = logits.shape
    if labels.shape != (B,):
        raise ShapeError("labels must be a (B,) vector")
    if labels.min() < 0 or labels.max() >= C:
        raise ValueError("label out of range")
    z = logits - logits.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(z).sum(axis=1))
    rows = np.arange(B)
    loss = float(np.mean(log_norm - z[rows, labels]))
    p = np.exp(z - log_norm[:, None])
    grad = p.copy()
    grad[rows, labels] -= 1.0
    return loss, p, grad / B


def adam_step(store: ParamStore, lr: float, beta1: float = 0.9, beta2: float = 0.999,
              eps: float = 1e-8) -> None:
    store.step += 1
    t = store.step
    c1 = 1.0 - beta1 ** t
    c2 = 1.0 - beta2 ** t
    for k, p in store.params.items():
        g = store.grads[k]
        m, v = store.m[k], store.v[k]
        m *= beta1
        m += (1.0 - beta1) * g
        v *= beta2
        v += (1.0 - beta2) * g * g
        p -= lr * (m / c1) / (np.sqrt(v / c2) + eps)
        g.fill(0.0)


def perturb(store: ParamStore, rng: np.random.Generator, scale: float = 0.05) -> None:
    """Add small uniform noise to every parameter.

    Zero-initialised biases put ReLU units exactly on their kink (e.g. the
    ``relu(bias)`` path of too-short sentences), where finite differences
    are meaningless; gradient checks should run at a generic point.
    """
    for p in store.params.values():
        p += rng.uniform(-scale, scale, p.shape)


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> np.ndarray:
    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), 1e-8)
    return np.abs(analytic - numeric) / denom


def grad_check(model, inputs, labels, n_params: int = 200, h: float = 1e-5,
               rng: Optional[np.random.Generator] = None,
               backward_hook: Optional[Callable[[dict], None]] = None) -> float:
    """Max relative error between backprop and central differences.

    ``model`` needs ``store`` and ``loss_and_grad(inputs, labels)``, which
    returns the loss and fills ``store.grads``. Coordinates are sampled
    across all blocks, at least ``n_params`` of them (or all, if fewer).
    ``backward_hook`` may rewrite the analytic gradients before comparison,
    for mutation testing.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    store = model.store
    store.zero_grad()
    model.loss_and_grad(inputs, labels)
    analytic = {k: g.copy() for k, g in store.grads.items()}
    store.zero_grad()
    if backward_hook is not None:
        backward_hook(analytic)

    coords = [(k, i) for k in store.names() for i in range(store[k].size)]
    if len(coords) > n_params:
        # every block gets represented, the rest drawn uniformly
        per_block = [(k, int(rng.integers(store[k].size))) for k in store.names()]
        extra_idx = rng.choice(len(coords), size=n_params, replace=False)
        coords = per_block + [coords[i] for i in extra_idx]

    worst = 0.0
    for k, i in coords:
        flat = store[k].reshape(-1)
        old = flat[i]
        flat[i] = old + h
        up = model.loss(inputs, labels)
        flat[i] = old - h
        down = model.loss(inputs, labels)
        flat[i] = old
        numeric = (up - down) / (2 * h)
        err = float(relative_error(np.array(analytic[k].reshape(-1)[i]), np.array(numeric)))
        worst = max(worst, err)
    return worst
