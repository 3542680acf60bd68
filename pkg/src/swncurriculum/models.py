"""Auxiliary difficulty network, difficulty scores, and the text classifiers."""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, TextIO, Union

import numpy as np

from . import nnet
from .nnet import ParamStore

NUM_CLASSES = 5

# ids -> (model inputs, labels)
Batcher = Callable[[np.ndarray], tuple[object, np.ndarray]]


class Network:
    """Shared loss/gradient plumbing. Subclasses define forward and backward."""

    store: ParamStore

    def forward(self, inputs) -> tuple[np.ndarray, dict]:
        raise NotImplementedError

    def backward(self, cache: dict, dlogits: np.ndarray) -> None:
        raise NotImplementedError

    def predict_proba(self, inputs) -> np.ndarray:
        logits, _ = self.forward(inputs)
        return nnet.softmax(logits)

    def loss(self, inputs, labels) -> float:
        logits, _ = self.forward(inputs)
        loss, _, _ = nnet.softmax_xent_batch(logits, labels)
        return loss

    def loss_and_grad(self, inputs, labels) -> float:
        logits, cache = self.forward(inputs)
        loss, _, dlogits = nnet.softmax_xent_batch(logits, labels)
        self.backward(cache, dlogits)
        return loss


class MLP(Network):
    """ReLU multilayer perceptron over fixed-width vectors."""

    def __init__(self, sizes: Sequence[int], rng: np.random.Generator):
        if len(sizes) < 2:
            raise ValueError("need at least input and output sizes")
        self.sizes = tuple(int(s) for s in sizes)
        self.store = ParamStore()
        for i, (a, b) in enumerate(zip(self.sizes[:-1], self.sizes[1:])):
            nnet.add_dense(self.store, f"fc{i}", a, b, rng)

    @property
    def n_layers(self) -> int:
        return len(self.sizes) - 1

    def forward(self, x: np.ndarray):
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        acts, pres = [x], []
        h = x
        for i in range(self.n_layers):
            z = nnet.dense_forward(self.store, f"fc{i}", h)
            if i < self.n_layers - 1:
                pres.append(z)
                h = nnet.relu(z)
                acts.append(h)
            else:
                h = z
        return h, {"acts": acts, "pres": pres}

    def backward(self, cache, dlogits):
        acts, pres = cache["acts"], cache["pres"]
        d = dlogits
        for i in reversed(range(self.n_layers)):
            d = nnet.dense_backward(self.store, f"fc{i}", acts[i], d)
            if i > 0:
                d = nnet.relu_backward(pres[i - 1], d)
        return d


class AuxModel(MLP):
    """Feed-forward sentiment model over the SentiWordNet sentence features."""

    def __init__(self, rng: np.random.Generator, d_in: int = 9,
                 hidden: Sequence[int] = (100, 50), n_classes: int = NUM_CLASSES):
        super().__init__((d_in, *hidden, n_classes), rng)


class MeanEmbeddingMLP(Network):
    kind = "mlp_mean_embedding"

    def __init__(self, rng: np.random.Generator, emb_dim: int = 300, hidden: int = 100,
                 n_classes: int = NUM_CLASSES):
        self.emb_dim = emb_dim
        self.mlp = MLP((emb_dim, hidden, n_classes), rng)
        self.store = self.mlp.store

    def forward(self, inputs):
        emb, lengths = inputs
        if emb.ndim != 3 or emb.shape[2] != self.emb_dim:
            raise nnet.ShapeError(f"expected (B, T, {self.emb_dim}) input, got {emb.shape}")
        lengths = np.asarray(lengths)
        if np.any(lengths < 1):
            raise ValueError("empty sentence")
        # padding rows are zero, so a plain sum over time equals the valid-row sum
        mask = np.arange(emb.shape[1])[None, :] < lengths[:, None]
        pooled = (emb * mask[:, :, None]).sum(axis=1) / lengths[:, None]
        return self.mlp.forward(pooled)

    def backward(self, cache, dlogits):
        self.mlp.backward(cache, dlogits)


class KimCNN(Network):
    """Single-layer CNN: filter widths 3/4/5, max over time, softmax head."""

    kind = "kim_cnn"

    def __init__(self, rng: np.random.Generator, emb_dim: int = 300,
                 widths: Sequence[int] = (3, 4, 5), n_filters: int = 50,
                 n_classes: int = NUM_CLASSES):
        self.emb_dim = emb_dim
        self.widths = tuple(widths)
        self.n_filters = n_filters
        self.store = ParamStore()
        for w in self.widths:
            nnet.add_conv1d(self.store, f"conv{w}", w, emb_dim, n_filters, rng)
        nnet.add_dense(self.store, "out", n_filters * len(self.widths), n_classes, rng)

    def forward(self, inputs):
        emb, lengths = inputs
        if emb.ndim != 3 or emb.shape[2] != self.emb_dim:
            raise nnet.ShapeError(f"expected (B, T, {self.emb_dim}) input, got {emb.shape}")
        feats, caches = [], []
        for w in self.widths:
            f, c = nnet.conv1d_maxpool_forward(self.store, f"conv{w}", emb, lengths)
            feats.append(f)
            caches.append(c)
        h = np.concatenate(feats, axis=1)
        logits = nnet.dense_forward(self.store, "out", h)
        return logits, {"h": h, "convs": caches}

    def backward(self, cache, dlogits):
        dh = nnet.dense_backward(self.store, "out", cache["h"], dlogits)
        F = self.n_filters
        for j, w in enumerate(self.widths):
            nnet.conv1d_maxpool_backward(self.store, f"conv{w}", cache["convs"][j],
                                         dh[:, j * F:(j + 1) * F])


CLASSIFIERS = {"kim_cnn": KimCNN, "mlp_mean_embedding": MeanEmbeddingMLP}


def make_classifier(kind: str, rng: np.random.Generator, emb_dim: int = 300) -> Network:
    try:
        cls = CLASSIFIERS[kind]
    except KeyError:
        raise ValueError(f"unknown model kind {kind!r}") from None
    return cls(rng, emb_dim=emb_dim)


def classifier_forward(model: Network, embedded: np.ndarray, valid_length: int) -> np.ndarray:
    """Class probabilities for one embedded sentence (max_len x dim)."""
    probs = model.predict_proba((embedded[None, :, :], np.array([valid_length])))
    return probs[0]


@dataclass
class TrainConfig:
    lr: float = 0.01
    sgd_batch: int = 32


def train_classifier(model: Network, stream: Sequence[int], batcher: Batcher,
                     config: TrainConfig = TrainConfig()) -> float:
    """One pass of minibatch Adam over ``stream`` in the given order.

    Minibatches are consecutive slices of the stream; returns mean batch loss.
    """
    stream = np.asarray(stream, dtype=np.int64)
    if stream.size == 0:
        raise ValueError("empty training stream")
    losses = []
    for start in range(0, stream.size, config.sgd_batch):
        ids = stream[start:start + config.sgd_batch]
        inputs, labels = batcher(ids)
        losses.append(model.loss_and_grad(inputs, labels))
        nnet.adam_step(model.store, config.lr)
    return float(np.mean(losses))


def predict(model: Network, batcher: Batcher, n: int, chunk: int = 256) -> np.ndarray:
    out = []
    for start in range(0, n, chunk):
        inputs, _ = batcher(np.arange(start, min(n, start + chunk)))
        out.append(model.predict_proba(inputs))
    return np.vstack(out) if out else np.zeros((0, NUM_CLASSES))


def accuracy(probs: np.ndarray, labels: np.ndarray) -> float:
    """Fraction of argmax hits; ties go to the lowest class index."""
    labels = np.asarray(labels)
    if labels.size == 0:
        raise ValueError("cannot score an empty split")
    return float(np.mean(np.argmax(probs, axis=1) == labels))


def array_batcher(x: np.ndarray, y: np.ndarray) -> Batcher:
    return lambda ids: (x[ids], y[ids])


@dataclass
class AuxConfig:
    epochs: int = 30
    lr: float = 0.01
    sgd_batch: int = 32
    hidden: tuple[int, ...] = (100, 50)


@dataclass
class AuxResult:
    model: AuxModel
    train_accuracy: float
    dev_accuracy: Optional[float]
    test_accuracy: Optional[float]
    best_epoch: int
    history: list = field(default_factory=list)


def train_aux(features: np.ndarray, labels: np.ndarray, rng: np.random.Generator,
              config: AuxConfig = AuxConfig(),
              dev: Optional[tuple[np.ndarray, np.ndarray]] = None,
              test: Optional[tuple[np.ndarray, np.ndarray]] = None) -> AuxResult:
    """Fit the auxiliary network; keeps the best-dev epoch when ``dev`` is given."""
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if features.ndim != 2 or features.shape[0] != labels.shape[0]:
        raise nnet.ShapeError(f"features {features.shape} do not match {labels.shape[0]} labels")
    model = AuxModel(rng, d_in=features.shape[1], hidden=config.hidden)
    batcher = array_batcher(features, labels)
    tcfg = TrainConfig(lr=config.lr, sgd_batch=config.sgd_batch)

    best = (-1.0, 0, model.store.snapshot())
    history = []
    for epoch in range(1, config.epochs + 1):
        loss = train_classifier(model, rng.permutation(len(labels)), batcher, tcfg)
        entry = {"epoch": epoch, "loss": loss}
        if dev is not None:
            entry["dev_accuracy"] = accuracy(model.predict_proba(dev[0]), dev[1])
            if entry["dev_accuracy"] > best[0]:
                best = (entry["dev_accuracy"], epoch, model.store.snapshot())
        history.append(entry)
    if dev is not None and config.epochs > 0:
        model.store.restore(best[2])
        best_epoch = best[1]
    else:
        best_epoch = config.epochs

    def acc(split):
        return None if split is None else accuracy(model.predict_proba(split[0]), split[1])

    return AuxResult(model=model,
                     train_accuracy=accuracy(model.predict_proba(features), labels),
                     dev_accuracy=acc(dev), test_accuracy=acc(test),
                     best_epoch=best_epoch, history=history)


def one_hot(labels: np.ndarray, n_classes: int = NUM_CLASSES) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    out = np.zeros((labels.size, n_classes))
    out[np.arange(labels.size), labels] = 1.0
    return out


def squared_error_scores(probs: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Sum over classes of (predicted probability - one-hot target)^2, per row."""
    probs = np.atleast_2d(probs)
    return ((probs - one_hot(labels, probs.shape[1])) ** 2).sum(axis=1)


@dataclass(frozen=True)
class DifficultyRanking:
    """Per-training-example difficulty; higher is harder."""

    scores: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.scores, dtype=np.float64)
        if s.ndim != 1 or not np.all(np.isfinite(s)) or np.any(s < 0):
            raise ValueError("difficulty scores must be a finite, non-negative vector")
        object.__setattr__(self, "scores", s)

    def __len__(self) -> int:
        return self.scores.size

    def to_csv(self, out: Union[TextIO, str, os.PathLike]) -> None:
        if isinstance(out, (str, os.PathLike)):
            with io.open(out, "w", encoding="utf-8", newline="") as fh:
                return self.to_csv(fh)
        w = csv.writer(out)
        w.writerow(("id", "score"))
        for i, s in enumerate(self.scores):
            w.writerow((i, repr(float(s))))

    @classmethod
    def from_csv(cls, stream: Union[TextIO, str, os.PathLike]) -> "DifficultyRanking":
        if isinstance(stream, (str, os.PathLike)):
            with io.open(stream, encoding="utf-8", newline="") as fh:
                return cls.from_csv(fh)
        reader = csv.reader(stream)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["id", "score"]:
            raise ValueError("ranking CSV must start with an id,score header")
        pairs = sorted((int(r[0]), float(r[1])) for r in reader if r)
        if [i for i, _ in pairs] != list(range(len(pairs))):
            raise ValueError("ranking ids must be exactly 0..n-1")
        return cls(np.array([s for _, s in pairs]))


def difficulty_scores(aux: Network, features: np.ndarray, labels: np.ndarray) -> DifficultyRanking:
    return DifficultyRanking(squared_error_scores(aux.predict_proba(features), labels))
