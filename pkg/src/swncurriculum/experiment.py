"""End-to-end runs: lexicon -> features -> aux model -> ranking -> schedule ->
classifier training -> evaluation, repeated over seeds and strategies."""

from __future__ import annotations

import dataclasses
import io
import json
import logging
import os
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from . import corpus, curriculum, embeddings, features, models
from .curriculum import INIT_STREAM, AUX_STREAM, Strategy, rng_for
from .lexicon import SentimentLexicon, parse_swn_file

log = logging.getLogger(__name__)

# curriculum batch sizes for the CNN; the MLP reuses them
DEFAULT_BS = {"sentiwordnet": 1400, "sentence_length": 750}


class ResourceError(RuntimeError):
    """A data file is missing or unreadable."""


@dataclass
class ExperimentConfig:
    swn_path: Optional[str] = None
    sst_dir: Optional[str] = None
    train_tsv: Optional[str] = None
    dev_tsv: Optional[str] = None
    test_tsv: Optional[str] = None
    embeddings_path: Optional[str] = None
    oov_policy: str = "zero"
    model: str = "kim_cnn"
    strategy: str = "sentiwordnet"
    strategies: list[str] = field(default_factory=lambda: ["sentiwordnet", "sentence_length", "none"])
    mode: str = "baby_steps"
    bs: Optional[int] = None
    epochs_per_phase: int = 2
    final_epochs: int = 5
    sgd_batch: int = 32
    lr: float = 0.01
    max_len: int = 50
    repeats: int = 10
    base_seed: int = 0
    aux_epochs: int = 30
    aux_features: int = 9
    select_on_dev: bool = True
    report_path: Optional[str] = None

    def validate(self) -> None:
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")
        if self.bs is not None and self.bs < 1:
            raise ValueError("bs must be >= 1")
        if self.lr <= 0:
            raise ValueError("lr must be positive")
        if self.max_len < 1:
            raise ValueError("max_len must be >= 1")
        if self.sgd_batch < 1:
            raise ValueError("sgd_batch must be >= 1")
        if self.aux_features not in (8, 9):
            raise ValueError("aux_features must be 8 or 9")
        if self.model not in models.CLASSIFIERS:
            raise ValueError(f"unknown model {self.model!r}")
        if self.mode not in curriculum.MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        for s in [self.strategy, *self.strategies]:
            if s not in curriculum.STRATEGIES:
                raise ValueError(f"unknown strategy {s!r}")

    def curriculum_bs(self, strategy: str, n: int) -> int:
        if strategy == "none":
            # no curriculum: one phase holding the whole training set
            return self.bs if self.bs is not None else max(n, 1)
        return self.bs if self.bs is not None else DEFAULT_BS[strategy]

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_json(cls, path: Union[str, os.PathLike]) -> "ExperimentConfig":
        with io.open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def _require(path: Optional[str], what: str) -> str:
    if not path:
        raise ResourceError(f"no {what} path configured")
    if not os.path.exists(path):
        raise ResourceError(f"{what} not found: {path}")
    return path


class Resources:
    """Everything a run reads, loaded once and shared read-only across runs."""

    def __init__(self, config: ExperimentConfig, need_lexicon: bool = True,
                 need_embeddings: bool = True):
        self.config = config
        self.dataset = load_corpus(config)
        self._lexicon: Optional[SentimentLexicon] = None
        self._feature_cache: dict[int, tuple] = {}
        self.lookup: Optional[embeddings.EmbeddingLookup] = None
        self.splits: dict[str, embeddings.IndexedSplit] = {}
        if need_lexicon:
            self.lexicon
        if need_embeddings:
            self._load_embeddings()

    @property
    def lexicon(self) -> SentimentLexicon:
        if self._lexicon is None:
            path = _require(self.config.swn_path, "SentiWordNet file")
            try:
                self._lexicon = parse_swn_file(path)
            except OSError as err:
                raise ResourceError(f"cannot read {path}: {err}") from err
        return self._lexicon

    def _load_embeddings(self) -> None:
        path = _require(self.config.embeddings_path, "embeddings file")
        d = self.dataset
        vocab = embeddings.corpus_vocabulary(d.train, d.dev, d.test)
        try:
            table = embeddings.parse_glove(path, vocab=vocab, oov_policy=self.config.oov_policy)
        except OSError as err:
            raise ResourceError(f"cannot read {path}: {err}") from err
        self.table = table
        self.lookup = embeddings.build_lookup(table, d.train, d.dev, d.test)
        for name in ("train", "dev", "test"):
            self.splits[name] = self.lookup.encode(d.split(name), self.config.max_len)
        log.info("embeddings: %d/%d corpus words covered", len(table), len(vocab))

    def batcher(self, split: str) -> models.Batcher:
        enc = self.splits[split]
        lookup = self.lookup
        return lambda ids: ((lookup.embed(enc.token_ids[ids]), enc.lengths[ids]), enc.labels[ids])

    def normalized_features(self, width: int = 9):
        """(train, dev, test) normalised feature matrices; normaliser fit on train."""
        if width not in self._feature_cache:
            d = self.dataset
            raw = [features.feature_matrix(self.lexicon, d.split(s)) for s in ("train", "dev", "test")]
            names = features.FEATURE_NAMES if width == 9 else features.FEATURES_8
            raw = [features.select_features(m, names) for m in raw]
            spec = features.fit_normalizer(raw[0])
            self._feature_cache[width] = tuple(features.normalize(spec, m) for m in raw)
        return self._feature_cache[width]


def load_corpus(config: ExperimentConfig) -> corpus.Dataset:
    try:
        if config.sst_dir:
            _require(config.sst_dir, "SST directory")
            return corpus.load_sst_dir(config.sst_dir)
        if config.train_tsv:
            paths = [_require(p, f"{s} TSV") for p, s in
                     ((config.train_tsv, "train"), (config.dev_tsv, "dev"), (config.test_tsv, "test"))]
            return corpus.load_tsv_dataset(*paths)
    except FileNotFoundError as err:
        raise ResourceError(f"corpus file not found: {err}") from err
    raise ResourceError("no corpus configured (sst_dir or train/dev/test TSV)")


def evaluate(model: models.Network, batcher: models.Batcher, labels: np.ndarray) -> float:
    labels = np.asarray(labels)
    if labels.size == 0:
        raise ValueError("cannot evaluate on an empty split")
    return models.accuracy(models.predict(model, batcher, labels.size), labels)


@dataclass
class TrainOutcome:
    final_params: dict
    best_params: dict
    best_dev: float
    history: list


def fit_schedule(model: models.Network, sched: curriculum.CurriculumSchedule,
                 batcher: models.Batcher, dev: Optional[tuple], config: ExperimentConfig,
                 seed: int) -> TrainOutcome:
    """Warm-started phase training, then a final pass over the full set.

    Epoch ``e`` (counted across phases) shuffles with seed ``(seed, e)``.
    """
    tcfg = models.TrainConfig(lr=config.lr, sgd_batch=config.sgd_batch)
    all_ids = sched.order
    plan = [(k, sched.training_set(k)) for k in range(len(sched)) for _ in range(config.epochs_per_phase)]
    plan += [(len(sched), all_ids)] * config.final_epochs
    return _fit(model, plan, batcher, dev, tcfg, seed)


def fit_plain(model: models.Network, n: int, epochs: int, batcher: models.Batcher,
              dev: Optional[tuple], config: ExperimentConfig, seed: int) -> TrainOutcome:
    """Ordinary shuffled training on all ``n`` examples, no curriculum."""
    tcfg = models.TrainConfig(lr=config.lr, sgd_batch=config.sgd_batch)
    return _fit(model, [(0, np.arange(n))] * epochs, batcher, dev, tcfg, seed)


def _fit(model, plan, batcher, dev, tcfg, seed) -> TrainOutcome:
    best_dev, best = -1.0, model.store.snapshot()
    history = []
    for epoch, (phase, members) in enumerate(plan):
        ids = curriculum.shuffled(members, (seed, epoch))
        loss = models.train_classifier(model, ids, batcher, tcfg)
        entry = {"epoch": epoch, "phase": phase, "size": int(len(members)), "loss": loss}
        if dev is not None:
            acc = evaluate(model, *dev)
            entry["dev_accuracy"] = acc
            if acc > best_dev:
                best_dev, best = acc, model.store.snapshot()
        history.append(entry)
        log.debug("epoch %s", entry)
    return TrainOutcome(model.store.snapshot(), best, best_dev, history)


@dataclass
class RunResult:
    seed: int
    strategy: str
    dev_accuracy: float
    test_accuracy: float
    phase_count: int
    schedule_digest: str
    wall_time: float
    aux_test_accuracy: Optional[float] = None
    model: Optional[models.Network] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d.pop("model")
        return d


def compute_strategy(config: ExperimentConfig, res: Resources, kind: str,
                     seed: int) -> tuple[Strategy, Optional[models.AuxResult]]:
    train = res.dataset.train
    if kind == "none":
        return Strategy.none(), None
    if kind == "sentence_length":
        return Strategy.sentence_length(train), None
    aux = train_aux_model(config, res, seed)
    x_train = res.normalized_features(config.aux_features)[0]
    ranking = models.difficulty_scores(aux.model, x_train, corpus.labels_of(train))
    return Strategy.sentiwordnet(ranking), aux


def train_aux_model(config: ExperimentConfig, res: Resources, seed: int) -> models.AuxResult:
    x_train, x_dev, x_test = res.normalized_features(config.aux_features)
    d = res.dataset
    return models.train_aux(
        x_train, corpus.labels_of(d.train), rng_for(seed, AUX_STREAM),
        models.AuxConfig(epochs=config.aux_epochs, lr=config.lr, sgd_batch=config.sgd_batch),
        dev=(x_dev, corpus.labels_of(d.dev)), test=(x_test, corpus.labels_of(d.test)))


def build_schedule(config: ExperimentConfig, res: Resources, strategy: Strategy,
                   seed: int) -> curriculum.CurriculumSchedule:
    n = len(res.dataset.train)
    order = curriculum.rank(strategy, n, seed)
    return curriculum.schedule(order, config.curriculum_bs(strategy.kind, n), config.mode)


def run_single(config: ExperimentConfig, seed: int, resources: Optional[Resources] = None,
               strategy: Optional[str] = None) -> RunResult:
    config.validate()
    kind = strategy or config.strategy
    res = resources or Resources(config, need_lexicon=(kind == "sentiwordnet"))
    t0 = time.perf_counter()
    strat, aux = compute_strategy(config, res, kind, seed)
    sched = build_schedule(config, res, strat, seed)
    model = models.make_classifier(config.model, rng_for(seed, INIT_STREAM), res.lookup.dimension)
    dev = (res.batcher("dev"), res.splits["dev"].labels)
    outcome = fit_schedule(model, sched, res.batcher("train"), dev, config, seed)
    if config.select_on_dev:
        model.store.restore(outcome.best_params)
    result = RunResult(
        seed=seed, strategy=kind,
        dev_accuracy=evaluate(model, *dev),
        test_accuracy=evaluate(model, res.batcher("test"), res.splits["test"].labels),
        phase_count=len(sched), schedule_digest=sched.digest(),
        wall_time=time.perf_counter() - t0,
        aux_test_accuracy=None if aux is None else aux.test_accuracy,
        model=model)
    log.info("%s seed=%d dev=%.4f test=%.4f", kind, seed, result.dev_accuracy, result.test_accuracy)
    return result


@dataclass
class RunReport:
    strategy: str
    config: dict
    runs: list[dict]
    mean_test_accuracy: float
    std_test_accuracy: float

    @classmethod
    def from_runs(cls, strategy: str, config: ExperimentConfig,
                  runs: Sequence[RunResult]) -> "RunReport":
        mean, std = mean_std([r.test_accuracy for r in runs])
        return cls(strategy, config.to_dict(), [r.to_dict() for r in runs], mean, std)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "RunReport":
        return cls(**d)


def mean_std(values: Sequence[float]) -> tuple[float, float]:
    """Arithmetic mean and population standard deviation."""
    if len(values) == 0:
        raise ValueError("no values")
    arr = np.asarray(values, dtype=np.float64)
    return float(sum(values) / len(values)), float(arr.std())


def run_comparison(config: ExperimentConfig, resources: Optional[Resources] = None) -> list[RunReport]:
    """Every strategy at seeds ``base_seed + r``; seeds are shared so runs pair up."""
    config.validate()
    res = resources or Resources(config, need_lexicon="sentiwordnet" in config.strategies)
    reports = []
    for kind in config.strategies:
        runs = []
        for r in range(config.repeats):
            seed = config.base_seed + r
            try:
                runs.append(run_single(config, seed, res, strategy=kind))
            except Exception as err:
                raise RuntimeError(f"run failed (strategy={kind}, seed={seed}): {err}") from err
        reports.append(RunReport.from_runs(kind, config, runs))
    if config.report_path:
        write_reports(reports, config.report_path)
    return reports


def write_reports(reports: Sequence[RunReport], path: Union[str, os.PathLike]) -> None:
    with io.open(path, "w", encoding="utf-8") as fh:
        json.dump([r.to_dict() for r in reports], fh, indent=2)


def read_reports(path: Union[str, os.PathLike]) -> list[RunReport]:
    with io.open(path, encoding="utf-8") as fh:
        return [RunReport.from_dict(d) for d in json.load(fh)]
