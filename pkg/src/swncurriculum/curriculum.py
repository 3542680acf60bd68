"""Curriculum strategies and schedulers.

A strategy scores training examples (lower is easier); ``rank`` turns the
scores into an easiest-first permutation and ``schedule`` chops it into
phases of ``bs`` new examples. Baby Steps trains phase ``k`` on everything
added so far, One-Pass on the ``k``-th chunk alone.
"""

from __future__ import annotations

import hashlib
import io
import json
import os
from dataclasses import dataclass
from typing import Optional, Sequence, TextIO, Union

import numpy as np

STRATEGIES = ("sentiwordnet", "sentence_length", "none")
MODES = ("baby_steps", "one_pass")

# independent RNG streams derived from one run seed
ORDER_STREAM = 1
SHUFFLE_STREAM = 2
INIT_STREAM = 3
AUX_STREAM = 4

SeedLike = Union[int, Sequence[int]]


def rng_for(seed: SeedLike, *stream: int) -> np.random.Generator:
    key = [seed] if isinstance(seed, (int, np.integer)) else list(seed)
    return np.random.default_rng([int(k) for k in key] + [int(s) for s in stream])


@dataclass(frozen=True)
class Strategy:
    kind: str
    scores: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.kind not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.kind!r}")
        if self.kind != "none" and self.scores is None:
            raise ValueError(f"strategy {self.kind!r} needs scores")
        if self.scores is not None:
            object.__setattr__(self, "scores", np.asarray(self.scores, dtype=np.float64))

    @classmethod
    def sentence_length(cls, examples) -> "Strategy":
        return cls("sentence_length", np.array([len(ex.tokens) for ex in examples], dtype=np.float64))

    @classmethod
    def sentiwordnet(cls, ranking) -> "Strategy":
        return cls("sentiwordnet", getattr(ranking, "scores", ranking))

    @classmethod
    def none(cls) -> "Strategy":
        return cls("none")


def rank(strategy: Strategy, n: int, seed: SeedLike = 0) -> np.ndarray:
    """Easiest-first permutation of ``0..n-1``; ties broken by ascending id."""
    if strategy.kind == "none":
        return rng_for(seed, ORDER_STREAM).permutation(n)
    if strategy.scores.shape != (n,):
        raise ValueError(f"expected {n} scores, got {strategy.scores.shape[0]}")
    return np.argsort(strategy.scores, kind="stable")


@dataclass(frozen=True)
class CurriculumSchedule:
    phases: tuple[np.ndarray, ...]
    mode: str
    bs: int

    def __len__(self) -> int:
        return len(self.phases)

    @property
    def order(self) -> np.ndarray:
        return np.concatenate(self.phases) if self.phases else np.zeros(0, dtype=np.int64)

    def training_set(self, k: int) -> np.ndarray:
        """Ids trained on in phase ``k`` (0-based), in curriculum order."""
        if not 0 <= k < len(self.phases):
            raise IndexError(f"phase {k} out of range for {len(self.phases)} phases")
        if self.mode == "baby_steps":
            return np.concatenate(self.phases[:k + 1])
        return self.phases[k]

    def to_dict(self) -> dict:
        return {"mode": self.mode, "bs": self.bs,
                "phases": [p.tolist() for p in self.phases]}

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), separators=(",", ":"), sort_keys=True)
        return hashlib.sha256(blob.encode("ascii")).hexdigest()

    def to_json(self, out: Union[TextIO, str, os.PathLike, None] = None) -> Optional[str]:
        text = json.dumps(self.to_dict())
        if out is None:
            return text
        if isinstance(out, (str, os.PathLike)):
            with io.open(out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            out.write(text)
        return None

    @classmethod
    def from_dict(cls, d: dict) -> "CurriculumSchedule":
        return cls(phases=tuple(np.asarray(p, dtype=np.int64) for p in d["phases"]),
                   mode=d["mode"], bs=int(d["bs"]))


def schedule(order: Sequence[int], bs: int, mode: str = "baby_steps") -> CurriculumSchedule:
    if bs < 1:
        raise ValueError("curriculum batch size must be >= 1")
    if mode not in MODES:
        raise ValueError(f"unknown scheduler mode {mode!r}")
    order = np.asarray(order, dtype=np.int64)
    phases = tuple(order[i:i + bs] for i in range(0, order.size, bs))
    return CurriculumSchedule(phases=phases, mode=mode, bs=bs)


def shuffled(ids: np.ndarray, seed: SeedLike) -> np.ndarray:
    """Seeded shuffle of the id set; the input order does not matter."""
    ids = np.sort(np.asarray(ids, dtype=np.int64))
    return ids[rng_for(seed, SHUFFLE_STREAM).permutation(ids.size)]


def phase_iterator(sched: CurriculumSchedule, k: int, seed: SeedLike) -> np.ndarray:
    """Phase ``k``'s training set in a seeded random order.

    Pass a different ``seed`` (e.g. ``(run_seed, epoch)``) per epoch to
    reshuffle.
    """
    return shuffled(sched.training_set(k), seed)
