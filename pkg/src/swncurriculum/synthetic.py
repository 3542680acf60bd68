"""Synthetic stand-ins for SentiWordNet, SST and GloVe files.

Useful when the real resources are not at hand: the generated files use the
real on-disk formats, so the whole file-based pipeline runs unchanged. The
corpus has a tunable share of "noisy" sentences whose wording disagrees with
their label, which gives curricula something to sort.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .corpus import Example, to_ptb_line


@dataclass
class SyntheticSpec:
    n_train: int = 1000
    n_dev: int = 200
    n_test: int = 400
    n_sentiment_words: int = 60
    n_neutral_words: int = 120
    n_unlisted_words: int = 40
    emb_dim: int = 32
    noise_fraction: float = 0.3
    min_len: int = 3
    max_len: int = 25


def _vocabulary(spec: SyntheticSpec):
    pos = [f"posw{i}" for i in range(spec.n_sentiment_words)]
    neg = [f"negw{i}" for i in range(spec.n_sentiment_words)]
    neu = [f"neuw{i}" for i in range(spec.n_neutral_words)]
    unl = [f"oovw{i}" for i in range(spec.n_unlisted_words)]
    return pos, neg, neu, unl


def swn_lines(spec: SyntheticSpec, rng: np.random.Generator) -> list[str]:
    pos, neg, neu, _ = _vocabulary(spec)
    lines = ["# synthetic SentiWordNet-format lexicon",
             "# POS\tID\tPosScore\tNegScore\tSynsetTerms\tGloss"]
    sid = 1
    for words, sign in ((pos, 1), (neg, -1), (neu, 0)):
        for w in words:
            # one to three synsets per word, scores in eighths like the real file
            for sense in range(1, int(rng.integers(1, 4)) + 1):
                if sign == 0:
                    p, n = rng.integers(0, 2), rng.integers(0, 2)
                else:
                    strong, weak = int(rng.integers(3, 8)), int(rng.integers(0, 2))
                    p, n = (strong, weak) if sign > 0 else (weak, strong)
                lines.append(f"a\t{sid:08d}\t{p / 8}\t{n / 8}\t{w}#{sense}\tsynthetic gloss")
                sid += 1
    return lines


def _sentence(label: int, noisy: bool, spec: SyntheticSpec, rng, vocab) -> list[str]:
    pos, neg, neu, unl = vocab
    length = int(rng.integers(spec.min_len, spec.max_len + 1))
    polarity = (label - 2) / 2.0
    if noisy:
        polarity = rng.uniform(-1, 1)
    p_sent = 0.15 + 0.45 * abs(polarity)
    words = []
    for _ in range(length):
        u = rng.random()
        if u < p_sent:
            pool = pos if (polarity > 0) == (rng.random() < 0.85) else neg
            if polarity == 0:
                pool = pos if rng.random() < 0.5 else neg
        elif u < 0.9:
            pool = neu
        else:
            pool = unl
        words.append(pool[int(rng.integers(len(pool)))])
    return words


def make_examples(n: int, spec: SyntheticSpec, rng: np.random.Generator) -> list[Example]:
    vocab = _vocabulary(spec)
    labels = rng.choice(5, size=n, p=[0.13, 0.26, 0.19, 0.27, 0.15])
    noisy = rng.random(n) < spec.noise_fraction
    return [Example(i, tuple(_sentence(int(y), bool(z), spec, rng, vocab)), int(y))
            for i, (y, z) in enumerate(zip(labels, noisy))]


def glove_lines(spec: SyntheticSpec, rng: np.random.Generator) -> list[str]:
    pos, neg, neu, unl = _vocabulary(spec)
    direction = rng.normal(size=spec.emb_dim)
    direction /= np.linalg.norm(direction)
    lines = []
    for words, sign in ((pos, 1.0), (neg, -1.0), (neu, 0.0), (unl, 0.0)):
        for w in words:
            vec = rng.normal(0, 0.3, spec.emb_dim) + sign * rng.uniform(0.5, 1.5) * direction
            lines.append(w + " " + " ".join(f"{v:.5f}" for v in vec))
    return lines


def write_corpus(out_dir: Union[str, os.PathLike], spec: SyntheticSpec = SyntheticSpec(),
                 seed: int = 0) -> dict[str, str]:
    """Write ``swn.txt``, ``glove.txt`` and ``sst/{train,dev,test}.txt``; return their paths."""
    out = Path(out_dir)
    (out / "sst").mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    (out / "swn.txt").write_text("\n".join(swn_lines(spec, rng)) + "\n", encoding="utf-8")
    (out / "glove.txt").write_text("\n".join(glove_lines(spec, rng)) + "\n", encoding="utf-8")
    for name, n in (("train", spec.n_train), ("dev", spec.n_dev), ("test", spec.n_test)):
        rows = make_examples(n, spec, rng)
        (out / "sst" / f"{name}.txt").write_text(
            "\n".join(to_ptb_line(ex) for ex in rows) + "\n", encoding="utf-8")
    return {"swn_path": str(out / "swn.txt"), "sst_dir": str(out / "sst"),
            "embeddings_path": str(out / "glove.txt")}
