"""Sentence-level SentiWordNet features and their normalisation.

Nine features per sentence: length ``l``; summed positivity ``P``,
negativity ``N`` and objectivity ``O``; ``AD = |P - N|``; and the four
sums divided by ``l``. A token missing from the lexicon contributes
``(0, 0, 1)``, i.e. it counts as fully objective.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, TextIO, Union

import numpy as np

from .corpus import Example
from .lexicon import SentimentLexicon, lookup

FEATURE_NAMES = ("l", "P", "N", "O", "AD", "P_l", "N_l", "O_l", "AD_l")
# dropping net objectivity gives the 8-wide input (O is l - P - N anyway)
FEATURES_8 = ("l", "P", "N", "AD", "P_l", "N_l", "O_l", "AD_l")


@dataclass(frozen=True)
class FeatureVector:
    l: int
    P: float
    N: float
    O: float
    AD: float
    P_scaled: float
    N_scaled: float
    O_scaled: float
    AD_scaled: float

    def as_array(self) -> np.ndarray:
        return np.array([self.l, self.P, self.N, self.O, self.AD,
                         self.P_scaled, self.N_scaled, self.O_scaled, self.AD_scaled],
                        dtype=np.float64)


def extract(lexicon: SentimentLexicon, example: Example) -> FeatureVector:
    tokens = example.tokens
    if not tokens:
        raise ValueError("example has no tokens")
    P = N = O = 0.0
    for tok in tokens:
        score = lookup(lexicon, tok)
        if score is None:
            O += 1.0
        else:
            P += score.positivity
            N += score.negativity
            O += score.objectivity
    l = len(tokens)
    AD = abs(P - N)
    return FeatureVector(l, P, N, O, AD, P / l, N / l, O / l, AD / l)


def feature_matrix(lexicon: SentimentLexicon, examples: Sequence[Example]) -> np.ndarray:
    """(n, 9) raw features in FEATURE_NAMES order."""
    if not examples:
        return np.zeros((0, len(FEATURE_NAMES)))
    return np.vstack([extract(lexicon, ex).as_array() for ex in examples])


def select_features(matrix: np.ndarray, names: Sequence[str] = FEATURE_NAMES) -> np.ndarray:
    cols = [FEATURE_NAMES.index(n) for n in names]
    return matrix[:, cols]


@dataclass(frozen=True)
class NormalizationSpec:
    mean: np.ndarray
    max_abs_deviation: np.ndarray

    def __post_init__(self):
        if np.any(self.max_abs_deviation < 0):
            raise ValueError("max_abs_deviation must be non-negative")


def fit_normalizer(vectors: Union[np.ndarray, Iterable[FeatureVector]]) -> NormalizationSpec:
    """Per-column mean and largest absolute deviation from it (training split only)."""
    x = _as_matrix(vectors)
    if x.shape[0] == 0:
        raise ValueError("cannot fit normalizer on zero vectors")
    mean = x.mean(axis=0)
    mad = np.abs(x - mean).max(axis=0)
    # a constant column can still show rounding residue around its mean
    mad = np.where(mad <= 1e-12 * np.maximum(1.0, np.abs(mean)), 0.0, mad)
    return NormalizationSpec(mean=mean, max_abs_deviation=mad)


def normalize(spec: NormalizationSpec,
              fv: Union[FeatureVector, np.ndarray]) -> np.ndarray:
    """``(x - mean) / max_abs_deviation``; constant columns map to 0. No clamping.

    Accepts a single FeatureVector, a 1-D row, or an (n, k) matrix.
    """
    x = fv.as_array() if isinstance(fv, FeatureVector) else np.asarray(fv, dtype=np.float64)
    centered = x - spec.mean
    scale = np.where(spec.max_abs_deviation > 0, spec.max_abs_deviation, 1.0)
    out = centered / scale
    return np.where(spec.max_abs_deviation > 0, out, 0.0)


def _as_matrix(vectors) -> np.ndarray:
    if isinstance(vectors, np.ndarray):
        return np.atleast_2d(vectors).astype(np.float64)
    rows = [v.as_array() for v in vectors]
    if not rows:
        return np.zeros((0, len(FEATURE_NAMES)))
    return np.vstack(rows)


def export_csv(out: Union[TextIO, str, os.PathLike], matrix: np.ndarray,
               ids: Optional[Sequence[int]] = None) -> None:
    """Write ``id,l,P,N,O,AD,P_l,N_l,O_l,AD_l`` rows (raw or normalised values)."""
    if isinstance(out, (str, os.PathLike)):
        with io.open(out, "w", encoding="utf-8", newline="") as fh:
            return export_csv(fh, matrix, ids)
    if ids is None:
        ids = range(matrix.shape[0])
    writer = csv.writer(out)
    writer.writerow(("id",) + FEATURE_NAMES)
    for i, row in zip(ids, matrix):
        writer.writerow([i] + [repr(float(v)) for v in row])


def read_csv(stream: Union[TextIO, str, os.PathLike]) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(stream, (str, os.PathLike)):
        with io.open(stream, encoding="utf-8", newline="") as fh:
            return read_csv(fh)
    reader = csv.reader(stream)
    header = next(reader)
    if tuple(header) != ("id",) + FEATURE_NAMES:
        raise ValueError(f"unexpected feature header {header}")
    ids, rows = [], []
    for rec in reader:
        ids.append(int(rec[0]))
        rows.append([float(v) for v in rec[1:]])
    return np.array(ids, dtype=np.int64), np.array(rows, dtype=np.float64).reshape(-1, len(FEATURE_NAMES))
