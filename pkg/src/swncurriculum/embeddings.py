"""GloVe-format word vectors and sentence embedding helpers.

Vectors are frozen. Sentences are embedded into a fixed ``max_len x dim``
matrix, zero padded, together with the number of valid rows.
"""

from __future__ import annotations

import hashlib
import io
import os
from dataclasses import dataclass, field
from typing import Collection, Iterable, Mapping, Optional, Sequence, Union

import numpy as np

OOV_POLICIES = ("zero", "hash")


class EmbeddingParseError(ValueError):
    def __init__(self, message: str, lineno: int = 0):
        self.lineno = lineno
        if lineno:
            message = f"{message} at line {lineno}"
        super().__init__(message)


@dataclass(frozen=True)
class EmbeddingTable:
    dimension: int
    vectors: Mapping[str, np.ndarray] = field(repr=False)
    oov_policy: str = "zero"
    oov_scale: float = 0.25

    def __post_init__(self):
        if self.dimension <= 0:
            raise ValueError("dimension must be positive")
        if self.oov_policy not in OOV_POLICIES:
            raise ValueError(f"unknown oov_policy {self.oov_policy!r}")

    def __contains__(self, word: str) -> bool:
        return word in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)

    def with_policy(self, oov_policy: str, oov_scale: Optional[float] = None) -> "EmbeddingTable":
        return EmbeddingTable(self.dimension, self.vectors, oov_policy,
                              self.oov_scale if oov_scale is None else oov_scale)

    def vector(self, word: str) -> np.ndarray:
        vec = self.vectors.get(word)
        if vec is not None:
            return vec
        if self.oov_policy == "zero":
            return np.zeros(self.dimension)
        # stable across processes, unlike hash()
        digest = hashlib.blake2b(word.encode("utf-8"), digest_size=8).digest()
        rng = np.random.default_rng(int.from_bytes(digest, "little"))
        return rng.uniform(-self.oov_scale, self.oov_scale, self.dimension)


def _is_float(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def parse_glove(stream: Union[Iterable[str], str, os.PathLike],
                expected_dim: Optional[int] = None,
                vocab: Optional[Collection[str]] = None,
                oov_policy: str = "zero") -> EmbeddingTable:
    """Read ``word v1 ... vd`` lines.

    ``vocab`` restricts which words are kept (the full 840B file has ~2.2M
    rows). Keys are lowercased to match corpus tokens; when a cased file
    holds several casings of a word, the first one in the file wins.
    """
    if isinstance(stream, (str, os.PathLike)):
        with io.open(stream, encoding="utf-8", errors="replace") as fh:
            return parse_glove(fh, expected_dim, vocab, oov_policy)
    dim = expected_dim
    vectors: dict[str, np.ndarray] = {}
    seen_any = False
    for lineno, line in enumerate(stream, start=1):
        parts = line.rstrip("\r\n").rstrip(" ").split(" ")
        if len(parts) < 2:
            if not line.strip():
                continue
            raise EmbeddingParseError("line has no vector components", lineno)
        if dim is None:
            dim = len(parts) - 1
        if len(parts) - 1 != dim:
            # a handful of 840B entries contain spaces ("...", "at name@x.com"):
            # extra leading fields are accepted only if they are not numbers
            if len(parts) - 1 > dim and not _is_float(parts[1]):
                parts = [" ".join(parts[:-dim])] + parts[-dim:]
            else:
                raise EmbeddingParseError("dimension mismatch", lineno)
        seen_any = True
        word = parts[0]
        key = word.lower()
        if vocab is not None and key not in vocab:
            continue
        if key in vectors:
            continue
        try:
            vec = np.array([float(v) for v in parts[1:]], dtype=np.float64)
        except ValueError:
            raise EmbeddingParseError("unparsable float", lineno) from None
        vectors[key] = vec
    if not seen_any:
        raise EmbeddingParseError("no vectors")
    return EmbeddingTable(dimension=dim, vectors=vectors, oov_policy=oov_policy)


def embed_sequence(table: EmbeddingTable, tokens: Sequence[str],
                   max_len: int) -> tuple[np.ndarray, int]:
    if max_len <= 0:
        raise ValueError("max_len must be positive")
    out = np.zeros((max_len, table.dimension))
    valid = min(len(tokens), max_len)
    for i in range(valid):
        out[i] = table.vector(tokens[i])
    return out, valid


def mean_pool(matrix: np.ndarray, valid_length: int) -> np.ndarray:
    if valid_length < 1:
        raise ValueError("empty sentence")
    return matrix[:valid_length].mean(axis=0)


@dataclass(frozen=True)
class IndexedSplit:
    """Token-index form of a split: ``token_ids[i, :lengths[i]]`` are valid."""

    token_ids: np.ndarray
    lengths: np.ndarray
    labels: np.ndarray

    def __len__(self) -> int:
        return len(self.labels)


class EmbeddingLookup:
    """Dense (vocab + 1) x dim matrix; row 0 is the all-zero padding row.

    Keeps memory at vocabulary size instead of materialising
    ``n x max_len x dim`` for a whole split.
    """

    def __init__(self, table: EmbeddingTable, words: Iterable[str]):
        self.index: dict[str, int] = {}
        rows = [np.zeros(table.dimension)]
        for w in words:
            if w not in self.index:
                self.index[w] = len(rows)
                rows.append(table.vector(w))
        self.matrix = np.vstack(rows)
        self.dimension = table.dimension

    def encode(self, examples, max_len: int) -> IndexedSplit:
        n = len(examples)
        ids = np.zeros((n, max_len), dtype=np.int64)
        lengths = np.zeros(n, dtype=np.int64)
        labels = np.zeros(n, dtype=np.int64)
        for i, ex in enumerate(examples):
            toks = ex.tokens[:max_len]
            ids[i, :len(toks)] = [self.index[t] for t in toks]
            lengths[i] = len(toks)
            labels[i] = ex.label
        return IndexedSplit(ids, lengths, labels)

    def embed(self, token_ids: np.ndarray) -> np.ndarray:
        return self.matrix[token_ids]


def build_lookup(table: EmbeddingTable, *splits) -> EmbeddingLookup:
    words = (t for split in splits for ex in split for t in ex.tokens)
    return EmbeddingLookup(table, words)


def corpus_vocabulary(*splits) -> set[str]:
    return {t for split in splits for ex in split for t in ex.tokens}
