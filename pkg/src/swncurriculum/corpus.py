"""Stanford Sentiment Treebank ingestion.

The SST distribution stores one fully labelled binary tree per line, e.g.
``(3 (2 (2 The) (2 Rock)) (4 ...))``. Only the root label is used; the
leaves, read left to right and lowercased, are the sentence tokens.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, TextIO, Union

import numpy as np

NUM_CLASSES = 5

StreamLike = Union[TextIO, Iterable[str], str, os.PathLike]


class CorpusParseError(ValueError):
    def __init__(self, message: str, offset: Optional[int] = None,
                 lineno: Optional[int] = None, split: Optional[str] = None):
        self.reason = message
        self.offset = offset
        self.lineno = lineno
        self.split = split
        where = []
        if split is not None:
            where.append(f"split {split}")
        if lineno is not None:
            where.append(f"line {lineno}")
        if offset is not None:
            where.append(f"offset {offset}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


@dataclass(frozen=True)
class Example:
    id: int
    tokens: tuple[str, ...]
    label: int

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class Dataset:
    train: tuple[Example, ...]
    dev: tuple[Example, ...]
    test: tuple[Example, ...]

    def sizes(self) -> tuple[int, int, int]:
        return len(self.train), len(self.dev), len(self.test)

    def split(self, name: str) -> tuple[Example, ...]:
        if name not in ("train", "dev", "test"):
            raise KeyError(name)
        return getattr(self, name)


def _tokenize_tree(line: str):
    """Yield (kind, text, offset) with kind in '(', ')', 'atom'."""
    i, n = 0, len(line)
    while i < n:
        c = line[i]
        if c.isspace():
            i += 1
        elif c in "()":
            yield c, c, i
            i += 1
        else:
            j = i
            while j < n and not line[j].isspace() and line[j] not in "()":
                j += 1
            yield "atom", line[i:j], i
            i = j


def parse_ptb_tree_line(line: str, id: int = 0) -> Example:
    """Parse one sentiment tree; root label becomes the example label."""
    stripped = line.strip()
    if not stripped:
        raise CorpusParseError("empty line", offset=0)
    tokens = list(_tokenize_tree(stripped))
    leaves: list[str] = []
    root_label: Optional[int] = None
    depth = 0
    pos = 0
    # each "(" must be followed by a label atom, then either a leaf atom or subtrees
    while pos < len(tokens):
        kind, text, off = tokens[pos]
        if kind == "(":
            if pos + 1 >= len(tokens) or tokens[pos + 1][0] != "atom":
                raise CorpusParseError("missing node label", offset=off)
            label_text, label_off = tokens[pos + 1][1], tokens[pos + 1][2]
            if not (len(label_text) == 1 and label_text in "01234"):
                raise CorpusParseError(f"bad node label {label_text!r}", offset=label_off)
            if depth == 0:
                if root_label is not None:
                    raise CorpusParseError("trailing material after tree", offset=off)
                root_label = int(label_text)
            depth += 1
            pos += 2
        elif kind == ")":
            depth -= 1
            if depth < 0:
                raise CorpusParseError("unbalanced closing parenthesis", offset=off)
            pos += 1
        else:
            if depth == 0:
                raise CorpusParseError(f"text outside tree {text!r}", offset=off)
            leaves.append(text.lower())
            pos += 1
    if root_label is None:
        raise CorpusParseError("no tree found", offset=0)
    if depth != 0:
        raise CorpusParseError("unbalanced at end of line", offset=len(stripped))
    if not leaves:
        raise CorpusParseError("tree has no leaves", offset=0)
    return Example(id=id, tokens=tuple(leaves), label=root_label)


def to_ptb_line(example: Example) -> str:
    """Single-level tree for ``example``; leaves carry the root label."""
    inner = " ".join(f"({example.label} {t})" for t in example.tokens)
    return f"({example.label} {inner})"


def _lines(stream: StreamLike) -> list[str]:
    if isinstance(stream, (str, os.PathLike)):
        with io.open(stream, encoding="utf-8") as fh:
            return fh.readlines()
    return list(stream)


def load_trees(stream: StreamLike, split: Optional[str] = None) -> list[Example]:
    examples = []
    for lineno, line in enumerate(_lines(stream), start=1):
        if not line.strip():
            continue
        try:
            ex = parse_ptb_tree_line(line, id=len(examples))
        except CorpusParseError as err:
            raise CorpusParseError(err.reason, offset=err.offset, lineno=lineno,
                                   split=split) from None
        examples.append(ex)
    return examples


def load_dataset(train_stream: StreamLike, dev_stream: StreamLike,
                 test_stream: StreamLike) -> Dataset:
    splits = {}
    for name, stream in (("train", train_stream), ("dev", dev_stream), ("test", test_stream)):
        examples = load_trees(stream, split=name)
        if not examples:
            raise CorpusParseError(f"empty split: {name}")
        splits[name] = tuple(examples)
    return Dataset(**splits)


def load_sst_dir(path: Union[str, os.PathLike]) -> Dataset:
    """Load ``train.txt``, ``dev.txt`` and ``test.txt`` from an SST ``trees/`` directory."""
    path = os.fspath(path)
    names = [os.path.join(path, f"{s}.txt") for s in ("train", "dev", "test")]
    for p in names:
        if not os.path.exists(p):
            raise FileNotFoundError(p)
    return load_dataset(*names)


def load_tsv(stream: StreamLike) -> list[Example]:
    """``label<TAB>sentence`` per line; sentence is whitespace split and lowercased."""
    examples = []
    for lineno, line in enumerate(_lines(stream), start=1):
        line = line.rstrip("\r\n")
        if not line.strip():
            continue
        label_s, sep, text = line.partition("\t")
        if not sep:
            raise CorpusParseError("missing tab", lineno=lineno)
        try:
            label = int(label_s)
        except ValueError:
            raise CorpusParseError(f"bad label {label_s!r}", lineno=lineno) from None
        if not 0 <= label < NUM_CLASSES:
            raise CorpusParseError("label out of range", lineno=lineno)
        tokens = tuple(t.lower() for t in text.split())
        if not tokens:
            raise CorpusParseError("empty sentence", lineno=lineno)
        examples.append(Example(id=len(examples), tokens=tokens, label=label))
    return examples


def load_tsv_dataset(train_stream: StreamLike, dev_stream: StreamLike,
                     test_stream: StreamLike) -> Dataset:
    splits = {}
    for name, stream in (("train", train_stream), ("dev", dev_stream), ("test", test_stream)):
        examples = load_tsv(stream)
        if not examples:
            raise CorpusParseError(f"empty split: {name}")
        splits[name] = tuple(examples)
    return Dataset(**splits)


def labels_of(examples: Sequence[Example]) -> np.ndarray:
    return np.fromiter((e.label for e in examples), dtype=np.int64, count=len(examples))
