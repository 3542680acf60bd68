import io

import pytest
from hypothesis import given, strategies as st

from swncurriculum import fixtures
from swncurriculum.corpus import (CorpusParseError, Example, load_dataset, load_sst_dir,
                                  load_tsv, parse_ptb_tree_line, to_ptb_line)


def test_two_leaf_tree():
    ex = parse_ptb_tree_line("(3 (2 good) (2 movie))")
    assert ex.tokens == ("good", "movie") and ex.label == 3


def test_single_leaf_tree():
    ex = parse_ptb_tree_line("(4 great)")
    assert ex.tokens == ("great",) and ex.label == 4


def test_leaf_order_and_lowercasing():
    line = "(1 (2 (2 The) (2 Rock)) (1 (2 is) (1 (0 not) (3 -LRB-good-RRB-))))"
    ex = parse_ptb_tree_line(line)
    assert ex.tokens == ("the", "rock", "is", "not", "-lrb-good-rrb-")
    assert ex.label == 1


@pytest.mark.parametrize("line, msg", [
    ("(3 (2 good) (2 movie)", "unbalanced at end of line"),
    ("(3 (2 good)) (2 movie))", "trailing|unbalanced"),
    ("(x (2 good))", "bad node label"),
    ("(7 good)", "bad node label"),
    ("(3 (2 ))", "missing node label|no leaves"),
    ("(3)", "no leaves"),
    ("(3 (2 good)))", "unbalanced closing"),
    ("good", "outside tree|no tree"),
])
def test_malformed_trees(line, msg):
    with pytest.raises(CorpusParseError, match=msg) as info:
        parse_ptb_tree_line(line)
    assert info.value.offset is not None


def test_load_dataset_small():
    train = io.StringIO("(3 (2 good) (2 movie))\n(0 bad)\n")
    d = load_dataset(train, io.StringIO("(4 great)\n"), io.StringIO("(2 ok)\n"))
    assert d.sizes() == (2, 1, 1)
    assert [e.id for e in d.train] == [0, 1]


def test_load_dataset_reports_split_and_line():
    with pytest.raises(CorpusParseError, match="split dev.*line 2"):
        load_dataset(io.StringIO("(1 a)\n"), io.StringIO("(1 a)\n(1 (2 b)\n"), io.StringIO("(1 a)\n"))


def test_empty_train_split():
    with pytest.raises(CorpusParseError, match="empty split: train"):
        load_dataset(io.StringIO(""), io.StringIO("(1 a)\n"), io.StringIO("(1 a)\n"))


def test_fixture_dir():
    d = load_sst_dir(fixtures.sst_dir())
    assert d.sizes() == (20, 6, 6)
    assert d.train[0].tokens == ("a", "great", "movie")
    assert d.train[19].tokens == ("-lrb-", "the", "film", "-rrb-")


def test_tsv():
    exs = load_tsv(io.StringIO("3\tA good movie\n\n1\tmeh\n"))
    assert exs[0] == Example(0, ("a", "good", "movie"), 3)
    assert exs[1].id == 1
    assert load_tsv(io.StringIO("")) == []
    with pytest.raises(CorpusParseError, match="label out of range.*line 1"):
        load_tsv(io.StringIO("7\tbad\n"))
    with pytest.raises(CorpusParseError, match="missing tab"):
        load_tsv(io.StringIO("3 no tab here\n"))


word = st.text(alphabet="abcdefghijklmnopqrstuvwxyz'-.,", min_size=1, max_size=8)


@given(st.lists(word, min_size=1, max_size=20), st.integers(0, 4))
def test_ptb_round_trip(tokens, label):
    ex = Example(0, tuple(tokens), label)
    assert parse_ptb_tree_line(to_ptb_line(ex)) == ex
