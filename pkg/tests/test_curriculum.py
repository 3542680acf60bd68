import io
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from swncurriculum.corpus import Example
from swncurriculum.curriculum import (CurriculumSchedule, Strategy, phase_iterator, rank,
                                      schedule)


def scored(values):
    return Strategy("sentiwordnet", np.array(values, dtype=float))


def test_rank_examples():
    assert rank(scored([0.3, 0.1, 0.9]), 3).tolist() == [1, 0, 2]
    assert rank(scored([0.5, 0.5]), 2).tolist() == [0, 1]
    lengths = Strategy.sentence_length([Example(0, tuple("abcdefg"), 1), Example(1, ("a", "b"), 2)])
    assert rank(lengths, 2).tolist() == [1, 0]


def test_rank_none_is_seeded_shuffle():
    a, b, c = rank(Strategy.none(), 50, 3), rank(Strategy.none(), 50, 3), rank(Strategy.none(), 50, 4)
    assert np.array_equal(a, b) and not np.array_equal(a, c)
    assert sorted(a.tolist()) == list(range(50))


def test_rank_length_mismatch():
    with pytest.raises(ValueError):
        rank(scored([0.1, 0.2]), 3)
    with pytest.raises(ValueError):
        Strategy("sentence_length")
    with pytest.raises(ValueError):
        Strategy("bogus")


def test_schedule_examples():
    order = np.arange(10)
    bsched = schedule(order, 4, "baby_steps")
    assert [len(p) for p in bsched.phases] == [4, 4, 2]
    assert [len(bsched.training_set(k)) for k in range(3)] == [4, 8, 10]
    osched = schedule(order, 4, "one_pass")
    assert [len(osched.training_set(k)) for k in range(3)] == [4, 4, 2]
    big = schedule(order, 25, "baby_steps")
    assert len(big) == 1 and sorted(big.training_set(0).tolist()) == list(range(10))
    with pytest.raises(ValueError):
        schedule(order, 0)


def test_phase_iterator():
    order = np.random.default_rng(0).permutation(10)
    bsched = schedule(order, 4, "baby_steps")
    it = phase_iterator(bsched, 1, (7, 0))
    assert sorted(it.tolist()) == sorted(order[:8].tolist())
    assert np.array_equal(it, phase_iterator(bsched, 1, (7, 0)))
    assert not np.array_equal(it, phase_iterator(bsched, 1, (7, 1)))
    osched = schedule(order, 4, "one_pass")
    assert sorted(phase_iterator(osched, 1, 0).tolist()) == sorted(order[4:8].tolist())


def test_json_export_and_digest():
    s = schedule(np.array([3, 1, 0, 2]), 3)
    buf = io.StringIO()
    s.to_json(buf)
    d = json.loads(buf.getvalue())
    assert d == {"mode": "baby_steps", "bs": 3, "phases": [[3, 1, 0], [2]]}
    back = CurriculumSchedule.from_dict(d)
    assert back.digest() == s.digest()
    assert schedule(np.array([1, 3, 0, 2]), 3).digest() != s.digest()


def check_schedule(scores, bs, mode):
    n = scores.size
    order = rank(Strategy("sentiwordnet", scores), n)
    s = schedule(order, bs, mode)
    new = np.concatenate(s.phases)
    assert np.array_equal(np.sort(new), np.arange(n))          # each id new exactly once
    for a, b in zip(s.phases, s.phases[1:]):
        assert scores[a].max() <= scores[b].min()
    if mode == "baby_steps":
        prev = set()
        for k in range(len(s)):
            cur = set(s.training_set(k).tolist())
            assert prev <= cur
            prev = cur
        assert prev == set(range(n))
    # strictly increasing transforms leave the ranking untouched
    assert np.array_equal(rank(Strategy("sentiwordnet", 2 * scores + 1), n), order)
    assert np.array_equal(rank(Strategy("sentiwordnet", np.exp(scores)), n), order)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 300), st.sampled_from([1, 7, 900, None]), st.sampled_from(["baby_steps", "one_pass"]),
       st.integers(0, 2 ** 32 - 1), st.booleans())
def test_schedule_invariants(n, bs, mode, seed, coarse):
    rng = np.random.default_rng(seed)
    # coarse scores force plenty of ties
    scores = rng.integers(0, 5, n).astype(float) / 4 if coarse else rng.random(n) * 2
    check_schedule(scores, n + 5 if bs is None else bs, mode)
