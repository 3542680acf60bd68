import math

import numpy as np
import pytest

from swncurriculum import models, nnet
from swncurriculum.nnet import ParamStore


def store_with(**blocks):
    s = ParamStore()
    for k, v in blocks.items():
        s.add(k.replace("_", "."), np.array(v, dtype=float))
    return s


def test_dense_forward_examples():
    s = store_with(d_W=np.eye(2), d_b=[0.0, 0.0])
    assert nnet.dense_forward(s, "d", np.array([3.0, 4.0])).tolist() == [3.0, 4.0]
    s = store_with(d_W=[[1.0, 1.0]], d_b=[1.0])
    assert nnet.dense_forward(s, "d", np.array([2.0, 3.0])).tolist() == [6.0]
    with pytest.raises(nnet.ShapeError):
        nnet.dense_forward(s, "d", np.array([1.0, 2.0, 3.0]))


def test_dense_backward_finite_differences():
    rng = np.random.default_rng(1)
    s = ParamStore()
    nnet.add_dense(s, "d", 4, 3, rng)
    nnet.perturb(s, rng)
    x = rng.normal(size=(5, 4))
    w = rng.normal(size=(5, 3))

    def f():
        return float((nnet.dense_forward(s, "d", x) * w).sum())

    dx = nnet.dense_backward(s, "d", x, w)
    h = 1e-5
    for name in ("d.W", "d.b"):
        flat = s[name].reshape(-1)
        for i in range(flat.size):
            old = flat[i]
            flat[i] = old + h
            up = f()
            flat[i] = old - h
            down = f()
            flat[i] = old
            num = (up - down) / (2 * h)
            assert nnet.relative_error(s.grads[name].reshape(-1)[i], num) < 1e-4
    num_dx = np.zeros_like(x)
    for idx in np.ndindex(*x.shape):
        old = x[idx]
        x[idx] = old + h
        up = f()
        x[idx] = old - h
        down = f()
        x[idx] = old
        num_dx[idx] = (up - down) / (2 * h)
    assert np.max(nnet.relative_error(dx, num_dx)) < 1e-4


def conv_store(kernel, bias):
    s = ParamStore()
    s.add("c.W", np.array(kernel, dtype=float))
    s.add("c.b", np.array(bias, dtype=float))
    return s


def test_conv_max_over_time():
    s = conv_store([[[1.0]]], [0.0])
    out, _ = nnet.conv1d_maxpool_forward(s, "c", np.array([[[2.0], [5.0], [3.0]]]), np.array([3]))
    assert out.tolist() == [[5.0]]
    # the max is restricted to valid positions
    out, _ = nnet.conv1d_maxpool_forward(s, "c", np.array([[[2.0], [5.0], [3.0]]]), np.array([1]))
    assert out.tolist() == [[2.0]]


def test_conv_bias_path_and_short_sentences():
    s = conv_store(np.ones((1, 2, 1)), [1.0])
    out, _ = nnet.conv1d_maxpool_forward(s, "c", np.zeros((1, 4, 1)), np.array([4]))
    assert out.tolist() == [[1.0]]
    # shorter than the filter: one zero window, bias through ReLU
    out, _ = nnet.conv1d_maxpool_forward(s, "c", np.full((1, 4, 1), 9.0), np.array([1]))
    assert out.tolist() == [[1.0]]
    s = conv_store(np.ones((1, 5, 1)), [-1.0])
    out, _ = nnet.conv1d_maxpool_forward(s, "c", np.ones((1, 3, 1)), np.array([3]))
    assert out.tolist() == [[0.0]]


class ConvProbe(models.Network):
    """Conv widths {2,3} x 3 filters plus a dense head, for gradient checks."""

    def __init__(self, rng, dim=4):
        self.store = ParamStore()
        for w in (2, 3):
            nnet.add_conv1d(self.store, f"c{w}", w, dim, 3, rng)
        nnet.add_dense(self.store, "o", 6, 5, rng)

    def forward(self, inputs):
        x, lengths = inputs
        outs = [nnet.conv1d_maxpool_forward(self.store, f"c{w}", x, lengths) for w in (2, 3)]
        h = np.concatenate([o for o, _ in outs], axis=1)
        return nnet.dense_forward(self.store, "o", h), {"h": h, "c": [c for _, c in outs]}

    def backward(self, cache, dlogits):
        dh = nnet.dense_backward(self.store, "o", cache["h"], dlogits)
        for j, w in enumerate((2, 3)):
            nnet.conv1d_maxpool_backward(self.store, f"c{w}", cache["c"][j], dh[:, 3 * j:3 * j + 3])


def test_conv_gradient_check():
    rng = np.random.default_rng(3)
    m = ConvProbe(rng)
    nnet.perturb(m.store, rng)
    x = rng.normal(size=(1, 6, 4))
    assert nnet.grad_check(m, (x, np.array([6])), np.array([2]), rng=rng) < 1e-4
    # a batch with a sentence shorter than every filter
    x = rng.normal(size=(3, 6, 4))
    lengths = np.array([6, 3, 1])
    x[np.arange(6)[None, :] >= lengths[:, None]] = 0
    assert nnet.grad_check(m, (x, lengths), np.array([0, 4, 1]), rng=rng) < 1e-4


def test_softmax_xent():
    loss, p, _ = nnet.softmax_xent(np.zeros(5), 3)
    assert np.allclose(p, 0.2) and loss == pytest.approx(math.log(5), abs=1e-12)
    assert round(loss, 4) == 1.6094
    loss, p, g = nnet.softmax_xent(np.array([1000.0, 0.0]), 0)
    assert loss == pytest.approx(0.0, abs=1e-12) and np.all(np.isfinite(g))
    with pytest.raises(ValueError):
        nnet.softmax_xent(np.zeros(5), 5)


def test_softmax_xent_gradient():
    rng = np.random.default_rng(0)
    z = rng.normal(size=5)
    _, _, g = nnet.softmax_xent(z, 2)
    h = 1e-5
    for i in range(5):
        e = np.zeros(5)
        e[i] = h
        num = (nnet.softmax_xent(z + e, 2)[0] - nnet.softmax_xent(z - e, 2)[0]) / (2 * h)
        assert nnet.relative_error(g[i], num) < 1e-6


def test_softmax_is_distribution():
    rng = np.random.default_rng(0)
    p = nnet.softmax(rng.normal(scale=30, size=(100, 5)))
    assert np.all(p > 0) and np.allclose(p.sum(axis=1), 1, atol=1e-9)


def test_adam_first_step():
    s = store_with(x=[0.5])
    s.grads["x"][:] = 1.0
    nnet.adam_step(s, 0.01)
    assert s["x"][0] == pytest.approx(0.49, abs=1e-9)
    assert s.grads["x"][0] == 0.0


def test_adam_zero_gradient_is_noop():
    s = store_with(x=[0.5, -2.0])
    before = s["x"].copy()
    nnet.adam_step(s, 0.01)
    nnet.adam_step(s, 0.01)
    assert np.array_equal(s["x"], before) and s.step == 2


def test_adam_two_step_trace():
    # scalar Adam by hand: g = 1 at both steps
    b1, b2, eps, lr = 0.9, 0.999, 1e-8, 0.01
    x, m, v = 0.5, 0.0, 0.0
    for t in (1, 2):
        m = b1 * m + (1 - b1) * 1.0
        v = b2 * v + (1 - b2) * 1.0
        x -= lr * (m / (1 - b1 ** t)) / (math.sqrt(v / (1 - b2 ** t)) + eps)
    s = store_with(x=[0.5])
    for _ in range(2):
        s.grads["x"][:] = 1.0
        nnet.adam_step(s, lr)
    assert s["x"][0] == pytest.approx(x, abs=1e-15)
    assert x == pytest.approx(0.48, abs=1e-9)


def test_grad_check_catches_corrupted_backward():
    rng = np.random.default_rng(5)
    aux = models.AuxModel(rng)
    x = rng.normal(size=(4, 9))
    y = np.array([0, 1, 2, 3])

    def double(grads):
        for g in grads.values():
            g *= 2.0

    assert nnet.grad_check(aux, x, y, rng=rng) < 1e-4
    assert nnet.grad_check(aux, x, y, rng=rng, backward_hook=double) > 1e-2


def test_param_store_manifest_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    a = models.KimCNN(rng, emb_dim=5, n_filters=2)
    b = models.KimCNN(np.random.default_rng(1), emb_dim=5, n_filters=2)
    a.store.save(tmp_path / "p.json")
    b.store.load(tmp_path / "p.json")
    assert np.array_equal(a.store.flat(), b.store.flat())
    assert all(a.store.grads[k].shape == a.store[k].shape for k in a.store.names())


def test_glorot_bounds():
    rng = np.random.default_rng(0)
    s = ParamStore()
    nnet.add_dense(s, "d", 300, 100, rng)
    assert np.abs(s["d.W"]).max() <= math.sqrt(6 / 400)
    assert not s["d.b"].any()
