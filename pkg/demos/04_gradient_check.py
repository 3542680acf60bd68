"""Check hand-written backpropagation against central finite differences.

Also shows the check doing its job: a deliberately wrong backward pass
(one gradient block scaled by 1.01) is caught.

    python3 demos/04_gradient_check.py
"""

import numpy as np

from swncurriculum import models, nnet

rng = np.random.default_rng(0)

aux = models.AuxModel(rng)
nnet.perturb(aux.store, rng)
x, y = rng.uniform(-1, 1, (16, 9)), rng.integers(0, 5, 16)
print(f"aux MLP      max relative error {nnet.grad_check(aux, x, y, rng=rng):.2e}")

cnn = models.KimCNN(rng, emb_dim=20)
# zero biases sit on the ReLU kink for very short sentences
nnet.perturb(cnn.store, rng)
lengths = np.array([12, 5, 2])
emb = rng.normal(size=(3, 12, 20))
err = nnet.grad_check(cnn, (emb, lengths), np.array([0, 2, 4]), rng=rng)
print(f"Kim CNN      max relative error {err:.2e}")


def broken(grads):
    grads[next(iter(grads))] *= 1.01


err = nnet.grad_check(aux, x, y, rng=rng, backward_hook=broken)
print(f"broken grads max relative error {err:.2e}  ({'caught' if err > 1e-4 else 'missed'})")
