"""Train the lexicon-feature model and turn its predictions into difficulty scores.

A synthetic corpus in the real file formats is written to a temporary
directory first; roughly a third of its sentences use wording that contradicts
their label, and those should land at the hard end of the ranking.

    python3 demos/02_difficulty_ranking.py
"""

import tempfile

import numpy as np

from swncurriculum import experiment, models, synthetic
from swncurriculum.corpus import labels_of
from swncurriculum.experiment import ExperimentConfig, Resources

with tempfile.TemporaryDirectory() as tmp:
    spec = synthetic.SyntheticSpec(n_train=800, n_dev=200, n_test=200, emb_dim=16)
    paths = synthetic.write_corpus(tmp, spec, seed=0)
    cfg = ExperimentConfig(**paths, aux_epochs=30)
    res = Resources(cfg, need_embeddings=False)

    aux = experiment.train_aux_model(cfg, res, seed=0)
    print(f"aux model: dev {aux.dev_accuracy:.3f}, test {aux.test_accuracy:.3f}")

    x_train = res.normalized_features(cfg.aux_features)[0]
    ranking = models.difficulty_scores(aux.model, x_train, labels_of(res.dataset.train))
    scores = ranking.scores
    print(f"scores span [{scores.min():.3f}, {scores.max():.3f}] (bounded by [0, 2])")

    order = np.argsort(scores, kind="stable")
    train = res.dataset.train
    for title, ids in (("easiest", order[:3]), ("hardest", order[-3:])):
        print(f"\n{title}:")
        for i in ids:
            ex = train[i]
            print(f"  {scores[i]:.3f}  label {ex.label}  {' '.join(ex.tokens[:10])}")
