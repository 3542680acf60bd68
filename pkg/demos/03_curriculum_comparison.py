"""Compare the three orderings (lexicon difficulty, sentence length, none) end to end.

Runs a paired-seed comparison with the mean-embedding classifier on a
synthetic corpus and writes a JSON report next to the working directory.
Takes a few seconds; pass --model kim_cnn to use the CNN (slower).

    python3 demos/03_curriculum_comparison.py [--repeats 3] [--model kim_cnn]
"""

import argparse
import tempfile

from swncurriculum import experiment, synthetic
from swncurriculum.experiment import ExperimentConfig, Resources

ap = argparse.ArgumentParser()
ap.add_argument("--repeats", type=int, default=3)
ap.add_argument("--model", default="mlp_mean_embedding")
ap.add_argument("--out", default="comparison_report.json")
args = ap.parse_args()

with tempfile.TemporaryDirectory() as tmp:
    paths = synthetic.write_corpus(tmp, synthetic.SyntheticSpec(), seed=1)
    cfg = ExperimentConfig(**paths, model=args.model, repeats=args.repeats, bs=250,
                           aux_epochs=20, epochs_per_phase=1, final_epochs=3,
                           report_path=args.out)
    reports = experiment.run_comparison(cfg, Resources(cfg))

for rep in reports:
    accs = ", ".join(f"{r['test_accuracy']:.3f}" for r in rep.runs)
    print(f"{rep.strategy:16s} mean {rep.mean_test_accuracy:.4f} +/- {rep.std_test_accuracy:.4f}  [{accs}]")
print(f"report written to {args.out}")
