"""Command line entry point.

Exit codes: 0 success, 1 usage/config error, 2 data or resource error,
3 a gradient check failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Optional, Sequence

import numpy as np

from . import curriculum, experiment, features, fixtures, models, nnet
from .corpus import CorpusParseError, labels_of
from .embeddings import EmbeddingParseError
from .experiment import ExperimentConfig, ResourceError, Resources
from .lexicon import LexiconParseError

EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_CHECK = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# flag -> config field
_OVERRIDES = {
    "swn": "swn_path", "sst_dir": "sst_dir", "train_tsv": "train_tsv", "dev_tsv": "dev_tsv",
    "test_tsv": "test_tsv", "embeddings": "embeddings_path", "oov_policy": "oov_policy",
    "model": "model", "strategy": "strategy", "strategies": "strategies", "mode": "mode",
    "bs": "bs", "epochs_per_phase": "epochs_per_phase", "final_epochs": "final_epochs",
    "sgd_batch": "sgd_batch", "lr": "lr", "max_len": "max_len", "repeats": "repeats",
    "seed": "base_seed", "aux_epochs": "aux_epochs", "aux_features": "aux_features",
    "report": "report_path",
}


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("data and config")
    g.add_argument("--config", help="JSON config file; flags override its values")
    g.add_argument("--fixture", action="store_true",
                   help="fill unset data paths with the bundled toy files")
    g.add_argument("--swn", help="SentiWordNet 3.0 file")
    g.add_argument("--sst-dir", help="directory with SST train.txt/dev.txt/test.txt")
    g.add_argument("--train-tsv")
    g.add_argument("--dev-tsv")
    g.add_argument("--test-tsv")
    g.add_argument("--embeddings", help="GloVe-format vectors")
    g.add_argument("--oov-policy", choices=["zero", "hash"])
    g = p.add_argument_group("run settings")
    g.add_argument("--model", choices=sorted(models.CLASSIFIERS))
    g.add_argument("--strategy", choices=curriculum.STRATEGIES)
    g.add_argument("--strategies", nargs="+", choices=curriculum.STRATEGIES)
    g.add_argument("--mode", choices=curriculum.MODES)
    g.add_argument("--bs", type=int, help="curriculum batch size")
    g.add_argument("--epochs-per-phase", type=int)
    g.add_argument("--final-epochs", type=int)
    g.add_argument("--sgd-batch", type=int)
    g.add_argument("--lr", type=float)
    g.add_argument("--max-len", type=int)
    g.add_argument("--repeats", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--aux-epochs", type=int)
    g.add_argument("--aux-features", type=int, choices=[8, 9])
    g.add_argument("--report", help="RunReport JSON path")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="swncurriculum", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("lexicon", help="inspect a SentiWordNet file")
    p.add_argument("action", choices=["stats"])
    _common(p)
    p = sub.add_parser("features", help="export sentence feature matrices")
    p.add_argument("action", choices=["export"])
    p.add_argument("--split", choices=["train", "dev", "test"], default="train")
    p.add_argument("--normalized", action="store_true")
    _common(p)
    p = sub.add_parser("aux", help="train the auxiliary difficulty model")
    p.add_argument("action", choices=["train"])
    p.add_argument("--ranking-out", help="write id,score difficulty CSV here")
    _common(p)
    p = sub.add_parser("rank", help="rank training examples, easiest first")
    p.add_argument("--ranking", help="precomputed id,score CSV for the sentiwordnet strategy")
    _common(p)
    p = sub.add_parser("schedule", help="build a curriculum schedule (JSON)")
    p.add_argument("--ranking", help="precomputed id,score CSV for the sentiwordnet strategy")
    _common(p)
    p = sub.add_parser("train", help="one full run at --seed")
    _common(p)
    p = sub.add_parser("compare", help="strategies x repeats with paired seeds")
    _common(p)
    p = sub.add_parser("gradcheck", help="finite-difference check of the networks")
    p.add_argument("--dim", type=int, default=12, help="embedding width for the CNN check")
    p.add_argument("--tolerance", type=float, default=1e-4)
    _common(p)
    return parser


def make_config(args: argparse.Namespace) -> ExperimentConfig:
    cfg = ExperimentConfig.from_json(args.config).to_dict() if args.config else {}
    for flag, key in _OVERRIDES.items():
        value = getattr(args, flag, None)
        if value is not None:
            cfg[key] = value
    if args.fixture:
        for key, path in (("swn_path", fixtures.swn_path()), ("sst_dir", fixtures.sst_dir()),
                          ("embeddings_path", fixtures.glove_path())):
            if not cfg.get(key) and not (key == "sst_dir" and cfg.get("train_tsv")):
                cfg[key] = str(path)
    config = ExperimentConfig.from_dict(cfg)
    config.validate()
    return config


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _strategy(config: ExperimentConfig, res: Resources, args) -> curriculum.Strategy:
    if config.strategy == "sentiwordnet" and getattr(args, "ranking", None):
        return curriculum.Strategy.sentiwordnet(models.DifficultyRanking.from_csv(args.ranking))
    strat, _ = experiment.compute_strategy(config, res, config.strategy, config.base_seed)
    return strat


def cmd_lexicon(args, config):
    from .lexicon import parse_swn_file
    path = experiment._require(config.swn_path, "SentiWordNet file")
    lex = parse_swn_file(path)
    scores = np.array([s.as_tuple() for s in lex.entries.values()])
    stats = {"records": lex.record_count, "lemmas": len(lex),
             "mean_positivity": float(scores[:, 0].mean()),
             "mean_negativity": float(scores[:, 1].mean()),
             "mean_objectivity": float(scores[:, 2].mean()),
             "fully_objective_lemmas": int(np.sum(scores[:, 2] == 1.0))}
    _emit(args, json.dumps(stats, indent=2) + "\n")


def cmd_features(args, config):
    res = Resources(config, need_embeddings=False)
    if args.normalized:
        mat = res.normalized_features(9)[("train", "dev", "test").index(args.split)]
    else:
        mat = features.feature_matrix(res.lexicon, res.dataset.split(args.split))
    if args.out:
        features.export_csv(args.out, mat)
    else:
        features.export_csv(sys.stdout, mat)


def cmd_aux(args, config):
    res = Resources(config, need_embeddings=False)
    aux = experiment.train_aux_model(config, res, config.base_seed)
    ranking = models.difficulty_scores(aux.model, res.normalized_features(config.aux_features)[0],
                                       labels_of(res.dataset.train))
    if args.ranking_out:
        ranking.to_csv(args.ranking_out)
    _emit(args, json.dumps({"train_accuracy": aux.train_accuracy, "dev_accuracy": aux.dev_accuracy,
                            "test_accuracy": aux.test_accuracy, "best_epoch": aux.best_epoch,
                            "mean_difficulty": float(ranking.scores.mean())}, indent=2) + "\n")


def cmd_rank(args, config):
    res = Resources(config, need_lexicon=False, need_embeddings=False)
    strat = _strategy(config, res, args)
    order = curriculum.rank(strat, len(res.dataset.train), config.base_seed)
    header = "id,position" if strat.scores is None else "id,score"
    lines = [header]
    for pos, i in enumerate(order):
        lines.append(f"{i},{pos}" if strat.scores is None else f"{i},{strat.scores[i]:g}")
    _emit(args, "\n".join(lines) + "\n")


def cmd_schedule(args, config):
    res = Resources(config, need_lexicon=False, need_embeddings=False)
    strat = _strategy(config, res, args)
    sched = experiment.build_schedule(config, res, strat, config.base_seed)
    _emit(args, sched.to_json() + "\n")


def cmd_train(args, config):
    result = experiment.run_single(config, config.base_seed)
    _emit(args, json.dumps(result.to_dict(), indent=2) + "\n")


def cmd_compare(args, config):
    if args.out and not config.report_path:
        config.report_path = args.out
    reports = experiment.run_comparison(config)
    for r in reports:
        print(f"{r.strategy:16s} mean={100 * r.mean_test_accuracy:.2f}% "
              f"std={100 * r.std_test_accuracy:.2f} n={len(r.runs)}", file=sys.stderr)
    if not config.report_path:
        sys.stdout.write(json.dumps([r.to_dict() for r in reports], indent=2) + "\n")


def cmd_gradcheck(args, config):
    rng = np.random.default_rng(config.base_seed)
    aux = models.AuxModel(rng, d_in=config.aux_features)
    nnet.perturb(aux.store, rng)
    x = rng.uniform(-1, 1, (4, config.aux_features))
    y = rng.integers(0, 5, 4)
    aux_err = nnet.grad_check(aux, x, y, rng=rng)
    cnn = models.KimCNN(rng, emb_dim=args.dim, n_filters=4)
    nnet.perturb(cnn.store, rng)
    emb = rng.normal(size=(3, 9, args.dim))
    lengths = np.array([9, 6, 2])
    emb[np.arange(9)[None, :] >= lengths[:, None]] = 0.0
    cnn_err = nnet.grad_check(cnn, (emb, lengths), rng.integers(0, 5, 3), rng=rng)
    ok = max(aux_err, cnn_err) < args.tolerance
    _emit(args, json.dumps({"aux_mlp": aux_err, "kim_cnn": cnn_err, "tolerance": args.tolerance,
                            "passed": ok}, indent=2) + "\n")
    return 0 if ok else EXIT_CHECK


COMMANDS = {"lexicon": cmd_lexicon, "features": cmd_features, "aux": cmd_aux, "rank": cmd_rank,
            "schedule": cmd_schedule, "train": cmd_train, "compare": cmd_compare,
            "gradcheck": cmd_gradcheck}


def cli(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        config = make_config(args)
    except UsageError as err:
        print(err, file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, TypeError) as err:
        print(f"swncurriculum: config error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as err:
        print(f"swncurriculum: cannot read config: {err}", file=sys.stderr)
        return EXIT_DATA
    try:
        return COMMANDS[args.command](args, config) or 0
    except (ResourceError, LexiconParseError, CorpusParseError, EmbeddingParseError,
            FileNotFoundError) as err:
        print(f"swncurriculum: {err}", file=sys.stderr)
        return EXIT_DATA


def main() -> None:
    sys.exit(cli())
