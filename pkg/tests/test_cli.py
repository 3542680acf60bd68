import csv
import io
import json

import pytest

from swncurriculum import fixtures
from swncurriculum.cli import cli
from swncurriculum.corpus import load_sst_dir

FAST = ["--aux-epochs", "2", "--epochs-per-phase", "1", "--final-epochs", "1", "--bs", "8"]


def run(capsys, *argv):
    code = cli(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_lexicon_stats(capsys):
    code, out, _ = run(capsys, "lexicon", "stats", "--fixture")
    assert code == 0
    assert json.loads(out)["records"] == 20


def test_rank_sentence_length(capsys):
    code, out, _ = run(capsys, "rank", "--fixture", "--strategy", "sentence_length")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["id", "score"]
    lengths = [float(r[1]) for r in rows[1:]]
    assert lengths == sorted(lengths)
    train = load_sst_dir(fixtures.sst_dir()).train
    assert all(len(train[int(i)].tokens) == float(s) for i, s in rows[1:])


def test_rank_with_injected_ranking(capsys, tmp_path):
    p = tmp_path / "rank.csv"
    p.write_text("id,score\n" + "".join(f"{i},{(20 - i) / 10}\n" for i in range(20)))
    code, out, _ = run(capsys, "rank", "--fixture", "--strategy", "sentiwordnet", "--ranking", str(p))
    assert code == 0
    assert [int(r.split(",")[0]) for r in out.split()[1:4]] == [19, 18, 17]


def test_aux_features_schedule(capsys, tmp_path):
    code, out, _ = run(capsys, "aux", "train", "--fixture", "--aux-epochs", "3",
                       "--ranking-out", str(tmp_path / "r.csv"))
    assert code == 0 and 0 <= json.loads(out)["test_accuracy"] <= 1
    assert (tmp_path / "r.csv").read_text().startswith("id,score")
    code, out, _ = run(capsys, "features", "export", "--fixture", "--normalized")
    assert code == 0 and out.startswith("id,l,P,N,O,AD,P_l,N_l,O_l,AD_l")
    code, out, _ = run(capsys, "schedule", "--fixture", "--strategy", "sentence_length", "--bs", "6")
    d = json.loads(out)
    assert code == 0 and [len(p) for p in d["phases"]] == [6, 6, 6, 2]


def test_train_and_compare(capsys, tmp_path):
    code, out, _ = run(capsys, "train", "--fixture", "--strategy", "none", *FAST)
    assert code == 0 and "test_accuracy" in json.loads(out)
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"swn_path": str(fixtures.swn_path()), "sst_dir": str(fixtures.sst_dir()),
                               "embeddings_path": str(fixtures.glove_path()), "repeats": 2,
                               "model": "mlp_mean_embedding"}))
    report = tmp_path / "report.json"
    code, _, _ = run(capsys, "compare", "--config", str(cfg), "--out", str(report), *FAST)
    assert code == 0
    data = json.loads(report.read_text())
    assert len(data) == 3 and all(len(r["runs"]) == 2 for r in data)
    assert data[0]["config"]["model"] == "mlp_mean_embedding"


def test_gradcheck(capsys):
    code, out, _ = run(capsys, "gradcheck")
    assert code == 0 and json.loads(out)["passed"]


def test_exit_codes(capsys, tmp_path):
    code, _, err = run(capsys, "lexicon", "stats", "--swn", str(tmp_path / "missing.txt"))
    assert code == 2 and "missing.txt" in err
    code, _, _ = run(capsys, "rank", "--no-such-flag")
    assert code == 1
    code, _, _ = run(capsys)
    assert code == 1
    code, _, _ = run(capsys, "train", "--fixture", "--repeats", "0")
    assert code == 1
    bad = tmp_path / "bad.txt"
    bad.write_text("a\t00000001\t0.9\t0.9\tx#1\tg\n")
    code, _, err = run(capsys, "lexicon", "stats", "--swn", str(bad))
    assert code == 2 and "line 1" in err
