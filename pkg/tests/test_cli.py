import json

import pytest

from epaae.cli import main
from epaae.models import load
from epaae.transfer import read_transfer_tsv

TINY_CONFIG = """\
seed: 0
zeta: 2.5
epochs: 1
emb_dim: 8
hidden_dim: 8
latent_dim: 4
disc_hidden: 8
corpus: toy/test.txt
labels: toy/test.labels.txt
checkpoint: out/model.ckpt
"""


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    assert main(["make-toy", "--out", str(root / "toy")]) == 0
    (root / "run.yaml").write_text(TINY_CONFIG)
    assert main(["train", "--config", str(root / "run.yaml")]) == 0
    return root


@pytest.fixture
def ckpt(workdir):
    return str(workdir / "out" / "model.ckpt")


def test_make_toy_files(workdir):
    toy = workdir / "toy"
    assert len((toy / "sentences.txt").read_text().splitlines()) == 1950
    assert len((toy / "labels.txt").read_text().splitlines()) == 1950
    sizes = [len((toy / f"{s}.txt").read_text().splitlines()) for s in ("train", "dev", "test")]
    assert sizes == [1560, 195, 195]


def test_make_toy_is_idempotent(workdir, tmp_path):
    assert main(["make-toy", "--out", str(tmp_path)]) == 0
    for path in sorted(tmp_path.iterdir()):
        assert path.read_bytes() == (workdir / "toy" / path.name).read_bytes()


def test_train_outputs(workdir):
    lines = (workdir / "out" / "losses.csv").read_text().splitlines()
    assert lines[0] == "epoch,rec,adv_disc,adv_enc,aux" and len(lines) == 2
    assert load(workdir / "out" / "model.ckpt").config.noise.zeta == 2.5


def test_train_same_seed_same_checkpoint(workdir, tmp_path):
    out = tmp_path / "again.ckpt"
    assert main(["train", "--config", str(workdir / "run.yaml"), "--checkpoint", str(out)]) == 0
    assert out.read_bytes() == (workdir / "out" / "model.ckpt").read_bytes()


def test_train_usage_errors(workdir, tmp_path, capsys):
    assert main(["train", "--config", str(workdir / "run.yaml"), "--corpus", str(tmp_path / "nope.txt")]) == 2
    bad = tmp_path / "bad.yaml"
    bad.write_text("seed: 0\nzetta: 1\n")
    assert main(["train", "--config", str(bad)]) == 2
    assert "bad.yaml:2" in capsys.readouterr().err
    noseed = tmp_path / "noseed.yaml"
    noseed.write_text(TINY_CONFIG.replace("seed: 0\n", "").replace("toy/", str(workdir / "toy") + "/"))
    assert main(["train", "--config", str(noseed)]) == 2


def test_bad_magic_exits_one(tmp_path, capsys):
    bad = tmp_path / "bad.ckpt"
    bad.write_bytes(b"NOTAMODEL" * 10)
    assert main(["flip-metrics", "--checkpoint", str(bad)]) == 1
    assert "magic" in capsys.readouterr().err


def test_knn_prints_k_neighbours(ckpt, capsys):
    assert main(["knn", "--checkpoint", ckpt, "--query", "the man said the pasta is spicy", "--k", "5"]) == 0
    rows = [line.split("\t") for line in capsys.readouterr().out.splitlines()]
    assert len(rows) == 5
    dists = [float(r[1]) for r in rows]
    assert dists == sorted(dists) and dists[0] == 0.0


def test_flip_metrics_json(ckpt, capsys):
    assert main(["flip-metrics", "--checkpoint", ckpt]) == 0
    result = json.loads(capsys.readouterr().out)
    assert result["rows"] == 1950 and result["mean_hops_flip"] >= 1


def test_encode_and_pca(ckpt, tmp_path):
    assert main(["encode", "--checkpoint", ckpt, "--out", str(tmp_path / "z.csv")]) == 0
    assert len((tmp_path / "z.csv").read_text().splitlines()) == 1951
    assert main(["pca", "--checkpoint", ckpt, "--out", str(tmp_path / "p.csv")]) == 0
    assert (tmp_path / "p.csv").read_text().startswith("x,y,label")


def test_transfer_k_zero_equals_reconstruct(workdir, ckpt, tmp_path, capsys):
    corpus = ["--corpus", str(workdir / "toy" / "dev.txt"), "--labels", str(workdir / "toy" / "dev.labels.txt")]
    assert main(["transfer", "--checkpoint", ckpt, *corpus, "--k", "0", "--out", str(tmp_path / "t.tsv")]) == 0
    capsys.readouterr()
    assert main(["reconstruct", "--checkpoint", ckpt, *corpus]) == 0
    recon = capsys.readouterr().out.splitlines()
    records = read_transfer_tsv(tmp_path / "t.tsv")
    assert len(records) == 195
    assert [r.converted_sentence for r in records] == recon


def test_eval_on_transfer_file(workdir, ckpt, tmp_path):
    corpus = ["--corpus", str(workdir / "toy" / "dev.txt"), "--labels", str(workdir / "toy" / "dev.labels.txt")]
    assert main(["transfer", "--checkpoint", ckpt, *corpus, "--out", str(tmp_path / "t.tsv")]) == 0
    out = tmp_path / "report.json"
    assert main(["eval", "--transfer", str(tmp_path / "t.tsv"), "--checkpoint", ckpt, "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert 0 <= report["tst_accuracy"] <= 1 and "greedy_matching" in report
    assert sum(v["count"] for v in report["per_direction"].values()) == 195


def test_eval_identical_files(tmp_path, capsys):
    (tmp_path / "h.txt").write_text("the man said the food is good\nthe girl said\n")
    assert main(["eval", "--hyp", str(tmp_path / "h.txt"), "--ref", str(tmp_path / "h.txt")]) == 0
    assert json.loads(capsys.readouterr().out)["bleu2"] == 1.0


def test_eval_needs_inputs():
    assert main(["eval"]) == 2


def test_interpolate(ckpt, capsys):
    assert main(["interpolate", "--checkpoint", ckpt, "--start", "the man said the food is good"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 6


def test_unknown_command_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
