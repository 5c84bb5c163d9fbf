"""Command-line entry point.

Exit codes: 0 success, 1 computation error, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import latent, transfer
from .config import ConfigError, RunConfig, load_config, validate_style_attr
from .corpus import Corpus, CorpusError, build_vocab, generate_toy, load_corpus, split_corpus, style_value, write_corpus
from .metrics import (
    EmbeddingTable,
    RuleClassifier,
    content_report,
    load_word_vectors,
    train_style_classifier,
    tst_accuracy,
)
from .models import CheckpointError, TrainingError, load, save, train, write_loss_log

log = logging.getLogger("epaae")

EXIT_OK, EXIT_COMPUTE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _existing(path, what: str) -> Path:
    if path is None:
        raise UsageError(f"missing {what} path")
    path = Path(path)
    if not path.is_file():
        raise UsageError(f"{what} not found: {path}")
    return path


def _read_corpus(args, default_toy: bool = True) -> Corpus:
    if getattr(args, "corpus", None) is None:
        if not default_toy:
            raise UsageError("--corpus is required")
        return generate_toy()
    labels = _existing(args.labels, "label file") if getattr(args, "labels", None) else None
    return load_corpus(_existing(args.corpus, "corpus"), labels)


def _read_lines(path) -> list[str]:
    return _existing(path, "text file").read_text(encoding="utf-8").splitlines()


# ---------------------------------------------------------------- commands


def cmd_make_toy(args) -> int:
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise UsageError(f"cannot create {out}: {exc}") from exc
    toy = generate_toy()
    write_corpus(toy, out / "sentences.txt", out / "labels.txt")
    for name, part in zip(("train", "dev", "test"), split_corpus(toy, seed=args.seed)):
        write_corpus(part, out / f"{name}.txt", out / f"{name}.labels.txt")
    print(f"wrote {len(toy)} sentences to {out}")
    return EXIT_OK


def _run_config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    return cfg.with_overrides(
        seed=args.seed,
        zeta=args.zeta,
        drop_p=args.drop_p,
        k=getattr(args, "k", None),
        style_attr=getattr(args, "style_attr", None),
        epochs=args.epochs,
        model_kind=args.model_kind,
        corpus=args.corpus,
        labels=args.labels,
        checkpoint=args.checkpoint,
        report_dir=args.report_dir,
    )


def cmd_train(args) -> int:
    cfg = _run_config(args)
    if cfg.seed is None:
        raise UsageError("a seed is required for training (config key 'seed' or --seed)")
    if cfg.checkpoint is None:
        raise UsageError("no checkpoint output path (config key 'checkpoint' or --checkpoint)")
    corpus_path = _existing(cfg.corpus, "corpus")
    labels = _existing(cfg.labels, "label file") if cfg.labels else None
    corpus = load_corpus(corpus_path, labels)
    report_dir = cfg.report_dir or cfg.checkpoint.parent
    report_dir.mkdir(parents=True, exist_ok=True)
    cfg.checkpoint.parent.mkdir(parents=True, exist_ok=True)

    def show(entry):
        print(f"epoch {entry.epoch:3d}  rec {entry.rec:.4f}  adv_disc {entry.adv_disc:.4f}  "
              f"adv_enc {entry.adv_enc:.4f}  aux {entry.aux:.4f}", flush=True)

    model, history = train(corpus, cfg.model, seed=cfg.seed, vocab=build_vocab(corpus, cfg.max_vocab), on_epoch=show)
    save(model, cfg.checkpoint)
    write_loss_log(history, report_dir / "losses.csv")
    print(f"saved {cfg.checkpoint}")
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    model = load(args.checkpoint)
    texts = [args.sentence] if args.sentence else [" ".join(s.tokens) for s in _read_corpus(args, default_toy=False)]
    for out in model.reconstruct(texts, max_len=args.max_len):
        print(out)
    return EXIT_OK


def cmd_encode(args) -> int:
    model = load(args.checkpoint)
    latent.build_index(_read_corpus(args), model).to_csv(args.out)
    return EXIT_OK


def cmd_knn(args) -> int:
    model = load(args.checkpoint)
    index = latent.build_index(_read_corpus(args), model)
    query = model.encode_texts([args.query])[0]
    for rank, (row, dist) in enumerate(latent.knn(index, query, args.k)):
        print(f"{rank}\t{dist:.4f}\t{index.sentences[row]}")
    return EXIT_OK


def cmd_flip_metrics(args) -> int:
    validate_style_attr(args.style_attr)
    model = load(args.checkpoint)
    index = latent.build_index(_read_corpus(args), model)
    l2, hops = latent.label_flip_metrics(index, args.style_attr)
    print(json.dumps({"mean_l2_flip": l2, "mean_hops_flip": hops, "style_attr": args.style_attr, "rows": len(index)}))
    return EXIT_OK


def cmd_pca(args) -> int:
    model = load(args.checkpoint)
    index = latent.build_index(_read_corpus(args), model)
    coords = latent.pca_project(index.vectors, 2, seed=args.seed)
    latent.write_pca_csv(coords, index.labels, args.out)
    return EXIT_OK


def cmd_transfer(args) -> int:
    validate_style_attr(args.style_attr)
    model = load(args.checkpoint)
    corpus = _read_corpus(args, default_toy=False)
    if any(lab is None for lab in corpus.labels):
        raise UsageError("transfer needs a labeled corpus (--labels)")
    stats_corpus = None
    if args.stats_corpus:
        stats_corpus = load_corpus(_existing(args.stats_corpus, "stats corpus"), _existing(args.stats_labels, "stats labels"))
    records = transfer.transfer_corpus(corpus, model, args.style_attr, args.k, stats_corpus, max_len=args.max_len)
    transfer.write_transfer_tsv(records, args.out)
    print(f"wrote {len(records)} conversions to {args.out}")
    return EXIT_OK


def cmd_interpolate(args) -> int:
    model = load(args.checkpoint)
    z0 = model.encode_texts([args.start])[0]
    if args.end:
        direction = model.encode_texts([args.end])[0] - z0
        step = 1.0 / args.steps
    else:
        direction = np.random.default_rng(args.seed).standard_normal(z0.shape)
        direction /= np.linalg.norm(direction)
        step = args.step_size
    _, texts = transfer.interpolate(model, z0, direction, step, args.steps, max_len=args.max_len)
    for j, text in enumerate(texts):
        print(f"{j}\t{text}")
    return EXIT_OK


def cmd_eval(args) -> int:
    records = None
    if args.transfer:
        records = transfer.read_transfer_tsv(_existing(args.transfer, "transfer file"))
        hyps = [r.converted_sentence for r in records]
        refs = [r.source_sentence for r in records]
    elif args.hyp and args.ref:
        hyps, refs = _read_lines(args.hyp), _read_lines(args.ref)
    else:
        raise UsageError("give --transfer FILE or both --hyp and --ref")

    table = None
    if args.word_vectors:
        table = load_word_vectors(_existing(args.word_vectors, "word-vector file"))
    elif args.checkpoint:
        table = EmbeddingTable.from_model(load(args.checkpoint))
    config = {"style_attr": args.style_attr, "classifier": args.classifier}
    if records:
        config["k"] = records[0].k
    report = content_report(hyps, refs, table, config)

    if records is not None:
        validate_style_attr(args.style_attr)
        if args.classifier == "rule":
            clf = RuleClassifier(style_attr=args.style_attr)
        else:
            if table is None:
                raise UsageError("a trained classifier needs --checkpoint or --word-vectors")
            clf_corpus = load_corpus(
                _existing(args.classifier_corpus, "classifier corpus"), _existing(args.classifier_labels, "classifier labels")
            )
            clf, dev_acc = train_style_classifier(clf_corpus, table, args.style_attr)
            report.config["classifier_train_accuracy"] = clf.accuracy(
                clf_corpus.texts, [style_value(s.label, args.style_attr) for s in clf_corpus]
            )
        report.tst_accuracy, report.per_direction = tst_accuracy(
            hyps, [r.target_label for r in records], clf, [r.source_label for r in records]
        )
    text = json.dumps(report.to_dict(), indent=2, sort_keys=True)
    if args.out:
        report.write_json(args.out)
    print(text)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="epaae", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def corpus_args(p, required=False):
        p.add_argument("--corpus", required=required, help="one sentence per line (default: toy corpus)")
        p.add_argument("--labels", help="one integer label per line")

    def ckpt(p):
        p.add_argument("--checkpoint", required=True)

    p = sub.add_parser("make-toy", help="write the synthetic corpus and its splits")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0, help="split shuffle seed")
    p.set_defaults(func=cmd_make_toy)

    p = sub.add_parser("train", help="train a model from a config file")
    p.add_argument("--config")
    p.add_argument("--seed", type=int)
    p.add_argument("--zeta", type=float)
    p.add_argument("--drop-p", type=float)
    p.add_argument("--k", type=float, help="stored with the run for later transfer")
    p.add_argument("--style-attr")
    p.add_argument("--epochs", type=int)
    p.add_argument("--model-kind", choices=("aae", "laae", "betavae"))
    p.add_argument("--corpus")
    p.add_argument("--labels")
    p.add_argument("--checkpoint")
    p.add_argument("--report-dir")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("reconstruct", help="encode and greedily decode sentences")
    ckpt(p)
    corpus_args(p)
    p.add_argument("--sentence")
    p.add_argument("--max-len", type=int, default=20)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("encode", help="export latent codes as CSV")
    ckpt(p)
    corpus_args(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("knn", help="nearest latent neighbours of a query sentence")
    ckpt(p)
    corpus_args(p)
    p.add_argument("--query", required=True)
    p.add_argument("--k", type=int, default=5)
    p.set_defaults(func=cmd_knn)

    p = sub.add_parser("flip-metrics", help="mean distance and hops to the nearest other-style neighbour")
    ckpt(p)
    corpus_args(p)
    p.add_argument("--style-attr", default="decision")
    p.set_defaults(func=cmd_flip_metrics)

    p = sub.add_parser("pca", help="2-D PCA projection of latent codes")
    ckpt(p)
    corpus_args(p)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_pca)

    p = sub.add_parser("transfer", help="vector-arithmetic style transfer over a labeled corpus")
    ckpt(p)
    corpus_args(p, required=True)
    p.add_argument("--style-attr", default="decision")
    p.add_argument("--k", type=float, default=transfer.DEFAULT_K)
    p.add_argument("--stats-corpus")
    p.add_argument("--stats-labels")
    p.add_argument("--out", required=True)
    p.add_argument("--max-len", type=int, default=20)
    p.set_defaults(func=cmd_transfer)

    p = sub.add_parser("interpolate", help="decode evenly spaced points along a latent direction")
    ckpt(p)
    p.add_argument("--start", required=True)
    p.add_argument("--end", help="move toward this sentence's code (default: random direction)")
    p.add_argument("--steps", type=int, default=transfer.DEFAULT_STEPS)
    p.add_argument("--step-size", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-len", type=int, default=20)
    p.set_defaults(func=cmd_interpolate)

    p = sub.add_parser("eval", help="content preservation and transfer accuracy report")
    p.add_argument("--transfer", help="TSV written by the transfer command")
    p.add_argument("--hyp")
    p.add_argument("--ref")
    p.add_argument("--checkpoint", help="use this model's embedding table for embedding metrics")
    p.add_argument("--word-vectors", help="plain-text word vectors instead of the model's table")
    p.add_argument("--classifier", choices=("rule", "trained"), default="rule")
    p.add_argument("--classifier-corpus")
    p.add_argument("--classifier-labels")
    p.add_argument("--style-attr", default="decision")
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        print(f"epaae: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CheckpointError, TrainingError, CorpusError, ValueError, KeyError, FloatingPointError) as exc:
        print(f"epaae: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
