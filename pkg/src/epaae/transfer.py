"""Latent vector-arithmetic style transfer and interpolation."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import Corpus, style_value
from .latent import LatentIndex, build_index
from .models import AutoEncoder

DEFAULT_K = 2.0
DEFAULT_STEPS = 5


@dataclass
class StyleStats:
    means: dict[int, np.ndarray]
    counts: dict[int, int]

    def direction(self, source: int, target: int) -> np.ndarray:
        for style in (source, target):
            if style not in self.means:
                raise KeyError(f"unknown style {style}")
        return self.means[target] - self.means[source]


def style_means(index: LatentIndex, style_attr: str = "label", required=None) -> StyleStats:
    styles = index.styles(style_attr)
    means, counts = {}, {}
    for s in np.unique(styles):
        rows = index.vectors[styles == s]
        means[int(s)] = rows.mean(axis=0)
        counts[int(s)] = len(rows)
    for s in required or ():
        if s not in means:
            raise KeyError(f"style {s} has no vectors")
    return StyleStats(means, counts)


def transfer(z: np.ndarray, source: int, target: int, k: float, stats: StyleStats) -> np.ndarray:
    """Move ``z`` by ``k`` times the difference of the target and source style means."""
    return np.asarray(z, dtype=np.float64) + k * stats.direction(source, target)


def interpolate(
    model: AutoEncoder, z_start: np.ndarray, direction: np.ndarray, step_size: float = 1.0, steps: int = DEFAULT_STEPS,
    max_len: int = 20,
) -> tuple[np.ndarray, list[str]]:
    """Points ``z_start + j * step_size * direction`` for j = 0..steps, greedily decoded."""
    if steps < 1:
        raise ValueError("steps must be at least 1")
    direction = np.asarray(direction, dtype=np.float64)
    if not np.any(direction):
        raise ValueError("direction must be non-zero")
    j = np.arange(steps + 1)[:, None]
    points = np.asarray(z_start, dtype=np.float64)[None, :] + j * step_size * direction[None, :]
    return points, model.decode_texts(points, max_len=max_len)


@dataclass
class TransferRecord:
    source_label: int
    target_label: int
    k: float
    source_sentence: str
    converted_sentence: str


def transfer_corpus(
    corpus: Corpus,
    model: AutoEncoder,
    style_attr: str = "label",
    k: float = DEFAULT_K,
    stats_corpus: Corpus | None = None,
    max_len: int = 20,
) -> list[TransferRecord]:
    """Convert every sentence to every other style value present in the corpus.

    Style means come from ``stats_corpus`` (defaults to ``corpus`` itself).
    """
    index = build_index(corpus, model)
    stats_index = index if stats_corpus is None else build_index(stats_corpus, model)
    stats = style_means(stats_index, style_attr)
    sources = index.styles(style_attr)
    targets = sorted(stats.means)
    jobs = []
    for i, src in enumerate(sources):
        for tgt in targets:
            if tgt != src:
                jobs.append((i, int(src), tgt, transfer(index.vectors[i], int(src), tgt, k, stats)))
    if not jobs:
        return []
    decoded = model.decode_texts(np.stack([j[3] for j in jobs]), max_len=max_len)
    return [
        TransferRecord(src, tgt, k, index.sentences[i], out)
        for (i, src, tgt, _), out in zip(jobs, decoded)
    ]


def write_transfer_tsv(records: list[TransferRecord], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(["source_label", "target_label", "k", "source_sentence", "converted_sentence"])
        for r in records:
            w.writerow([r.source_label, r.target_label, repr(float(r.k)), r.source_sentence, r.converted_sentence])


def read_transfer_tsv(path: str | Path) -> list[TransferRecord]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh, delimiter="\t")
        return [
            TransferRecord(
                int(row["source_label"]),
                int(row["target_label"]),
                float(row["k"]),
                row["source_sentence"],
                row["converted_sentence"] or "",
            )
            for row in reader
        ]


__all__ = [
    "StyleStats",
    "TransferRecord",
    "interpolate",
    "read_transfer_tsv",
    "style_means",
    "style_value",
    "transfer",
    "transfer_corpus",
    "write_transfer_tsv",
]
