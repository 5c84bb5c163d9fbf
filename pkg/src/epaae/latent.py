"""Latent neighbourhood analysis over an encoded corpus."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import Corpus, style_value
from .models import AutoEncoder


@dataclass
class LatentIndex:
    vectors: np.ndarray  # (N, latent_dim)
    labels: list[int | None]
    sentences: list[str]

    def __post_init__(self):
        self.vectors = np.asarray(self.vectors, dtype=np.float64)
        if self.vectors.ndim != 2:
            raise ValueError("index vectors must form a matrix")
        if not (len(self.vectors) == len(self.labels) == len(self.sentences)):
            raise ValueError("vectors, labels and sentences must align")
        if not np.all(np.isfinite(self.vectors)):
            raise ValueError("index holds non-finite vectors")

    def __len__(self) -> int:
        return len(self.vectors)

    def styles(self, style_attr: str = "label") -> np.ndarray:
        if any(lab is None for lab in self.labels):
            raise ValueError("index has unlabeled rows")
        return np.array([style_value(lab, style_attr) for lab in self.labels])

    def to_csv(self, path: str | Path) -> None:
        dim = self.vectors.shape[1]
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["sentence", "label", *(f"z_{i}" for i in range(dim))])
            for sent, lab, vec in zip(self.sentences, self.labels, self.vectors):
                w.writerow([sent, "" if lab is None else lab, *(repr(float(v)) for v in vec)])


def build_index(corpus: Corpus, model: AutoEncoder) -> LatentIndex:
    """Encode every sentence with noise off, preserving corpus order."""
    if len(corpus) == 0:
        raise ValueError("cannot index an empty corpus")
    vectors = model.encode_texts([s.tokens for s in corpus])
    return LatentIndex(vectors, corpus.labels, corpus.texts)


def _distances(vectors: np.ndarray, query: np.ndarray) -> np.ndarray:
    return np.sqrt(((vectors - query[None, :]) ** 2).sum(axis=1))


def knn(index: LatentIndex, query: np.ndarray, k: int) -> list[tuple[int, float]]:
    """Exhaustive k nearest rows by L2 distance; ties go to the lower row id."""
    n = len(index)
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    dist = _distances(index.vectors, np.asarray(query, dtype=np.float64).reshape(-1))
    order = np.lexsort((np.arange(n), dist))[:k]
    return [(int(i), float(dist[i])) for i in order]


def pairwise_distances(vectors: np.ndarray) -> np.ndarray:
    sq = (vectors**2).sum(axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * vectors @ vectors.T
    np.fill_diagonal(d2, 0.0)
    return np.sqrt(np.maximum(d2, 0.0))


def label_flip_metrics(index: LatentIndex, style_attr: str = "decision") -> tuple[float, float]:
    """Mean L2 distance and mean 1-based rank of each row's nearest
    neighbour carrying a different style value (self excluded)."""
    styles = index.styles(style_attr)
    if len(np.unique(styles)) < 2:
        raise ValueError("label flip metrics need at least two style values")
    dist = pairwise_distances(index.vectors)
    n = len(index)
    ids = np.arange(n)
    l2_sum = hops_sum = 0.0
    counted = 0
    for i in range(n):
        row = dist[i].copy()
        order = np.lexsort((ids, row))
        order = order[order != i]
        flips = np.flatnonzero(styles[order] != styles[i])
        if flips.size == 0:
            continue
        first = flips[0]
        l2_sum += row[order[first]]
        hops_sum += first + 1
        counted += 1
    if counted == 0:
        raise ValueError("no row has a neighbour with a different style")
    return l2_sum / counted, hops_sum / counted


def pca_project(vectors: np.ndarray, dims: int = 2, seed: int = 0, iters: int = 500, tol: float = 1e-12) -> np.ndarray:
    """Project mean-centred rows onto the top principal axes.

    Axes come from power iteration with deflation on the covariance
    matrix.  Directions with no remaining variance are dropped, so a
    rank-deficient input returns fewer columns.
    """
    x = np.asarray(vectors, dtype=np.float64)
    n, d = x.shape
    if n <= dims:
        raise ValueError("need more rows than projection dimensions")
    x = x - x.mean(axis=0)
    cov = x.T @ x / (n - 1)
    scale = np.abs(cov).max()
    rng = np.random.default_rng(seed)
    axes = []
    for _ in range(min(dims, d)):
        v = rng.standard_normal(d)
        v /= np.linalg.norm(v)
        for _ in range(iters):
            w = cov @ v
            norm = np.linalg.norm(w)
            if norm <= 1e-12 * max(scale, 1e-300):
                break
            w /= norm
            converged = min(np.linalg.norm(w - v), np.linalg.norm(w + v)) < tol
            v = w
            if converged:
                break
        eigval = float(v @ cov @ v)
        if eigval <= 1e-12 * max(scale, 1e-300):
            break
        # fix the sign so the output is reproducible
        if v[np.argmax(np.abs(v))] < 0:
            v = -v
        axes.append(v)
        cov = cov - eigval * np.outer(v, v)
    if not axes:
        return np.zeros((n, 0))
    return x @ np.stack(axes, axis=1)


def write_pca_csv(coords: np.ndarray, labels, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y", "label"])
        for row, lab in zip(coords, labels):
            xy = list(row[:2]) + [0.0] * (2 - min(2, len(row)))
            w.writerow([repr(float(xy[0])), repr(float(xy[1])), "" if lab is None else lab])
