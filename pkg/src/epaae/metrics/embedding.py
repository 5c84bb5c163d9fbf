"""Embedding-based sentence similarity: average, vector extrema, greedy matching."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..corpus import UNK


@dataclass
class EmbeddingTable:
    """Word vectors keyed by token; unknown tokens use ``unk_token`` when present
    and are skipped otherwise."""

    index: dict[str, int]
    matrix: np.ndarray
    unk_token: str | None = None

    @classmethod
    def from_model(cls, model) -> EmbeddingTable:
        vocab = model.vocab
        matrix = np.asarray(model.params["embedding"].data, dtype=np.float64)
        return cls(dict(vocab.stoi), matrix, vocab.itos[UNK])

    def vectors(self, tokens) -> np.ndarray:
        tokens = tokens.split() if isinstance(tokens, str) else list(tokens)
        rows = []
        for t in tokens:
            if t in self.index:
                rows.append(self.index[t])
            elif self.unk_token is not None:
                rows.append(self.index[self.unk_token])
        return self.matrix[rows] if rows else np.zeros((0, self.matrix.shape[1]))


def load_word_vectors(path: str | Path) -> EmbeddingTable:
    """Read ``token v_1 ... v_E`` lines."""
    index: dict[str, int] = {}
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.rstrip().split(" ")
            if len(parts) < 2:
                continue
            try:
                vec = [float(v) for v in parts[1:]]
            except ValueError:
                raise ValueError(f"{path}:{lineno}: malformed vector") from None
            if rows and len(vec) != len(rows[0]):
                raise ValueError(f"{path}:{lineno}: expected {len(rows[0])} values, got {len(vec)}")
            index[parts[0]] = len(rows)
            rows.append(vec)
    if not rows:
        raise ValueError(f"{path}: no vectors")
    unk = next((t for t in ("<unk>", "unk") if t in index), None)
    return EmbeddingTable(index, np.array(rows), unk)


def _cos(a: np.ndarray, b: np.ndarray) -> float:
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        raise ValueError("zero-norm sentence vector")
    return float(a @ b / (na * nb))


def _extrema(m: np.ndarray) -> np.ndarray:
    # per dimension, the entry of largest magnitude with its sign kept
    idx = np.abs(m).argmax(axis=0)
    return m[idx, np.arange(m.shape[1])]


def _greedy(a: np.ndarray, b: np.ndarray) -> float:
    na = np.linalg.norm(a, axis=1, keepdims=True)
    nb = np.linalg.norm(b, axis=1, keepdims=True)
    sims = (a / np.where(na == 0, 1, na)) @ (b / np.where(nb == 0, 1, nb)).T
    return float(sims.max(axis=1).mean())


def pair_scores(hyp: np.ndarray, ref: np.ndarray) -> tuple[float, float, float]:
    if len(hyp) == 0 or len(ref) == 0:
        raise ValueError("sentence has no embeddable tokens")
    average = _cos(hyp.mean(axis=0), ref.mean(axis=0))
    extrema = _cos(_extrema(hyp), _extrema(ref))
    greedy = 0.5 * (_greedy(hyp, ref) + _greedy(ref, hyp))
    return average, extrema, greedy


def embedding_metrics(hypotheses, references, table: EmbeddingTable) -> tuple[float, float, float]:
    """Corpus means of (embedding average, vector extrema, greedy matching); raw cosines."""
    if len(hypotheses) != len(references) or not hypotheses:
        raise ValueError("need equally many, non-zero, hypotheses and references")
    scores = np.array([pair_scores(table.vectors(h), table.vectors(r)) for h, r in zip(hypotheses, references)])
    return tuple(float(v) for v in scores.mean(axis=0))
