"""Style classifiers used to score transfer accuracy."""

from __future__ import annotations

from collections import defaultdict
from typing import Sequence

import numpy as np

from ..autodiff import Adam, Tensor
from ..autodiff import ops as F
from ..corpus import Corpus, ToySpec, style_value
from .embedding import EmbeddingTable

UNDECIDED = -1


class RuleClassifier:
    """Exact classifier for the toy corpus: looks up which sub-class list
    each identity/subject/decision token belongs to."""

    def __init__(self, spec: ToySpec = ToySpec(), style_attr: str = "decision"):
        self.style_attr = style_attr
        self._lookup: dict[str, dict[str, int]] = {}
        for cls_name, groups in spec.classes().items():
            self._lookup[cls_name] = {tok: bit for bit, toks in enumerate(groups) for tok in toks}

    def label(self, sentence: str | Sequence[str]) -> int | None:
        """Full 3-bit label, or None when some token class is missing."""
        tokens = sentence.split() if isinstance(sentence, str) else list(sentence)
        bits = {}
        for cls_name, table in self._lookup.items():
            hits = [table[t] for t in tokens if t in table]
            if not hits:
                return None
            bits[cls_name] = hits[-1]
        return bits["identity"] * 4 + bits["subject"] * 2 + bits["decision"]

    def predict(self, sentences) -> np.ndarray:
        out = []
        for s in sentences:
            if self.style_attr == "decision":
                # only the decision token matters for sentiment
                tokens = s.split() if isinstance(s, str) else list(s)
                hits = [self._lookup["decision"][t] for t in tokens if t in self._lookup["decision"]]
                out.append(hits[-1] if hits else UNDECIDED)
                continue
            lab = self.label(s)
            out.append(UNDECIDED if lab is None else style_value(lab, self.style_attr))
        return np.array(out, dtype=np.int64)


class BagOfEmbeddingsClassifier:
    """Mean word vector -> linear layer -> softmax."""

    def __init__(self, table: EmbeddingTable, classes: Sequence[int], weight: np.ndarray, bias: np.ndarray):
        self.table = table
        self.classes = np.asarray(classes)
        self.weight = weight
        self.bias = bias

    def features(self, sentences) -> np.ndarray:
        feats = []
        for s in sentences:
            v = self.table.vectors(s)
            feats.append(v.mean(axis=0) if len(v) else np.zeros(self.table.matrix.shape[1]))
        return np.array(feats)

    def predict(self, sentences) -> np.ndarray:
        logits = self.features(sentences) @ self.weight + self.bias
        return self.classes[logits.argmax(axis=1)]

    def accuracy(self, sentences, styles) -> float:
        return float((self.predict(sentences) == np.asarray(styles)).mean())


def train_style_classifier(
    corpus: Corpus,
    table: EmbeddingTable,
    style_attr: str = "label",
    dev: Corpus | None = None,
    lr: float = 0.05,
    max_steps: int = 2000,
    tol: float = 1e-7,
    seed: int = 0,
) -> tuple[BagOfEmbeddingsClassifier, float | None]:
    """Full-batch Adam until the loss stops moving. Returns the classifier and dev accuracy."""
    styles = np.array([style_value(s.label, style_attr) for s in corpus])
    classes = np.unique(styles)
    if len(classes) < 2:
        raise ValueError("a style classifier needs at least two classes")
    clf = BagOfEmbeddingsClassifier(table, classes, None, None)
    x = clf.features(corpus.texts)
    y = np.searchsorted(classes, styles)
    rng = np.random.default_rng(seed)
    w = Tensor(rng.normal(0, 0.01, (x.shape[1], len(classes))), requires_grad=True, dtype=np.float64)
    b = Tensor(np.zeros(len(classes)), requires_grad=True, dtype=np.float64)
    xt = Tensor(x, dtype=np.float64)
    opt = Adam([w, b], lr=lr)
    previous = np.inf
    for _ in range(max_steps):
        opt.zero_grad()
        loss = F.softmax_cross_entropy(F.matmul(xt, w) + b, y)
        loss.backward()
        opt.step()
        if abs(previous - loss.item()) < tol:
            break
        previous = loss.item()
    clf.weight, clf.bias = w.data, b.data
    dev_acc = None
    if dev is not None and len(dev):
        dev_acc = clf.accuracy(dev.texts, [style_value(s.label, style_attr) for s in dev])
    return clf, dev_acc


def tst_accuracy(converted: Sequence[str], targets: Sequence[int], classifier, sources: Sequence[int] | None = None):
    """Share of converted sentences classified as their target style.

    Returns ``(overall, per_direction)`` where ``per_direction`` maps
    ``"src->tgt"`` to ``{"accuracy", "count"}``; without ``sources`` it is empty.
    """
    targets = np.asarray(targets)
    if len(converted) == 0:
        return 0.0, {}
    hits = classifier.predict(list(converted)) == targets
    per_direction = {}
    if sources is not None:
        groups: dict[str, list[bool]] = defaultdict(list)
        for s, t, h in zip(sources, targets, hits):
            groups[f"{s}->{t}"].append(bool(h))
        per_direction = {k: {"accuracy": float(np.mean(v)), "count": len(v)} for k, v in sorted(groups.items())}
    return float(hits.mean()), per_direction
