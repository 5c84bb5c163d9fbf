"""Toy corpus generation, corpus loading, vocabulary and batching."""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

PAD, BOS, EOS, UNK = 0, 1, 2, 3
SPECIALS = ("<pad>", "<bos>", "<eos>", "<unk>")
DEFAULT_MAX_VOCAB = 25_000

_STRIP = re.compile(r"[^a-z0-9'\s]")


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class ToySpec:
    """Token classes of the synthetic review corpus.

    Each class has two sub-classes; the sub-class index is the bit value
    used in the 3-bit label (identity, subject, decision from MSB to LSB).
    """

    identity: tuple[tuple[str, ...], tuple[str, ...]] = (
        ("boy", "man", "husband", "boyfriend", "waiter"),
        ("girl", "woman", "wife", "girlfriend", "waitress"),
    )
    subject: tuple[tuple[str, ...], tuple[str, ...]] = (
        ("food", "meal", "dinner", "breakfast", "lunch", "pasta", "chicken"),
        ("service", "staff", "experience", "atmosphere", "location", "place"),
    )
    decision: tuple[tuple[str, ...], tuple[str, ...]] = (
        ("good", "great", "excellent", "decent", "amazing", "wonderful", "reasonable"),
        ("bad", "worst", "horrible", "spicy", "bland", "expensive", "disgusting", "mediocre"),
    )
    template: str = "the {identity} said the {subject} is {decision}"

    identity_names = ("male", "female")
    subject_names = ("food", "others")
    decision_names = ("positive", "negative")

    def classes(self) -> dict[str, tuple[tuple[str, ...], tuple[str, ...]]]:
        return {"identity": self.identity, "subject": self.subject, "decision": self.decision}


# bit position of each toy attribute inside the 3-bit label
STYLE_BITS = {"identity": 2, "subject": 1, "decision": 0}


def style_value(label: int, style_attr: str = "label") -> int:
    """Project a corpus label onto the chosen style attribute."""
    if style_attr == "label":
        return int(label)
    try:
        return (int(label) >> STYLE_BITS[style_attr]) & 1
    except KeyError:
        raise CorpusError(f"unknown style attribute {style_attr!r}") from None


def toy_label(identity_bit: int, subject_bit: int, decision_bit: int) -> int:
    return identity_bit * 4 + subject_bit * 2 + decision_bit


@dataclass
class LabeledSentence:
    tokens: list[str]
    label: int | None = None

    def __post_init__(self):
        if not self.tokens:
            raise CorpusError("a sentence needs at least one token")
        if self.label is not None and self.label < 0:
            raise CorpusError("labels are non-negative integers")

    @property
    def text(self) -> str:
        return " ".join(self.tokens)


@dataclass
class Corpus:
    sentences: list[LabeledSentence] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self):
        return iter(self.sentences)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Corpus(self.sentences[i])
        return self.sentences[i]

    @property
    def labels(self) -> list[int | None]:
        return [s.label for s in self.sentences]

    @property
    def texts(self) -> list[str]:
        return [s.text for s in self.sentences]

    def subset(self, indices: Iterable[int]) -> Corpus:
        return Corpus([self.sentences[i] for i in indices])

    @classmethod
    def from_texts(cls, texts: Iterable[str], labels: Iterable[int] | None = None) -> Corpus:
        texts = list(texts)
        labels = [None] * len(texts) if labels is None else list(labels)
        if len(labels) != len(texts):
            raise CorpusError(f"{len(texts)} sentences but {len(labels)} labels")
        return cls([LabeledSentence(t.split(), lab) for t, lab in zip(texts, labels)])


def generate_toy(spec: ToySpec = ToySpec()) -> Corpus:
    """Every template instantiation, identity-major then subject then decision."""
    sentences = []
    for (ib, ident), (sb, subj), (db, dec) in itertools.product(
        _flatten(spec.identity), _flatten(spec.subject), _flatten(spec.decision)
    ):
        text = spec.template.format(identity=ident, subject=subj, decision=dec)
        sentences.append(LabeledSentence(text.split(), toy_label(ib, sb, db)))
    return Corpus(sentences)


def _flatten(groups):
    return [(bit, tok) for bit, toks in enumerate(groups) for tok in toks]


def split_corpus(corpus: Corpus, seed: int = 0, fractions=(0.8, 0.1, 0.1)) -> tuple[Corpus, Corpus, Corpus]:
    """Seeded shuffle then contiguous train/dev/test cut."""
    n = len(corpus)
    order = np.random.default_rng(seed).permutation(n)
    n_train = int(round(fractions[0] * n))
    n_dev = int(round(fractions[1] * n))
    return (
        corpus.subset(order[:n_train]),
        corpus.subset(order[n_train : n_train + n_dev]),
        corpus.subset(order[n_train + n_dev :]),
    )


def clean_line(line: str) -> list[str]:
    return _STRIP.sub("", line.lower()).split()


def load_corpus(text_file: str | Path, label_file: str | Path | None = None) -> Corpus:
    try:
        lines = Path(text_file).read_text(encoding="utf-8").splitlines()
        label_lines = None if label_file is None else Path(label_file).read_text(encoding="utf-8").splitlines()
    except (OSError, UnicodeDecodeError) as exc:
        raise CorpusError(f"cannot read corpus: {exc}") from exc
    if label_lines is not None and len(label_lines) != len(lines):
        raise CorpusError(f"{text_file} has {len(lines)} lines but {label_file} has {len(label_lines)}")
    sentences = []
    for i, line in enumerate(lines):
        tokens = clean_line(line)
        if not tokens:
            continue
        label = None
        if label_lines is not None:
            try:
                label = int(label_lines[i].strip())
            except ValueError:
                raise CorpusError(f"{label_file}:{i + 1}: not an integer label") from None
        sentences.append(LabeledSentence(tokens, label))
    return Corpus(sentences)


def write_corpus(corpus: Corpus, text_file: str | Path, label_file: str | Path | None = None) -> None:
    Path(text_file).write_text("".join(t + "\n" for t in corpus.texts), encoding="utf-8")
    if label_file is not None:
        Path(label_file).write_text("".join(f"{lab}\n" for lab in corpus.labels), encoding="utf-8")


class Vocab:
    """Token/id bijection. Ids 0..3 are pad, bos, eos, unk."""

    def __init__(self, tokens: Sequence[str] = (), max_size: int = DEFAULT_MAX_VOCAB):
        if max_size < len(SPECIALS):
            raise CorpusError(f"max_size must be at least {len(SPECIALS)}")
        self.max_size = max_size
        self.itos: list[str] = list(SPECIALS)
        for tok in tokens:
            if len(self.itos) >= max_size:
                break
            if tok not in SPECIALS:
                self.itos.append(tok)
        self.stoi = {tok: i for i, tok in enumerate(self.itos)}
        if len(self.stoi) != len(self.itos):
            raise CorpusError("duplicate tokens in vocabulary")

    def __len__(self) -> int:
        return len(self.itos)

    def __contains__(self, token: str) -> bool:
        return token in self.stoi

    def __eq__(self, other) -> bool:
        return isinstance(other, Vocab) and self.itos == other.itos and self.max_size == other.max_size

    def encode(self, sentence: str | Sequence[str]) -> list[int]:
        tokens = sentence.split() if isinstance(sentence, str) else list(sentence)
        if not tokens:
            raise CorpusError("cannot encode an empty sentence")
        return [self.stoi.get(t, UNK) for t in tokens]

    def decode(self, ids: Iterable[int]) -> str:
        """Tokens up to the first eos; pad and bos are dropped, unk prints as ``unk``."""
        out = []
        for i in ids:
            i = int(i)
            if i == EOS:
                break
            if i in (PAD, BOS):
                continue
            out.append("unk" if i == UNK else self.itos[i])
        return " ".join(out)

    def to_dict(self) -> dict:
        return {"max_size": self.max_size, "tokens": self.itos[len(SPECIALS) :]}

    @classmethod
    def from_dict(cls, d: dict) -> Vocab:
        return cls(d["tokens"], max_size=d["max_size"])


def build_vocab(corpus: Corpus, max_size: int = DEFAULT_MAX_VOCAB) -> Vocab:
    if len(corpus) == 0:
        raise CorpusError("cannot build a vocabulary from an empty corpus")
    counts: Counter[str] = Counter()
    first_seen: dict[str, int] = {}
    for sent in corpus:
        for tok in sent.tokens:
            counts[tok] += 1
            first_seen.setdefault(tok, len(first_seen))
    ranked = sorted(counts, key=lambda t: (-counts[t], first_seen[t]))
    return Vocab(ranked, max_size=max_size)


@dataclass
class Batch:
    ids: np.ndarray  # (B, T) bos + tokens + eos, right-padded
    lengths: np.ndarray  # (B,) row lengths before padding
    index: np.ndarray  # (B,) positions in the source corpus


def pad_rows(rows: Sequence[Sequence[int]]) -> tuple[np.ndarray, np.ndarray]:
    lengths = np.array([len(r) for r in rows], dtype=np.int64)
    out = np.full((len(rows), int(lengths.max())), PAD, dtype=np.int64)
    for i, r in enumerate(rows):
        out[i, : len(r)] = r
    return out, lengths


def make_batch(token_ids: Sequence[Sequence[int]], index=None) -> Batch:
    rows = [[BOS, *ids, EOS] for ids in token_ids]
    ids, lengths = pad_rows(rows)
    index = np.arange(len(rows)) if index is None else np.asarray(index)
    return Batch(ids, lengths, index)


def batches(corpus: Corpus, vocab: Vocab, batch_size: int, rng: np.random.Generator | None = None):
    """Yield padded batches; shuffled with ``rng`` when given, in order otherwise."""
    if batch_size < 1:
        raise CorpusError("batch_size must be at least 1")
    encoded = [vocab.encode(s.tokens) for s in corpus]
    order = rng.permutation(len(encoded)) if rng is not None else np.arange(len(encoded))
    for start in range(0, len(order), batch_size):
        idx = order[start : start + batch_size]
        yield make_batch([encoded[i] for i in idx], idx)
