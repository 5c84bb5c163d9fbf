"""Surface-overlap metrics on whitespace-tokenised sentences."""

from __future__ import annotations

import math
from collections import Counter
from typing import Sequence

ROUGE_BETA = 1.2
CIDER_MAX_N = 4


def _tokens(s: str | Sequence[str]) -> list[str]:
    return s.split() if isinstance(s, str) else list(s)


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def _check_pairs(hypotheses, references) -> tuple[list[list[str]], list[list[str]]]:
    if len(hypotheses) != len(references):
        raise ValueError(f"{len(hypotheses)} hypotheses but {len(references)} references")
    if len(hypotheses) == 0:
        raise ValueError("no hypotheses to score")
    return [_tokens(h) for h in hypotheses], [_tokens(r) for r in references]


def bleu2(hypotheses, references) -> float:
    """Corpus BLEU with uniform unigram/bigram weights and no smoothing."""
    hyps, refs = _check_pairs(hypotheses, references)
    matches = [0, 0]
    totals = [0, 0]
    hyp_len = sum(len(h) for h in hyps)
    ref_len = sum(len(r) for r in refs)
    for h, r in zip(hyps, refs):
        for n in (1, 2):
            hc, rc = _ngrams(h, n), _ngrams(r, n)
            matches[n - 1] += sum(min(c, rc[g]) for g, c in hc.items())
            totals[n - 1] += sum(hc.values())
    if hyp_len == 0 or min(matches) == 0:
        return 0.0
    log_p = sum(0.5 * math.log(m / t) for m, t in zip(matches, totals))
    bp = 1.0 if hyp_len >= ref_len else math.exp(1.0 - ref_len / hyp_len)
    return bp * math.exp(log_p)


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b):
            cur.append(prev[j] + 1 if x == y else max(prev[j + 1], cur[j]))
        prev = cur
    return prev[-1]


def rouge_l_pair(hyp, ref, beta: float = ROUGE_BETA) -> float:
    h, r = _tokens(hyp), _tokens(ref)
    lcs = lcs_length(h, r)
    if lcs == 0:
        return 0.0
    p, rec = lcs / len(h), lcs / len(r)
    return (1 + beta**2) * p * rec / (rec + beta**2 * p)


def rouge_l(hypotheses, references, beta: float = ROUGE_BETA) -> float:
    hyps, refs = _check_pairs(hypotheses, references)
    return sum(rouge_l_pair(h, r, beta) for h, r in zip(hyps, refs)) / len(hyps)


def cider_scores(hypotheses, references, max_n: int = CIDER_MAX_N) -> list[float]:
    """Per-pair CIDEr (no length penalty, no clipping), in [0, 10].

    Document frequencies come from the reference side; n-gram vectors are
    raw counts times log(N / df).  A zero-norm vector scores 0 for that n.
    """
    hyps, refs = _check_pairs(hypotheses, references)
    n_docs = len(refs)
    df: Counter = Counter()
    for r in refs:
        for n in range(1, max_n + 1):
            df.update(_ngrams(r, n).keys())
    log_n = math.log(float(n_docs))

    def vec(tokens, n):
        return {g: c * (log_n - math.log(max(1.0, df[g]))) for g, c in _ngrams(tokens, n).items()}

    scores = []
    for h, r in zip(hyps, refs):
        total = 0.0
        for n in range(1, max_n + 1):
            vh, vr = vec(h, n), vec(r, n)
            nh = math.sqrt(sum(v * v for v in vh.values()))
            nr = math.sqrt(sum(v * v for v in vr.values()))
            if nh == 0 or nr == 0:
                continue
            total += sum(v * vr.get(g, 0.0) for g, v in vh.items()) / (nh * nr)
        scores.append(10.0 * total / max_n)
    return scores


def cider(hypotheses, references, max_n: int = CIDER_MAX_N) -> float:
    scores = cider_scores(hypotheses, references, max_n)
    return sum(scores) / len(scores)


def levenshtein(a, b) -> int:
    """Token-level edit distance with unit costs."""
    a, b = _tokens(a), _tokens(b)
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, 1):
        cur = [i]
        for j, y in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1]


def levenshtein_mean(hypotheses, references) -> float:
    hyps, refs = _check_pairs(hypotheses, references)
    return sum(levenshtein(h, r) for h, r in zip(hyps, refs)) / len(hyps)
