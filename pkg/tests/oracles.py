"""Direct-definition reference implementations, written independently of the package."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np


def ngram_list(tokens, n):
    return [tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1)]


def clipped_matches(hyp, ref, n):
    # greedy one-to-one matching: each reference n-gram can be used once
    pool = ngram_list(ref, n)
    hits = 0
    for g in ngram_list(hyp, n):
        if g in pool:
            pool.remove(g)
            hits += 1
    return hits


def bleu2(hyps, refs):
    hyps = [h.split() for h in hyps]
    refs = [r.split() for r in refs]
    p = []
    for n in (1, 2):
        hit = sum(clipped_matches(h, r, n) for h, r in zip(hyps, refs))
        total = sum(len(ngram_list(h, n)) for h in hyps)
        p.append(hit / total if total else 0.0)
    if min(p) == 0:
        return 0.0
    c = sum(map(len, hyps))
    r = sum(map(len, refs))
    bp = math.exp(1 - r / c) if c < r else 1.0
    return bp * math.sqrt(p[0] * p[1])


def lcs(a, b):
    a, b = tuple(a), tuple(b)

    @lru_cache(maxsize=None)
    def go(i, j):
        if i == len(a) or j == len(b):
            return 0
        if a[i] == b[j]:
            return 1 + go(i + 1, j + 1)
        return max(go(i + 1, j), go(i, j + 1))

    return go(0, 0)


def rouge_l(hyps, refs, beta=1.2):
    scores = []
    for h, r in zip(hyps, refs):
        h, r = h.split(), r.split()
        m = lcs(h, r)
        if m == 0:
            scores.append(0.0)
            continue
        prec, rec = m / len(h), m / len(r)
        scores.append((1 + beta**2) * prec * rec / (rec + beta**2 * prec))
    return float(np.mean(scores))


def cider(hyps, refs, max_n=4):
    hyps = [h.split() for h in hyps]
    refs = [r.split() for r in refs]
    N = len(refs)
    per_pair = np.zeros(N)
    for n in range(1, max_n + 1):
        grams = sorted({g for s in hyps + refs for g in ngram_list(s, n)})
        col = {g: i for i, g in enumerate(grams)}

        def counts(s):
            v = np.zeros(len(grams))
            for g in ngram_list(s, n):
                v[col[g]] += 1
            return v

        R = np.array([counts(r) for r in refs])
        H = np.array([counts(h) for h in hyps])
        df = (R > 0).sum(axis=0)
        idf = np.log(N) - np.log(np.maximum(df, 1))
        for i in range(N):
            a, b = H[i] * idf, R[i] * idf
            na, nb = np.linalg.norm(a), np.linalg.norm(b)
            if na > 0 and nb > 0:
                per_pair[i] += a @ b / (na * nb)
    return float(np.mean(per_pair * 10 / max_n))


def levenshtein(a, b):
    a, b = tuple(a.split()), tuple(b.split())

    @lru_cache(maxsize=None)
    def d(i, j):
        if i == 0:
            return j
        if j == 0:
            return i
        return min(d(i - 1, j) + 1, d(i, j - 1) + 1, d(i - 1, j - 1) + (a[i - 1] != b[j - 1]))

    return d(len(a), len(b))


def random_pairs(rng, count=20, words="the a cat dog sat on mat red big".split()):
    def sentence():
        return " ".join(rng.choice(words, size=rng.integers(1, 8)))

    return [sentence() for _ in range(count)], [sentence() for _ in range(count)]
