import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epaae.corpus import Corpus, generate_toy, split_corpus
from epaae.metrics import (
    UNDECIDED,
    EmbeddingTable,
    RuleClassifier,
    bleu2,
    cider,
    cider_scores,
    content_report,
    embedding_metrics,
    lcs_length,
    levenshtein,
    levenshtein_mean,
    load_word_vectors,
    rouge_l,
    train_style_classifier,
    tst_accuracy,
)

import oracles

WORDS = st.lists(st.sampled_from("a b c d e".split()), min_size=1, max_size=7).map(" ".join)


class TestBleu:
    def test_identical(self):
        assert bleu2(["the cat sat", "a dog"], ["the cat sat", "a dog"]) == 1.0

    def test_clipping_kills_bigrams(self):
        assert bleu2(["the the the"], ["the cat"]) == 0.0

    def test_brevity_penalty(self):
        assert bleu2(["a b"], ["a b c d"]) == pytest.approx(math.exp(-1))

    def test_empty_and_mismatched(self):
        with pytest.raises(ValueError):
            bleu2([], [])
        with pytest.raises(ValueError):
            bleu2(["a"], ["a", "b"])


class TestRouge:
    def test_simple_values(self):
        assert rouge_l(["a b c"], ["a b c"]) == pytest.approx(1.0)
        assert rouge_l(["a b"], ["c d"]) == 0.0
        assert rouge_l(["a b c"], ["a c d"]) == pytest.approx(2 / 3)

    def test_lcs(self):
        assert lcs_length("a b c d".split(), "b d a".split()) == 2


class TestCider:
    def test_identical_pair_scores_ten(self):
        hyps = ["the cat sat on the mat", "a dog ran"]
        assert cider_scores(hyps, hyps)[0] == pytest.approx(10.0)

    def test_disjoint_scores_zero(self):
        assert cider_scores(["x y"], ["a b"])[0] == 0.0

    def test_two_pair_oracle(self):
        hyps, refs = ["a b c", "b c d"], ["a b d", "c d e"]
        assert cider(hyps, refs) == pytest.approx(oracles.cider(hyps, refs), abs=1e-12)


class TestLevenshtein:
    def test_cases(self):
        assert levenshtein("a b c", "a b c") == 0
        assert levenshtein("a b c", "a b x c") == 1
        assert levenshtein("k i t t e n", "s i t t i n g") == 3
        assert levenshtein_mean(["a", "a b"], ["a", "b"]) == 0.5


def test_random_pairs_match_oracles():
    hyps, refs = oracles.random_pairs(np.random.default_rng(20))
    assert bleu2(hyps, refs) == pytest.approx(oracles.bleu2(hyps, refs), abs=1e-9)
    assert rouge_l(hyps, refs) == pytest.approx(oracles.rouge_l(hyps, refs), abs=1e-9)
    assert cider(hyps, refs) == pytest.approx(oracles.cider(hyps, refs), abs=1e-9)
    for h, r in zip(hyps, refs):
        assert levenshtein(h, r) == oracles.levenshtein(h, r)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(WORDS, WORDS), min_size=1, max_size=6))
def test_ranges_and_oracles(pairs):
    hyps, refs = [p[0] for p in pairs], [p[1] for p in pairs]
    b, r, c = bleu2(hyps, refs), rouge_l(hyps, refs), cider(hyps, refs)
    assert 0 <= b <= 1 + 1e-12 and 0 <= r <= 1 + 1e-12 and 0 <= c <= 10 + 1e-9
    assert b == pytest.approx(oracles.bleu2(hyps, refs), abs=1e-9)
    assert c == pytest.approx(oracles.cider(hyps, refs), abs=1e-9)
    # edit distance is a metric
    assert levenshtein(hyps[0], refs[0]) == levenshtein(refs[0], hyps[0])


def small_table():
    return EmbeddingTable({"x": 0, "y": 1, "z": 2}, np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]))


class TestEmbedding:
    def test_identical_and_orthogonal(self):
        table = small_table()
        assert embedding_metrics(["x z"], ["x z"], table) == pytest.approx((1.0, 1.0, 1.0))
        assert embedding_metrics(["x"], ["y"], table) == pytest.approx((0.0, 0.0, 0.0))

    def test_two_token_hand_case(self):
        table = small_table()
        # hyp "x y" -> mean (.5, .5), extrema (1, 1); ref "z" -> (1, 1); each hyp word matches z at 1/sqrt 2
        avg, ext, greedy = embedding_metrics(["x y"], ["z"], table)
        assert avg == pytest.approx(1.0)
        assert ext == pytest.approx(1.0)
        c = 1 / math.sqrt(2)
        assert greedy == pytest.approx(c)

    def test_extrema_keeps_sign(self):
        table = EmbeddingTable({"p": 0, "n": 1}, np.array([[0.5, 1.0], [-2.0, 0.1]]))
        _, ext, _ = embedding_metrics(["p n"], ["n"], table)
        expected = np.array([-2.0, 1.0]) @ np.array([-2.0, 0.1]) / (np.hypot(2, 1) * np.hypot(2, 0.1))
        assert ext == pytest.approx(expected)

    def test_word_vector_file(self, tmp_path):
        (tmp_path / "v.txt").write_text("good 1 0\nbad 0 1\n<unk> 1 1\n")
        table = load_word_vectors(tmp_path / "v.txt")
        assert table.unk_token == "<unk>"
        np.testing.assert_array_equal(table.vectors("good zebra"), [[1, 0], [1, 1]])
        (tmp_path / "bad.txt").write_text("good 1 0\nbad 0\n")
        with pytest.raises(ValueError):
            load_word_vectors(tmp_path / "bad.txt")

    def test_no_embeddable_tokens(self):
        table = small_table()
        with pytest.raises(ValueError):
            embedding_metrics(["q"], ["x"], table)


class TestClassifiers:
    def test_rule_classifier_is_exact_on_toy(self):
        toy = generate_toy()
        clf = RuleClassifier(style_attr="label")
        assert (clf.predict(toy.texts) == np.array(toy.labels)).all()
        assert RuleClassifier().predict(["the man said the food is good"])[0] == 0
        assert RuleClassifier().predict(["the man said the food"])[0] == UNDECIDED

    def test_trained_classifier_separates_decision(self):
        toy = generate_toy()
        train, dev, _ = split_corpus(toy, seed=0)
        words = sorted({t for s in toy for t in s.tokens})
        rng = np.random.default_rng(0)
        table = EmbeddingTable({w: i for i, w in enumerate(words)}, rng.normal(size=(len(words), 64)))
        clf, dev_acc = train_style_classifier(train, table, "decision", dev=dev)
        assert dev_acc >= 0.99

    def test_single_class_rejected(self):
        corpus = Corpus.from_texts(["a b", "b c"], [0, 0])
        with pytest.raises(ValueError):
            train_style_classifier(corpus, small_table(), "label")

    def test_tst_accuracy(self):
        clf = RuleClassifier()
        converted = ["the man said the food is bad", "the man said the food is good", "the man said the food is bad"]
        overall, per = tst_accuracy(converted, [1, 1, 1], clf, sources=[0, 0, 1])
        assert overall == pytest.approx(2 / 3)
        assert per["0->1"] == {"accuracy": 0.5, "count": 2}
        assert sum(v["count"] for v in per.values()) == 3

    def test_unchanged_style_scores_zero(self):
        toy = generate_toy()
        flipped = [1 - lab % 2 for lab in toy.labels]
        overall, _ = tst_accuracy(toy.texts, flipped, RuleClassifier())
        assert overall == 0.0


def test_report_omits_missing_metrics(tmp_path):
    report = content_report(["a b"], ["a b"], config={"k": 2})
    d = report.to_dict()
    assert d["bleu2"] == 1.0 and "tst_accuracy" not in d and "embedding_average" not in d
    report.write_json(tmp_path / "r.json")
    assert '"bleu2": 1.0' in (tmp_path / "r.json").read_text()
