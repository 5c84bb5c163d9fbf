from .classifier import (
    UNDECIDED,
    BagOfEmbeddingsClassifier,
    RuleClassifier,
    train_style_classifier,
    tst_accuracy,
)
from .embedding import EmbeddingTable, embedding_metrics, load_word_vectors
from .report import MetricsReport, content_report
from .text import bleu2, cider, cider_scores, lcs_length, levenshtein, levenshtein_mean, rouge_l

__all__ = [
    "UNDECIDED",
    "BagOfEmbeddingsClassifier",
    "EmbeddingTable",
    "MetricsReport",
    "RuleClassifier",
    "bleu2",
    "cider",
    "cider_scores",
    "content_report",
    "embedding_metrics",
    "lcs_length",
    "levenshtein",
    "levenshtein_mean",
    "load_word_vectors",
    "rouge_l",
    "train_style_classifier",
    "tst_accuracy",
]
