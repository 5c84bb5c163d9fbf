from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Sequence

from .embedding import EmbeddingTable, embedding_metrics
from .text import bleu2, cider, levenshtein_mean, rouge_l


@dataclass
class MetricsReport:
    bleu2: float
    rouge_l: float
    cider: float
    levenshtein_mean: float
    tst_accuracy: float | None = None
    embedding_average: float | None = None
    vector_extrema: float | None = None
    greedy_matching: float | None = None
    per_direction: dict[str, Any] = field(default_factory=dict)
    config: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        # absent metrics are left out rather than reported as zero
        return {k: v for k, v in asdict(self).items() if v is not None}

    def write_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")


def content_report(
    hypotheses: Sequence[str],
    references: Sequence[str],
    table: EmbeddingTable | None = None,
    config: dict | None = None,
) -> MetricsReport:
    report = MetricsReport(
        bleu2=bleu2(hypotheses, references),
        rouge_l=rouge_l(hypotheses, references),
        cider=cider(hypotheses, references),
        levenshtein_mean=levenshtein_mean(hypotheses, references),
        config=dict(config or {}),
    )
    if table is not None:
        report.embedding_average, report.vector_extrema, report.greedy_matching = embedding_metrics(
            hypotheses, references, table
        )
    return report
