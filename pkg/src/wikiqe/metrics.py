"""Retrieval-quality and agreement metrics: P@x, S@x, NDCG@k, Cohen's kappa.

All computations are pure and per query; reports macro-average over the
query set. The CSV emitted by EvalReport (``query,method,metric,cutoff,
value``) is the plot-data feed for external chart tooling.
"""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

__all__ = [
    "PRECISION_CUTOFFS",
    "NDCG_CUTOFFS",
    "precision_at",
    "success_at",
    "ndcg_at",
    "cohens_kappa",
    "timed",
    "JudgmentSet",
    "EvalReport",
    "improvement_ratios",
]

PRECISION_CUTOFFS = (3, 5, 10, 20, 50)
NDCG_CUTOFFS = (3, 5, 7, 10)
VALID_GRADES = (0, 1, 2)  # not / partially / fully relevant


def precision_at(ranked: list[str], gold: set[str], x: int) -> float:
    """Fraction of the top-x results that are in the gold set.

    The denominator is min(x, len(ranked)) so short result lists are not
    penalized for positions they never filled. Empty list -> 0.
    """
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    if not ranked:
        return 0.0
    hits = sum(1 for url in ranked[:x] if url in gold)
    return hits / min(x, len(ranked))


def success_at(ranked: list[str], gold: set[str], x: int) -> int:
    """1 if any of the top-x results is in the gold set, else 0."""
    if x < 1:
        raise ValueError(f"x must be >= 1, got {x}")
    return int(any(url in gold for url in ranked[:x]))


def ndcg_at(ranked: list[str], grades: dict[str, int], k: int) -> float:
    """Normalized DCG with graded gains.

    Gain is the raw grade (0/1/2), discount 1/log2(i + 1) at 1-based rank
    i. The ideal DCG is computed over ALL graded documents for the query,
    not just the retrieved ones. All grades zero -> 0 by convention.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    dcg = sum(
        grades.get(url, 0) / math.log2(i + 1)
        for i, url in enumerate(ranked[:k], start=1)
    )
    ideal = sorted(grades.values(), reverse=True)[:k]
    idcg = sum(g / math.log2(i + 1) for i, g in enumerate(ideal, start=1))
    if idcg == 0:
        return 0.0
    return dcg / idcg


def cohens_kappa(judge_a: list[int], judge_b: list[int]) -> float:
    """Chance-corrected agreement between two judges' graded labels.

    kappa = (p_o - p_e) / (1 - p_e) over the 3x3 confusion matrix. When
    expected agreement is already 1 (both judges constant on the same
    grade) the measure degenerates: returns 1 on perfect agreement,
    0 otherwise.
    """
    if len(judge_a) != len(judge_b):
        raise ValueError(f"judgment lists differ in length: {len(judge_a)} vs {len(judge_b)}")
    if not judge_a:
        raise ValueError("judgment lists are empty")
    for grade in (*judge_a, *judge_b):
        if grade not in VALID_GRADES:
            raise ValueError(f"grade must be one of {VALID_GRADES}, got {grade!r}")
    n = len(judge_a)
    observed = sum(1 for a, b in zip(judge_a, judge_b) if a == b) / n
    expected = sum(
        (judge_a.count(g) / n) * (judge_b.count(g) / n) for g in VALID_GRADES
    )
    if expected == 1.0:
        return 1.0 if observed == 1.0 else 0.0
    return (observed - expected) / (1.0 - expected)


def timed(stage, *args, **kwargs):
    """Run a pipeline stage and return (result, wall-clock seconds)."""
    start = time.perf_counter()
    result = stage(*args, **kwargs)
    return result, time.perf_counter() - start


class JudgmentSet:
    """Graded relevance labels: (query, url) -> judge id -> grade in {0,1,2}."""

    def __init__(self, grades: dict[tuple[str, str], dict[str, int]]):
        for key, per_judge in grades.items():
            for judge, grade in per_judge.items():
                if grade not in VALID_GRADES:
                    raise ValueError(f"grade for {key} by {judge!r} must be 0/1/2, got {grade!r}")
        self.grades = grades

    @classmethod
    def from_csv(cls, path: str | Path) -> "JudgmentSet":
        """Load ``query,url,judge,grade`` rows; bad grades name their line."""
        grades: dict[tuple[str, str], dict[str, int]] = {}
        with open(path, encoding="utf-8", newline="") as handle:
            reader = csv.DictReader(handle)
            required = {"query", "url", "judge", "grade"}
            if reader.fieldnames is None or not required.issubset(reader.fieldnames):
                raise ValueError(f"{path}: header must contain {sorted(required)}")
            for lineno, row in enumerate(reader, start=2):
                try:
                    grade = int(row["grade"])
                except (TypeError, ValueError):
                    raise ValueError(f"{path}:{lineno}: grade {row['grade']!r} is not an integer") from None
                if grade not in VALID_GRADES:
                    raise ValueError(f"{path}:{lineno}: grade must be 0, 1 or 2, got {grade}")
                key = (row["query"], row["url"])
                grades.setdefault(key, {})[row["judge"]] = grade
        return cls(grades)

    def judges(self) -> list[str]:
        found = {judge for per_judge in self.grades.values() for judge in per_judge}
        return sorted(found)

    def query_grades(self, query: str, judge: str) -> dict[str, int]:
        """url -> grade for one (query, judge) pair."""
        return {
            url: per_judge[judge]
            for (q, url), per_judge in self.grades.items()
            if q == query and judge in per_judge
        }

    def paired_grades(
        self, judge_a: str, judge_b: str, query: str | None = None
    ) -> tuple[list[int], list[int]]:
        """Aligned grade lists over every (query, url) both judges scored;
        restricted to one query when given."""
        left, right = [], []
        for key in sorted(self.grades):
            if query is not None and key[0] != query:
                continue
            per_judge = self.grades[key]
            if judge_a in per_judge and judge_b in per_judge:
                left.append(per_judge[judge_a])
                right.append(per_judge[judge_b])
        return left, right

    def queries(self) -> list[str]:
        return sorted({query for (query, _url) in self.grades})


@dataclass
class EvalReport:
    """Metric values for one method across a query set.

    ``values[query][(metric, cutoff)]`` holds P/S/NDCG scores; runtime
    rows use metric "time" with cutoff 0.
    """

    method: str
    values: dict[str, dict[tuple[str, int], float]] = field(default_factory=dict)

    def record(self, query: str, metric: str, cutoff: int, value: float) -> None:
        self.values.setdefault(query, {})[(metric, cutoff)] = value

    def queries(self) -> list[str]:
        return sorted(self.values)

    def macro_average(self, metric: str, cutoff: int) -> float | None:
        """Mean over queries that have the metric; None when none do."""
        found = [
            per_query[(metric, cutoff)]
            for per_query in self.values.values()
            if (metric, cutoff) in per_query
        ]
        if not found:
            return None
        return sum(found) / len(found)

    def metric_keys(self) -> list[tuple[str, int]]:
        keys = {key for per_query in self.values.values() for key in per_query}
        return sorted(keys)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["query", "method", "metric", "cutoff", "value"])
        for query in self.queries():
            for (metric, cutoff), value in sorted(self.values[query].items()):
                writer.writerow([query, self.method, metric, cutoff, f"{value:.12g}"])
        return buf.getvalue()


def improvement_ratios(
    baseline: EvalReport, variants: list[EvalReport]
) -> dict[tuple[str, int], dict[str, float | None]]:
    """Macro-averaged variant/baseline ratio per metric.

    A zero baseline yields None (undefined), never infinity. Variants
    must cover the same query set as the baseline.
    """
    base_queries = set(baseline.queries())
    for variant in variants:
        if set(variant.queries()) != base_queries:
            raise ValueError(
                f"query sets differ between {baseline.method!r} and {variant.method!r}"
            )
    table: dict[tuple[str, int], dict[str, float | None]] = {}
    for key in baseline.metric_keys():
        base_value = baseline.macro_average(*key)
        row: dict[str, float | None] = {}
        for variant in variants:
            variant_value = variant.macro_average(*key)
            if base_value in (None, 0) or variant_value is None:
                row[variant.method] = None
            else:
                row[variant.method] = variant_value / base_value
        table[key] = row
    return table
