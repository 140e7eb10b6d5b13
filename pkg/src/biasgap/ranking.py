"""Per-metric bias rankings, cross-metric comparison, and top-K count stats.

Rows sort by oriented gap descending with ties broken by display string, so
results never depend on label id assignment or shard order. Identity labels
themselves and labels with undefined gaps are excluded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .core import (
    CooccurrenceTable,
    EmptyRanking,
    IdenticalIdentityLabels,
    LabelId,
    MetricKind,
    MismatchedContext,
)
from .metrics import NO_SMOOTHING, SmoothingConfig, gap, smoothed_probs


@dataclass(frozen=True)
class RankFilter:
    """Row admission thresholds applied before ranking; top_k truncates after."""

    min_count_y: int = 0
    min_count_x1y: int = 0
    min_count_x2y: int = 0
    top_k: int | None = None

    def __post_init__(self):
        for name in ("min_count_y", "min_count_x1y", "min_count_x2y"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.top_k is not None and self.top_k < 1:
            raise ValueError("top_k must be >= 1 when given")

    def admits(self, c_y: int, c_x1y: int, c_x2y: int) -> bool:
        return (
            c_y >= self.min_count_y
            and c_x1y >= self.min_count_x1y
            and c_x2y >= self.min_count_x2y
        )


@dataclass(frozen=True)
class RankRow:
    rank: int
    label: str
    label_id: LabelId
    oriented_gap: float
    raw_gap: float
    count_y: int
    count_x1y: int
    count_x2y: int


@dataclass(frozen=True)
class RankingTable:
    """A sorted per-label gap ranking for one metric and identity pair."""

    metric: MetricKind
    x1: str
    x2: str
    x1_id: LabelId
    x2_id: LabelId
    rows: tuple[RankRow, ...]
    filters: RankFilter
    table_digest: str
    alpha: float = 0.0

    def rank_of(self, label: str) -> int | None:
        for row in self.rows:
            if row.label == label:
                return row.rank
        return None

    def top_labels(self, k: int) -> list[str]:
        return [row.label for row in self.rows[: min(k, len(self.rows))]]


def rank_labels(
    metric: MetricKind,
    table: CooccurrenceTable,
    x1: LabelId,
    x2: LabelId,
    rank_filter: RankFilter = RankFilter(),
    smoothing: SmoothingConfig = NO_SMOOTHING,
) -> RankingTable:
    """Rank every label with a defined gap by oriented gap, descending."""
    if x1 == x2:
        raise IdenticalIdentityLabels(
            f"identity labels must differ (got {table.interner.resolve(x1)!r})"
        )
    table.count(x1)  # raises UnknownLabel early
    table.count(x2)
    interner = table.interner
    entries = []
    for y in table.label_ids():
        if y == x1 or y == x2:
            continue
        c_y = table.count(y)
        c1 = table.joint_count(x1, y)
        c2 = table.joint_count(x2, y)
        if not rank_filter.admits(c_y, c1, c2):
            continue
        value = gap(metric, smoothed_probs(table, x1, x2, y, smoothing), y=y, x1=x1, x2=x2)
        if not value.defined:
            continue
        entries.append((value.oriented, value.raw, interner.resolve(y), y, c_y, c1, c2))
    entries.sort(key=lambda e: (-e[0], e[2]))
    if rank_filter.top_k is not None:
        entries = entries[: rank_filter.top_k]
    rows = tuple(
        RankRow(
            rank=i,
            label=name,
            label_id=y,
            oriented_gap=oriented,
            raw_gap=raw,
            count_y=c_y,
            count_x1y=c1,
            count_x2y=c2,
        )
        for i, (oriented, raw, name, y, c_y, c1, c2) in enumerate(entries)
    )
    return RankingTable(
        metric=metric,
        x1=interner.resolve(x1),
        x2=interner.resolve(x2),
        x1_id=x1,
        x2_id=x2,
        rows=rows,
        filters=rank_filter,
        table_digest=table.digest(),
        alpha=smoothing.alpha,
    )


# ---------------------------------------------------------------------------
# Ranking comparison
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScatterPoint:
    label: str
    rank_a: int
    rank_b: int


@dataclass(frozen=True)
class ComparisonStats:
    """Top-K overlap and pairwise order agreement between two rankings."""

    metric_a: MetricKind
    metric_b: MetricKind
    top_k: int
    overlap: int
    concordance: float | None
    scatter: tuple[ScatterPoint, ...]


def compare_rankings(a: RankingTable, b: RankingTable, k: int) -> ComparisonStats:
    """Overlap of the two top-K sets, order concordance of the shared labels,
    and a rank-vs-rank scatter over all labels ranked by both.

    Concordance counts a pair as concordant only on strict order agreement
    and is None when fewer than 2 labels are shared.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if a.table_digest != b.table_digest or (a.x1, a.x2) != (b.x1, b.x2):
        raise MismatchedContext(
            "rankings computed over different tables or identity pairs"
        )
    return compare_rows(
        [(r.label, r.rank) for r in a.rows],
        [(r.label, r.rank) for r in b.rows],
        k,
        metric_a=a.metric,
        metric_b=b.metric,
    )


def compare_rows(
    rows_a: list[tuple[str, int]],
    rows_b: list[tuple[str, int]],
    k: int,
    metric_a: MetricKind | None = None,
    metric_b: MetricKind | None = None,
) -> ComparisonStats:
    """Context-free comparison core over (label, rank) sequences."""
    rank_a = dict(rows_a)
    rank_b = dict(rows_b)
    top_a = {label for label, _ in rows_a[: min(k, len(rows_a))]}
    top_b = {label for label, _ in rows_b[: min(k, len(rows_b))]}
    shared = sorted(top_a & top_b)
    overlap = len(shared)
    concordance: float | None = None
    if overlap >= 2:
        agree = total = 0
        for i, l1 in enumerate(shared):
            for l2 in shared[i + 1 :]:
                total += 1
                da = rank_a[l1] - rank_a[l2]
                db = rank_b[l1] - rank_b[l2]
                if (da < 0 and db < 0) or (da > 0 and db > 0):
                    agree += 1
        concordance = agree / total
    both = sorted(set(rank_a) & set(rank_b), key=lambda l: rank_a[l])
    scatter = tuple(ScatterPoint(l, rank_a[l], rank_b[l]) for l in both)
    return ComparisonStats(
        metric_a=metric_a,
        metric_b=metric_b,
        top_k=k,
        overlap=overlap,
        concordance=concordance,
        scatter=scatter,
    )


# ---------------------------------------------------------------------------
# Top-K count statistics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ColumnStats:
    """Summary of one count column over the top-K rows.

    std is the population standard deviation. log_hist buckets counts into
    decades [10^e, 10^(e+1)); zero counts get a dedicated bin, so the bin
    totals always sum to the number of rows summarized.
    """

    min: int
    max: int
    mean: float
    std: float
    log_hist: dict[int, int]
    zero_count: int


@dataclass(frozen=True)
class CountStats:
    metric: MetricKind | None
    k_requested: int
    k_effective: int
    columns: dict[str, ColumnStats] = field(default_factory=dict)


COUNT_COLUMNS = ("count_y", "count_x1y", "count_x2y")


def _column_stats(values: list[int]) -> ColumnStats:
    n = len(values)
    mean = sum(values) / n
    var = sum((v - mean) ** 2 for v in values) / n
    hist: dict[int, int] = {}
    zero = 0
    for v in values:
        if v == 0:
            zero += 1
        else:
            e = int(math.floor(math.log10(v)))
            hist[e] = hist.get(e, 0) + 1
    return ColumnStats(
        min=min(values),
        max=max(values),
        mean=mean,
        std=math.sqrt(var),
        log_hist=dict(sorted(hist.items())),
        zero_count=zero,
    )


def column_stats_for_rows(
    rows: list[RankRow], k: int, metric: MetricKind | None = None
) -> CountStats:
    """Count statistics over the first min(k, len(rows)) rows."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not rows:
        raise EmptyRanking("ranking has no rows")
    head = rows[: min(k, len(rows))]
    columns = {
        name: _column_stats([getattr(r, name) for r in head])
        for name in COUNT_COLUMNS
    }
    return CountStats(
        metric=metric, k_requested=k, k_effective=len(head), columns=columns
    )


def topk_counts(ranking: RankingTable, k: int, table: CooccurrenceTable | None = None) -> CountStats:
    """Count statistics over the first min(k, rows) rows of a ranking."""
    if not ranking.rows:
        raise EmptyRanking(f"{ranking.metric.value} ranking has no rows")
    return column_stats_for_rows(list(ranking.rows), k, metric=ranking.metric)
