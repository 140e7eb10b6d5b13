"""Analysis snapshot: the serializable bundle consumed by exports and the
explorer API. One snapshot = one table digest + one identity pair, with
per-metric rankings, count stats, a cross-metric comparison matrix,
optional movement trajectories, and analyst flags.

All exports are deterministic: identical snapshots produce identical bytes.
Floats are written in shortest round-trip form (re-parsing reproduces the
exact double).
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Sequence

from .core import CooccurrenceTable, LabelId, MetricKind
from .experiments import MovementPoint, MovementTrajectory
from .metrics import NO_SMOOTHING, SmoothingConfig
from .ranking import (
    ColumnStats,
    ComparisonStats,
    CountStats,
    RankFilter,
    RankRow,
    RankingTable,
    ScatterPoint,
    compare_rankings,
    rank_labels,
    topk_counts,
)

SCHEMA_VERSION = 1

RANK_CSV_HEADER = ("rank", "label", "oriented_gap", "raw_gap", "count_y", "count_x1y", "count_x2y")


@dataclass(frozen=True)
class FlagState:
    flagged: bool
    note: str = ""


@dataclass(frozen=True)
class Snapshot:
    run_id: str
    table_n: int
    table_label_count: int
    table_digest: str
    x1: str
    x2: str
    alpha: float
    top_k: int
    rankings: dict[MetricKind, RankingTable]
    count_stats: dict[MetricKind, CountStats]
    comparisons: tuple[ComparisonStats, ...]
    movement: MovementTrajectory | None = None
    flags: dict[str, FlagState] = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION


def build_snapshot(
    table: CooccurrenceTable,
    x1: LabelId,
    x2: LabelId,
    metrics: Sequence[MetricKind],
    top_k: int = 100,
    smoothing: SmoothingConfig = NO_SMOOTHING,
    run_id: str = "run",
    rank_filter: RankFilter = RankFilter(),
    movement: MovementTrajectory | None = None,
) -> Snapshot:
    """Compute rankings, top-K stats and the comparison matrix in one pass."""
    rankings: dict[MetricKind, RankingTable] = {}
    stats: dict[MetricKind, CountStats] = {}
    for metric in metrics:
        ranking = rank_labels(metric, table, x1, x2, rank_filter, smoothing)
        rankings[metric] = ranking
        if ranking.rows:
            stats[metric] = topk_counts(ranking, top_k)
    ordered = sorted(rankings, key=lambda m: m.value)
    comparisons = tuple(
        compare_rankings(rankings[a], rankings[b], top_k)
        for i, a in enumerate(ordered)
        for b in ordered[i + 1 :]
    )
    return Snapshot(
        run_id=run_id,
        table_n=table.n,
        table_label_count=table.label_count,
        table_digest=table.digest(),
        x1=table.interner.resolve(x1),
        x2=table.interner.resolve(x2),
        alpha=smoothing.alpha,
        top_k=top_k,
        rankings=rankings,
        count_stats=stats,
        comparisons=comparisons,
        movement=movement,
    )


# ---------------------------------------------------------------------------
# JSON round trip
# ---------------------------------------------------------------------------


def _ranking_to_obj(r: RankingTable) -> dict:
    return {
        "metric": r.metric.value,
        "x1": r.x1,
        "x2": r.x2,
        "x1_id": r.x1_id,
        "x2_id": r.x2_id,
        "alpha": r.alpha,
        "table_digest": r.table_digest,
        "filters": {
            "min_count_y": r.filters.min_count_y,
            "min_count_x1y": r.filters.min_count_x1y,
            "min_count_x2y": r.filters.min_count_x2y,
            "top_k": r.filters.top_k,
        },
        "rows": [
            [row.rank, row.label, row.label_id, row.oriented_gap, row.raw_gap,
             row.count_y, row.count_x1y, row.count_x2y]
            for row in r.rows
        ],
    }


def _ranking_from_obj(obj: dict) -> RankingTable:
    rows = tuple(
        RankRow(rank=r[0], label=r[1], label_id=r[2], oriented_gap=r[3],
                raw_gap=r[4], count_y=r[5], count_x1y=r[6], count_x2y=r[7])
        for r in obj["rows"]
    )
    f = obj["filters"]
    return RankingTable(
        metric=MetricKind(obj["metric"]),
        x1=obj["x1"],
        x2=obj["x2"],
        x1_id=obj["x1_id"],
        x2_id=obj["x2_id"],
        rows=rows,
        filters=RankFilter(
            min_count_y=f["min_count_y"],
            min_count_x1y=f["min_count_x1y"],
            min_count_x2y=f["min_count_x2y"],
            top_k=f["top_k"],
        ),
        table_digest=obj["table_digest"],
        alpha=obj["alpha"],
    )


def _stats_to_obj(s: CountStats) -> dict:
    return {
        "metric": s.metric.value if s.metric else None,
        "k_requested": s.k_requested,
        "k_effective": s.k_effective,
        "columns": {
            name: {
                "min": c.min,
                "max": c.max,
                "mean": c.mean,
                "std": c.std,
                "log_hist": {str(e): n for e, n in c.log_hist.items()},
                "zero_count": c.zero_count,
            }
            for name, c in s.columns.items()
        },
    }


def _stats_from_obj(obj: dict) -> CountStats:
    return CountStats(
        metric=MetricKind(obj["metric"]) if obj["metric"] else None,
        k_requested=obj["k_requested"],
        k_effective=obj["k_effective"],
        columns={
            name: ColumnStats(
                min=c["min"],
                max=c["max"],
                mean=c["mean"],
                std=c["std"],
                log_hist={int(e): n for e, n in c["log_hist"].items()},
                zero_count=c["zero_count"],
            )
            for name, c in obj["columns"].items()
        },
    )


def _comparison_to_obj(c: ComparisonStats) -> dict:
    return {
        "metric_a": c.metric_a.value if c.metric_a else None,
        "metric_b": c.metric_b.value if c.metric_b else None,
        "top_k": c.top_k,
        "overlap": c.overlap,
        "concordance": c.concordance,
        "scatter": [[p.label, p.rank_a, p.rank_b] for p in c.scatter],
    }


def _comparison_from_obj(obj: dict) -> ComparisonStats:
    return ComparisonStats(
        metric_a=MetricKind(obj["metric_a"]) if obj["metric_a"] else None,
        metric_b=MetricKind(obj["metric_b"]) if obj["metric_b"] else None,
        top_k=obj["top_k"],
        overlap=obj["overlap"],
        concordance=obj["concordance"],
        scatter=tuple(ScatterPoint(*p) for p in obj["scatter"]),
    )


def _movement_to_obj(t: MovementTrajectory | None) -> dict | None:
    if t is None:
        return None
    return {
        "injected_name": t.injected_name,
        "x1": t.x1,
        "x2": t.x2,
        "scale_joints": t.scale_joints,
        "points": {
            m.value: [[p.c_y, p.c_x1y, p.c_x2y, p.rank, p.oriented_gap] for p in pts]
            for m, pts in t.points.items()
        },
    }


def _movement_from_obj(obj: dict | None) -> MovementTrajectory | None:
    if obj is None:
        return None
    return MovementTrajectory(
        injected_name=obj["injected_name"],
        x1=obj["x1"],
        x2=obj["x2"],
        scale_joints=obj["scale_joints"],
        points={
            MetricKind(m): tuple(MovementPoint(*p) for p in pts)
            for m, pts in obj["points"].items()
        },
    )


def snapshot_to_obj(s: Snapshot) -> dict:
    return {
        "schema_version": s.schema_version,
        "run_id": s.run_id,
        "table": {
            "n": s.table_n,
            "label_count": s.table_label_count,
            "digest": s.table_digest,
        },
        "identity": {"x1": s.x1, "x2": s.x2},
        "alpha": s.alpha,
        "top_k": s.top_k,
        "rankings": {m.value: _ranking_to_obj(r) for m, r in s.rankings.items()},
        "count_stats": {m.value: _stats_to_obj(c) for m, c in s.count_stats.items()},
        "comparisons": [_comparison_to_obj(c) for c in s.comparisons],
        "movement": _movement_to_obj(s.movement),
        "flags": {
            label: {"flagged": f.flagged, "note": f.note}
            for label, f in s.flags.items()
        },
    }


def snapshot_from_obj(obj: dict) -> Snapshot:
    return Snapshot(
        schema_version=obj["schema_version"],
        run_id=obj["run_id"],
        table_n=obj["table"]["n"],
        table_label_count=obj["table"]["label_count"],
        table_digest=obj["table"]["digest"],
        x1=obj["identity"]["x1"],
        x2=obj["identity"]["x2"],
        alpha=obj["alpha"],
        top_k=obj["top_k"],
        rankings={
            MetricKind(m): _ranking_from_obj(r) for m, r in obj["rankings"].items()
        },
        count_stats={
            MetricKind(m): _stats_from_obj(c) for m, c in obj["count_stats"].items()
        },
        comparisons=tuple(_comparison_from_obj(c) for c in obj["comparisons"]),
        movement=_movement_from_obj(obj.get("movement")),
        flags={
            label: FlagState(flagged=f["flagged"], note=f["note"])
            for label, f in obj.get("flags", {}).items()
        },
    )


def snapshot_to_json(s: Snapshot) -> str:
    return json.dumps(snapshot_to_obj(s), sort_keys=True, indent=2) + "\n"


def snapshot_from_json(text: str) -> Snapshot:
    return snapshot_from_obj(json.loads(text))


def save_snapshot(s: Snapshot, path) -> None:
    Path(path).write_text(snapshot_to_json(s), encoding="utf-8")


def load_snapshot(path) -> Snapshot:
    return snapshot_from_json(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# CSV exports
# ---------------------------------------------------------------------------


def _fmt(value) -> str:
    """Shortest round-trip decimal for floats, plain text otherwise."""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv_bytes(rows: Iterable[RankRow]) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RANK_CSV_HEADER)
    for row in rows:
        writer.writerow(
            [
                row.rank,
                row.label,
                _fmt(row.oriented_gap),
                _fmt(row.raw_gap),
                row.count_y,
                row.count_x1y,
                row.count_x2y,
            ]
        )
    return buf.getvalue().encode("utf-8")


def ranking_to_csv_bytes(ranking: RankingTable) -> bytes:
    return rows_to_csv_bytes(ranking.rows)


def read_ranking_csv(stream: IO[str]) -> list[RankRow]:
    """Parse a ranks CSV back into rows (label ids are not recoverable)."""
    reader = csv.reader(stream)
    header = next(reader)
    if tuple(header) != RANK_CSV_HEADER:
        raise ValueError(f"unexpected ranks CSV header: {header}")
    rows = []
    for rec in reader:
        rows.append(
            RankRow(
                rank=int(rec[0]),
                label=rec[1],
                label_id=-1,
                oriented_gap=float(rec[2]),
                raw_gap=float(rec[3]),
                count_y=int(rec[4]),
                count_x1y=int(rec[5]),
                count_x2y=int(rec[6]),
            )
        )
    return rows


def scatter_to_csv_bytes(stats: ComparisonStats) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["label", "rank_a", "rank_b"])
    for p in stats.scatter:
        writer.writerow([p.label, p.rank_a, p.rank_b])
    return buf.getvalue().encode("utf-8")


def movement_to_csv_bytes(t: MovementTrajectory) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["metric", "c_y", "c_x1y", "c_x2y", "rank", "oriented_gap"])
    for metric in sorted(t.points, key=lambda m: m.value):
        for p in t.points[metric]:
            writer.writerow(
                [
                    metric.value,
                    p.c_y,
                    p.c_x1y,
                    p.c_x2y,
                    "" if p.rank is None else p.rank,
                    "" if p.oriented_gap is None else _fmt(p.oriented_gap),
                ]
            )
    return buf.getvalue().encode("utf-8")


def export_report(snapshot: Snapshot, fmt: str, out_dir) -> list[Path]:
    """Write a snapshot as `json` (single file) or `csv-bundle` (one ranks
    CSV per metric plus comparison, scatter and stats files). Returns the
    written paths; identical snapshots yield identical bytes."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    if fmt == "json":
        path = out / f"{snapshot.run_id}.json"
        path.write_text(snapshot_to_json(snapshot), encoding="utf-8")
        written.append(path)
        return written
    if fmt != "csv-bundle":
        raise ValueError(f"unknown export format {fmt!r}; valid: json, csv-bundle")
    for metric in sorted(snapshot.rankings, key=lambda m: m.value):
        path = out / f"ranks_{metric.value}.csv"
        path.write_bytes(ranking_to_csv_bytes(snapshot.rankings[metric]))
        written.append(path)
    comp_path = out / "comparisons.csv"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["metric_a", "metric_b", "top_k", "overlap", "concordance"])
    for c in snapshot.comparisons:
        writer.writerow(
            [
                c.metric_a.value,
                c.metric_b.value,
                c.top_k,
                c.overlap,
                "" if c.concordance is None else _fmt(c.concordance),
            ]
        )
        scatter_path = out / f"scatter_{c.metric_a.value}_vs_{c.metric_b.value}.csv"
        scatter_path.write_bytes(scatter_to_csv_bytes(c))
        written.append(scatter_path)
    comp_path.write_bytes(buf.getvalue().encode("utf-8"))
    written.append(comp_path)
    stats_path = out / "topk_stats.json"
    stats_path.write_text(
        json.dumps(
            {m.value: _stats_to_obj(s) for m, s in snapshot.count_stats.items()},
            sort_keys=True,
            indent=2,
        )
        + "\n",
        encoding="utf-8",
    )
    written.append(stats_path)
    if snapshot.movement is not None:
        mv_path = out / "movement.csv"
        mv_path.write_bytes(movement_to_csv_bytes(snapshot.movement))
        written.append(mv_path)
    if snapshot.flags:
        flags_path = out / "flags.json"
        flags_path.write_text(
            json.dumps(
                {l: {"flagged": f.flagged, "note": f.note} for l, f in snapshot.flags.items()},
                sort_keys=True,
                indent=2,
            )
            + "\n",
            encoding="utf-8",
        )
        written.append(flags_path)
    return written
