"""HTTP API over served snapshots, consumed by the explorer UI.

Snapshots are immutable; the only mutations are analyst flags, persisted to
a sidecar file next to each snapshot so restarts keep them. All ranking
numbers served here come straight from the snapshot: the API never
recomputes a gap, which keeps it byte-compatible with the CLI exports.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import Response
from pydantic import BaseModel

from .core import METRIC_NAMES, MetricKind
from .ranking import RankRow, RankingTable
from .snapshot import FlagState, Snapshot, load_snapshot, rows_to_csv_bytes

API_PREFIX = "/api/v1"


def sidecar_path(snapshot_path: Path) -> Path:
    return snapshot_path.with_name(snapshot_path.stem + ".flags.json")


@dataclass
class RunContext:
    snapshot: Snapshot
    path: Path | None
    flags: dict[str, FlagState] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)

    @classmethod
    def load(cls, path: Path) -> "RunContext":
        snapshot = load_snapshot(path)
        flags = dict(snapshot.flags)
        side = sidecar_path(path)
        if side.exists():
            for label, st in json.loads(side.read_text(encoding="utf-8")).items():
                flags[label] = FlagState(flagged=st["flagged"], note=st.get("note", ""))
        return cls(snapshot=snapshot, path=path, flags=flags)

    def persist_flags(self) -> None:
        if self.path is None:
            return
        payload = {
            label: {"flagged": f.flagged, "note": f.note}
            for label, f in sorted(self.flags.items())
        }
        sidecar_path(self.path).write_text(
            json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8"
        )

    def label_universe(self) -> set[str]:
        labels: set[str] = set()
        for ranking in self.snapshot.rankings.values():
            labels.update(row.label for row in ranking.rows)
        return labels


class FlagBody(BaseModel):
    flagged: bool
    note: str = ""


@dataclass(frozen=True)
class RowFilter:
    """Ranking filter semantics shared by /rankings and /download:
    RankFilter count thresholds plus an oriented-gap range and text search."""

    min_gap: float | None = None
    max_gap: float | None = None
    min_count_y: int = 0
    min_count_x1y: int = 0
    min_count_x2y: int = 0
    search: str | None = None

    def admits(self, row: RankRow) -> bool:
        if self.min_gap is not None and row.oriented_gap < self.min_gap:
            return False
        if self.max_gap is not None and row.oriented_gap > self.max_gap:
            return False
        if row.count_y < self.min_count_y:
            return False
        if row.count_x1y < self.min_count_x1y:
            return False
        if row.count_x2y < self.min_count_x2y:
            return False
        if self.search and self.search.lower() not in row.label.lower():
            return False
        return True


def _bad_request(detail: str):
    raise HTTPException(status_code=400, detail=detail)


def _parse_int(params, name: str, default: int, minimum: int | None = None) -> int:
    raw = params.get(name)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        _bad_request(f"{name} must be an integer, got {raw!r}")
    if minimum is not None and value < minimum:
        _bad_request(f"{name} must be >= {minimum}, got {value}")
    return value


def _parse_float(params, name: str) -> float | None:
    raw = params.get(name)
    if raw is None:
        return None
    try:
        return float(raw)
    except ValueError:
        _bad_request(f"{name} must be a number, got {raw!r}")


def _parse_filter(params) -> RowFilter:
    f = RowFilter(
        min_gap=_parse_float(params, "min_gap"),
        max_gap=_parse_float(params, "max_gap"),
        min_count_y=_parse_int(params, "min_count_y", 0, minimum=0),
        min_count_x1y=_parse_int(params, "min_count_x1y", 0, minimum=0),
        min_count_x2y=_parse_int(params, "min_count_x2y", 0, minimum=0),
        search=params.get("search"),
    )
    if f.min_gap is not None and f.max_gap is not None and f.min_gap > f.max_gap:
        _bad_request("min_gap must be <= max_gap")
    return f


def create_app(
    snapshot_paths: list[Path] | None = None,
    snapshots: list[Snapshot] | None = None,
    ui_dir: Path | None = None,
) -> FastAPI:
    """Build the API app. Snapshots given as paths get flag persistence;
    in-memory snapshots (tests) keep flags for the process lifetime only."""
    runs: dict[str, RunContext] = {}
    for path in snapshot_paths or []:
        ctx = RunContext.load(Path(path))
        if ctx.snapshot.run_id in runs:
            raise ValueError(f"duplicate run id {ctx.snapshot.run_id!r}")
        runs[ctx.snapshot.run_id] = ctx
    for snap in snapshots or []:
        if snap.run_id in runs:
            raise ValueError(f"duplicate run id {snap.run_id!r}")
        runs[snap.run_id] = RunContext(snapshot=snap, path=None, flags=dict(snap.flags))

    app = FastAPI(title="biasgap explorer API")

    def get_run(run_id: str) -> RunContext:
        ctx = runs.get(run_id)
        if ctx is None:
            raise HTTPException(status_code=404, detail=f"unknown run {run_id!r}")
        return ctx

    def get_ranking(ctx: RunContext, params) -> RankingTable:
        metric_name = params.get("metric")
        if metric_name is None:
            _bad_request(f"metric query parameter required; valid: {', '.join(METRIC_NAMES)}")
        if metric_name not in METRIC_NAMES:
            _bad_request(
                f"unknown metric {metric_name!r}; valid: {', '.join(METRIC_NAMES)}"
            )
        metric = MetricKind(metric_name)
        ranking = ctx.snapshot.rankings.get(metric)
        if ranking is None:
            raise HTTPException(
                status_code=404,
                detail=f"metric {metric_name!r} not present in run {ctx.snapshot.run_id!r}",
            )
        for side, name in (("x1", ranking.x1), ("x2", ranking.x2)):
            requested = params.get(side)
            if requested is not None and requested != name:
                raise HTTPException(
                    status_code=404,
                    detail=f"run serves {side}={name!r}, not {requested!r}",
                )
        return ranking

    @app.get(API_PREFIX + "/runs")
    def list_runs():
        return {
            "runs": [
                {
                    "id": ctx.snapshot.run_id,
                    "x1": ctx.snapshot.x1,
                    "x2": ctx.snapshot.x2,
                    "n": ctx.snapshot.table_n,
                    "label_count": ctx.snapshot.table_label_count,
                    "table_digest": ctx.snapshot.table_digest,
                    "alpha": ctx.snapshot.alpha,
                    "top_k": ctx.snapshot.top_k,
                    "metrics": sorted(m.value for m in ctx.snapshot.rankings),
                }
                for ctx in sorted(runs.values(), key=lambda c: c.snapshot.run_id)
            ]
        }

    @app.get(API_PREFIX + "/runs/{run_id}/rankings")
    def get_rankings(run_id: str, request: Request):
        ctx = get_run(run_id)
        params = request.query_params
        ranking = get_ranking(ctx, params)
        row_filter = _parse_filter(params)
        page = _parse_int(params, "page", 0, minimum=0)
        page_size = _parse_int(params, "page_size", 50, minimum=1)
        rows = [r for r in ranking.rows if row_filter.admits(r)]
        start = page * page_size
        page_rows = rows[start : start + page_size]
        return {
            "run_id": run_id,
            "metric": ranking.metric.value,
            "x1": ranking.x1,
            "x2": ranking.x2,
            "total": len(rows),
            "page": page,
            "page_size": page_size,
            "rows": [
                {
                    "rank": r.rank,
                    "label": r.label,
                    "oriented_gap": r.oriented_gap,
                    "raw_gap": r.raw_gap,
                    "count_y": r.count_y,
                    "count_x1y": r.count_x1y,
                    "count_x2y": r.count_x2y,
                    "flagged": ctx.flags.get(r.label, FlagState(False)).flagged,
                }
                for r in page_rows
            ],
        }

    @app.get(API_PREFIX + "/runs/{run_id}/distribution")
    def get_distribution(run_id: str, request: Request):
        ctx = get_run(run_id)
        params = request.query_params
        ranking = get_ranking(ctx, params)
        bins = _parse_int(params, "bins", 20, minimum=1)
        gaps = [r.oriented_gap for r in ranking.rows]
        if not gaps:
            return {"bin_edges": [], "counts": [], "total": 0}
        lo, hi = min(gaps), max(gaps)
        width = (hi - lo) / bins
        counts = [0] * bins
        for g in gaps:
            idx = 0 if width == 0.0 else min(int((g - lo) / width), bins - 1)
            counts[idx] += 1
        edges = [lo + i * width for i in range(bins)] + [hi]
        return {"bin_edges": edges, "counts": counts, "total": len(gaps)}

    @app.get(API_PREFIX + "/runs/{run_id}/labels/{label}")
    def get_label(run_id: str, label: str):
        ctx = get_run(run_id)
        per_metric = {}
        counts = None
        for metric in sorted(ctx.snapshot.rankings, key=lambda m: m.value):
            for row in ctx.snapshot.rankings[metric].rows:
                if row.label == label:
                    per_metric[metric.value] = {
                        "rank": row.rank,
                        "oriented_gap": row.oriented_gap,
                        "raw_gap": row.raw_gap,
                    }
                    counts = (row.count_y, row.count_x1y, row.count_x2y)
                    break
        if counts is None:
            raise HTTPException(status_code=404, detail=f"unknown label {label!r}")
        flag = ctx.flags.get(label, FlagState(False))
        return {
            "label": label,
            "count_y": counts[0],
            "count_x1y": counts[1],
            "count_x2y": counts[2],
            "flagged": flag.flagged,
            "note": flag.note,
            "metrics": per_metric,
        }

    @app.put(API_PREFIX + "/runs/{run_id}/flags/{label}")
    def put_flag(run_id: str, label: str, body: FlagBody):
        ctx = get_run(run_id)
        if label not in ctx.label_universe():
            raise HTTPException(status_code=404, detail=f"unknown label {label!r}")
        with ctx.lock:
            ctx.flags[label] = FlagState(flagged=body.flagged, note=body.note)
            ctx.persist_flags()
        return {"label": label, "flagged": body.flagged, "note": body.note}

    @app.get(API_PREFIX + "/runs/{run_id}/download")
    def download(run_id: str, request: Request):
        ctx = get_run(run_id)
        params = request.query_params
        ranking = get_ranking(ctx, params)
        row_filter = _parse_filter(params)
        rows = [r for r in ranking.rows if row_filter.admits(r)]
        payload = rows_to_csv_bytes(rows)
        return Response(
            content=payload,
            media_type="text/csv",
            headers={
                "Content-Disposition": f"attachment; filename=ranks_{ranking.metric.value}.csv"
            },
        )

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
