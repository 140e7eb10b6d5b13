"""Command-line front door.

Exit codes: 0 success, 1 data errors (bad labels, malformed input, ...),
2 usage errors. The BIASGAP_LOG environment variable sets log verbosity
(debug/info/warning/error).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .core import (
    ALL_METRICS,
    BiasGapError,
    METRIC_NAMES,
    LabelInterner,
    MetricKind,
)
from . import ingest
from .experiments import (
    SWEEP_PRESETS,
    SYNTH_PRESETS,
    MovementConfig,
    movement_run,
    sweep_preset,
    synth_corpus,
)
from .metrics import SmoothingConfig
from .orientation import FDConfig, orientation_report, sample_interior_points
from .ranking import RankFilter, column_stats_for_rows, compare_rows, rank_labels
from .snapshot import (
    _stats_to_obj,
    build_snapshot,
    movement_to_csv_bytes,
    ranking_to_csv_bytes,
    read_ranking_csv,
    save_snapshot,
    scatter_to_csv_bytes,
)

log = logging.getLogger("biasgap")


def _setup_logging() -> None:
    level = os.environ.get("BIASGAP_LOG", "warning").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
    )


def _metric_list(value: str) -> tuple[MetricKind, ...]:
    if value == "all":
        return ALL_METRICS
    metrics = []
    for name in value.split(","):
        name = name.strip()
        if name not in METRIC_NAMES:
            raise argparse.ArgumentTypeError(
                f"unknown metric {name!r}; valid: {', '.join(METRIC_NAMES)}, all"
            )
        metrics.append(MetricKind(name))
    return tuple(metrics)


def _open_input(path: str):
    if path == "-":
        return sys.stdin.buffer
    return open(path, "rb")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biasgap",
        description="Per-label association-gap bias auditing over prediction corpora.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="count a corpus into a co-occurrence table")
    p.add_argument("input", help="corpus file, or - for stdin")
    p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    p.add_argument(
        "--identity",
        help="comma-separated identity labels; joint storage is restricted to "
        "pairs touching them (the default behavior)",
    )
    p.add_argument(
        "--all-pairs",
        action="store_true",
        help="store the full joint pair matrix (quadratic; opt-in)",
    )
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--out", required=True)

    p = sub.add_parser("rank", help="rank labels by association gap")
    p.add_argument("--table", required=True)
    p.add_argument("--metric", choices=METRIC_NAMES, required=True)
    p.add_argument("--x1", required=True)
    p.add_argument("--x2", required=True)
    p.add_argument("--min-count-y", type=int, default=0)
    p.add_argument("--min-count-x1y", type=int, default=0)
    p.add_argument("--min-count-x2y", type=int, default=0)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--top", type=int, default=None)
    p.add_argument("--out", required=True)

    p = sub.add_parser("compare", help="compare two exported rankings")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--k", type=int, default=100)
    p.add_argument("--scatter", help="write label rank-vs-rank scatter CSV here")
    p.add_argument("--out", help="write stats JSON here (default: stdout)")

    p = sub.add_parser("topk-stats", help="count statistics over a ranking's top K")
    p.add_argument("--ranks", required=True)
    p.add_argument("--k", type=int, default=100)
    p.add_argument("--json", action="store_true", help="emit JSON (the only format)")
    p.add_argument("--out", help="write JSON here (default: stdout)")

    p = sub.add_parser("orient", help="validate analytic partials against FD")
    p.add_argument("--metric", type=_metric_list, default=ALL_METRICS)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--h-rel", type=float, default=1e-6)
    p.add_argument("--out", help="write report JSON here (default: stdout)")

    p = sub.add_parser("movement", help="fake-label count sweep experiment")
    p.add_argument("--table", required=True)
    p.add_argument("--x1", required=True)
    p.add_argument("--x2", required=True)
    p.add_argument("--metrics", type=_metric_list, default=ALL_METRICS)
    p.add_argument(
        "--sweep",
        required=True,
        help=f"one of {'/'.join(SWEEP_PRESETS)} or comma-separated C(y) values",
    )
    p.add_argument("--inject", default="__injected__")
    p.add_argument("--init-cy", type=int, default=None)
    p.add_argument("--init-cx1y", type=int, default=None)
    p.add_argument("--init-cx2y", type=int, default=None)
    p.add_argument(
        "--scale-joints",
        action="store_true",
        help="scale joints with C(y), keeping their ratio locked "
        "(default: joints held fixed)",
    )
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("synth", help="generate a synthetic corpus")
    p.add_argument("--preset", choices=sorted(SYNTH_PRESETS), required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("snapshot", help="bundle rankings/stats/comparisons as JSON")
    p.add_argument("--table", required=True)
    p.add_argument("--x1", required=True)
    p.add_argument("--x2", required=True)
    p.add_argument("--metrics", type=_metric_list, default=ALL_METRICS)
    p.add_argument("--k", type=int, default=100)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--min-count-y", type=int, default=0)
    p.add_argument("--run-id", default=None)
    p.add_argument("--out", required=True)

    p = sub.add_parser("serve", help="serve snapshots over the explorer HTTP API")
    p.add_argument(
        "--snapshot",
        action="append",
        required=True,
        help="snapshot JSON path; repeat to serve multiple runs",
    )
    p.add_argument("--listen", default="127.0.0.1:8933", help="host:port")
    p.add_argument("--ui", help="static frontend directory to mount at /")

    return parser


# ---------------------------------------------------------------------------
# Subcommand implementations
# ---------------------------------------------------------------------------


def _cmd_count(args) -> int:
    interner = LabelInterner()
    restrict = None
    if args.identity:
        names = [s.strip() for s in args.identity.split(",") if s.strip()]
        restrict = frozenset(interner.intern(name) for name in names)
    elif not args.all_pairs:
        raise BiasGapError(
            "pass --identity <label>[,<label>...] or opt into --all-pairs"
        )
    config = ingest.IngestConfig(
        format="jsonl" if args.format == "jsonl" else "csv-long",
        shard_count=args.shards,
        restrict_pairs_to=restrict,
    )
    stream = _open_input(args.input)
    try:
        records = ingest.parse_records(stream, config, interner)
        table = ingest.count(records, interner, config)
    finally:
        if stream is not sys.stdin.buffer:
            stream.close()
    ingest.save_table(table, args.out)
    log.info("counted %d examples, %d labels -> %s", table.n, table.label_count, args.out)
    return 0


def _cmd_rank(args) -> int:
    table = ingest.load_table(args.table)
    x1 = table.interner.get(args.x1)
    x2 = table.interner.get(args.x2)
    ranking = rank_labels(
        MetricKind(args.metric),
        table,
        x1,
        x2,
        RankFilter(
            min_count_y=args.min_count_y,
            min_count_x1y=args.min_count_x1y,
            min_count_x2y=args.min_count_x2y,
            top_k=args.top,
        ),
        SmoothingConfig(alpha=args.alpha),
    )
    Path(args.out).write_bytes(ranking_to_csv_bytes(ranking))
    return 0


def _cmd_compare(args) -> int:
    with open(args.a, encoding="utf-8") as fh:
        rows_a = read_ranking_csv(fh)
    with open(args.b, encoding="utf-8") as fh:
        rows_b = read_ranking_csv(fh)
    stats = compare_rows(
        [(r.label, r.rank) for r in rows_a],
        [(r.label, r.rank) for r in rows_b],
        args.k,
    )
    if args.scatter:
        Path(args.scatter).write_bytes(scatter_to_csv_bytes(stats))
    payload = json.dumps(
        {
            "top_k": stats.top_k,
            "overlap": stats.overlap,
            "concordance": stats.concordance,
            "scatter_points": len(stats.scatter),
        },
        sort_keys=True,
        indent=2,
    )
    if args.out:
        Path(args.out).write_text(payload + "\n", encoding="utf-8")
    else:
        print(payload)
    return 0


def _cmd_topk_stats(args) -> int:
    with open(args.ranks, encoding="utf-8") as fh:
        rows = read_ranking_csv(fh)
    stats = column_stats_for_rows(rows, args.k)
    payload = json.dumps(_stats_to_obj(stats), sort_keys=True, indent=2)
    if args.out:
        Path(args.out).write_text(payload + "\n", encoding="utf-8")
    else:
        print(payload)
    return 0


def _cmd_orient(args) -> int:
    points = sample_interior_points(args.samples, args.seed)
    report = orientation_report(
        args.metric, points, args.tol, FDConfig(h_rel=args.h_rel)
    )
    payload = json.dumps(report.to_json(), sort_keys=True, indent=2)
    if args.out:
        Path(args.out).write_text(payload + "\n", encoding="utf-8")
    else:
        print(payload)
    return 0 if report.passed else 1


def _cmd_movement(args) -> int:
    table = ingest.load_table(args.table)
    x1 = table.interner.get(args.x1)
    x2 = table.interner.get(args.x2)
    if args.sweep in SWEEP_PRESETS:
        sweep = sweep_preset(args.sweep, table.n)
    else:
        try:
            sweep = tuple(int(v) for v in args.sweep.split(","))
        except ValueError:
            raise BiasGapError(
                f"--sweep must be one of {'/'.join(SWEEP_PRESETS)} or comma-separated integers"
            )
    init_cy = args.init_cy if args.init_cy is not None else sweep[0]
    init_c1 = args.init_cx1y if args.init_cx1y is not None else max(init_cy // 3, 1)
    init_c2 = args.init_cx2y if args.init_cx2y is not None else max(init_cy // 6, 1)
    cfg = MovementConfig(
        base_table=table,
        x1=x1,
        x2=x2,
        injected_name=args.inject,
        initial_c_y=init_cy,
        initial_c_x1y=init_c1,
        initial_c_x2y=init_c2,
        sweep=sweep,
        metrics=args.metrics,
        scale_joints=args.scale_joints,
        smoothing=SmoothingConfig(alpha=args.alpha),
    )
    trajectory = movement_run(cfg)
    Path(args.out).write_bytes(movement_to_csv_bytes(trajectory))
    return 0


def _cmd_synth(args) -> int:
    spec = SYNTH_PRESETS[args.preset]()
    interner = LabelInterner()
    records = synth_corpus(spec, args.seed, interner)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        ingest.write_jsonl(records, interner, fh)
    log.info("wrote %d records to %s", len(records), args.out)
    return 0


def _cmd_snapshot(args) -> int:
    table = ingest.load_table(args.table)
    x1 = table.interner.get(args.x1)
    x2 = table.interner.get(args.x2)
    run_id = args.run_id or Path(args.out).stem
    snap = build_snapshot(
        table,
        x1,
        x2,
        metrics=args.metrics,
        top_k=args.k,
        smoothing=SmoothingConfig(alpha=args.alpha),
        run_id=run_id,
        rank_filter=RankFilter(min_count_y=args.min_count_y),
    )
    save_snapshot(snap, args.out)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    host, _, port = args.listen.rpartition(":")
    if not host or not port.isdigit():
        raise BiasGapError(f"--listen must be host:port, got {args.listen!r}")
    app = create_app(
        snapshot_paths=[Path(p) for p in args.snapshot],
        ui_dir=Path(args.ui) if args.ui else None,
    )
    uvicorn.run(app, host=host, port=int(port), log_level="info")
    return 0


_COMMANDS = {
    "count": _cmd_count,
    "rank": _cmd_rank,
    "compare": _cmd_compare,
    "topk-stats": _cmd_topk_stats,
    "orient": _cmd_orient,
    "movement": _cmd_movement,
    "synth": _cmd_synth,
    "snapshot": _cmd_snapshot,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except BiasGapError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: IoError: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
