"""biasgap: per-label association-gap bias auditing without ground truth."""

from .core import (
    ALL_METRICS,
    BiasGapError,
    CooccurrenceTable,
    DegenerateVector,
    DomainError,
    EmptyRanking,
    EmptyTable,
    GapValue,
    IdenticalIdentityLabels,
    InfeasibleCounts,
    InvalidSpec,
    LabelId,
    LabelInterner,
    LabelRecord,
    MalformedLine,
    METRIC_NAMES,
    MetricKind,
    MismatchedContext,
    ProbPoint,
    UndefinedGapError,
    UnknownLabel,
    empty_table,
    merge,
)
from .ingest import IngestConfig, count, load_table, parse_records, save_table
from .metrics import (
    NO_SMOOTHING,
    SmoothingConfig,
    association,
    gap,
    gap_reduced,
    one_vs_all_gap,
    phi_coefficient,
    smoothed_probs,
    table_gap,
    tau_b_bruteforce,
    tau_b_gap,
)
from .orientation import (
    FDConfig,
    OrientationVector,
    fd_partials,
    orientation_report,
    partials,
    sample_interior_points,
)
from .ranking import (
    ComparisonStats,
    CountStats,
    RankFilter,
    RankingTable,
    RankRow,
    compare_rankings,
    rank_labels,
    topk_counts,
)
from .experiments import (
    MovementConfig,
    MovementTrajectory,
    SynthSpec,
    TargetLabelSpec,
    movement_run,
    overlay_injected_label,
    skewmix_spec,
    sweep_preset,
    synth_corpus,
)
from .snapshot import (
    Snapshot,
    build_snapshot,
    export_report,
    load_snapshot,
    ranking_to_csv_bytes,
    save_snapshot,
    snapshot_from_json,
    snapshot_to_json,
)

__version__ = "0.1.0"
