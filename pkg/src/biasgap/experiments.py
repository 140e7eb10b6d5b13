"""Fake-label movement experiment and synthetic corpus generation.

The movement experiment overlays a synthetic label's counts on top of an
existing table (no record materialization): the injected label gets a
marginal C(y) and joints with the two identity labels, and n grows by C(y)
so the new examples host the label. Existing labels' counts are untouched;
their probabilities shift only through n, which is what adding real
examples would do. The full ranking is recomputed at every sweep point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import (
    CooccurrenceTable,
    InfeasibleCounts,
    InvalidSpec,
    LabelId,
    LabelInterner,
    LabelRecord,
    MetricKind,
)
from .metrics import NO_SMOOTHING, SmoothingConfig
from .ranking import RankFilter, rank_labels


# ---------------------------------------------------------------------------
# Count overlay
# ---------------------------------------------------------------------------


def overlay_injected_label(
    base: CooccurrenceTable,
    name: str,
    c_y: int,
    c_x1y: int,
    c_x2y: int,
    x1: LabelId,
    x2: LabelId,
) -> CooccurrenceTable:
    """Base table plus one synthetic label with the given counts.

    Raises InfeasibleCounts when a joint would exceed min(C(x_i), C(y)).
    """
    if c_y < 0 or c_x1y < 0 or c_x2y < 0:
        raise InfeasibleCounts("injected counts must be non-negative")
    if c_x1y > min(base.count(x1), c_y):
        raise InfeasibleCounts(
            f"C(x1, fake)={c_x1y} exceeds min(C(x1)={base.count(x1)}, C(fake)={c_y})"
        )
    if c_x2y > min(base.count(x2), c_y):
        raise InfeasibleCounts(
            f"C(x2, fake)={c_x2y} exceeds min(C(x2)={base.count(x2)}, C(fake)={c_y})"
        )
    if name in base.interner:
        raise InfeasibleCounts(f"label {name!r} already present in base table")
    interner = base.interner.copy()
    yid = interner.intern(name)
    marginal = [base.count(l) for l in base.label_ids()] + [c_y]
    joint = dict(base.joint_items())
    if c_x1y:
        joint[(min(x1, yid), max(x1, yid))] = c_x1y
    if c_x2y:
        joint[(min(x2, yid), max(x2, yid))] = c_x2y
    return CooccurrenceTable(interner, base.n + c_y, marginal, joint)


# ---------------------------------------------------------------------------
# Movement experiment
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MovementConfig:
    """Sweep of the injected label's marginal count.

    With scale_joints=False the joints stay at their initial values across
    the sweep (the joint ratio is trivially constant); this isolates the
    pure p(y) sensitivity. With scale_joints=True the joints scale
    proportionally to C(y), rounded so the realized ratio stays within one
    integer step of the locked initial ratio.
    """

    base_table: CooccurrenceTable
    x1: LabelId
    x2: LabelId
    injected_name: str
    initial_c_y: int
    initial_c_x1y: int
    initial_c_x2y: int
    sweep: tuple[int, ...]
    metrics: tuple[MetricKind, ...]
    scale_joints: bool = False
    smoothing: SmoothingConfig = NO_SMOOTHING
    rank_filter: RankFilter = RankFilter()

    def __post_init__(self):
        if not self.sweep:
            raise InvalidSpec("sweep must be non-empty")
        if not self.metrics:
            raise InvalidSpec("metrics must be non-empty")
        if self.injected_name in self.base_table.interner:
            raise InvalidSpec(
                f"injected label {self.injected_name!r} already in base table"
            )
        if self.initial_c_y < 1:
            raise InvalidSpec("initial C(y) must be >= 1")
        if self.scale_joints and self.initial_c_x2y < 1:
            raise InvalidSpec("ratio lock needs initial C(x2,y) >= 1")

    @property
    def ratio_lock(self) -> Fraction | None:
        if self.initial_c_x2y == 0:
            return None
        return Fraction(self.initial_c_x1y, self.initial_c_x2y)


@dataclass(frozen=True)
class MovementPoint:
    c_y: int
    c_x1y: int
    c_x2y: int
    rank: int | None
    oriented_gap: float | None


@dataclass(frozen=True)
class MovementTrajectory:
    injected_name: str
    x1: str
    x2: str
    scale_joints: bool
    points: dict[MetricKind, tuple[MovementPoint, ...]] = field(default_factory=dict)


def _sweep_joints(cfg: MovementConfig, c_y: int) -> tuple[int, int]:
    if not cfg.scale_joints:
        return cfg.initial_c_x1y, cfg.initial_c_x2y
    scale = Fraction(c_y, cfg.initial_c_y)
    c2 = int(round(cfg.initial_c_x2y * scale))
    c2 = max(c2, 1) if cfg.initial_c_x2y > 0 else 0
    r = cfg.ratio_lock
    c1 = int(round(r * c2)) if r is not None else 0
    return c1, c2


def movement_run(cfg: MovementConfig) -> MovementTrajectory:
    """Record the injected label's rank at every sweep point for each metric.

    The ranking is fully recomputed on the overlaid table at each point;
    a None rank means the gap was undefined (or filtered) there.
    """
    per_metric: dict[MetricKind, list[MovementPoint]] = {m: [] for m in cfg.metrics}
    for c_y in cfg.sweep:
        c1, c2 = _sweep_joints(cfg, c_y)
        overlaid = overlay_injected_label(
            cfg.base_table, cfg.injected_name, c_y, c1, c2, cfg.x1, cfg.x2
        )
        for metric in cfg.metrics:
            ranking = rank_labels(
                metric, overlaid, cfg.x1, cfg.x2, cfg.rank_filter, cfg.smoothing
            )
            rank = None
            oriented = None
            for row in ranking.rows:
                if row.label == cfg.injected_name:
                    rank = row.rank
                    oriented = row.oriented_gap
                    break
            per_metric[metric].append(MovementPoint(c_y, c1, c2, rank, oriented))
    interner = cfg.base_table.interner
    return MovementTrajectory(
        injected_name=cfg.injected_name,
        x1=interner.resolve(cfg.x1),
        x2=interner.resolve(cfg.x2),
        scale_joints=cfg.scale_joints,
        points={m: tuple(pts) for m, pts in per_metric.items()},
    )


SWEEP_PRESETS = ("small", "medium", "large")


def sweep_preset(name: str, corpus_n: int) -> tuple[int, ...]:
    """Sweep magnitudes mirroring the small/medium/large plot regimes,
    scaled linearly to the corpus size (stated ranges are for n = 100k)."""
    if name == "small":
        base = range(10, 101, 10)
    elif name == "medium":
        base = range(1_000, 10_001, 1_000)
    elif name == "large":
        base = range(50_000, 150_001, 12_500)
    else:
        raise ValueError(f"unknown sweep preset {name!r}; valid: {SWEEP_PRESETS}")
    scale = corpus_n / 100_000
    values = []
    for v in base:
        scaled = max(1, round(v * scale))
        if scaled not in values:
            values.append(scaled)
    return tuple(values)


# ---------------------------------------------------------------------------
# Synthetic corpora
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TargetLabelSpec:
    """One planted label: overall marginal probability and the skew ratio
    p(y|x1) / p(y|x2). The conditional for x2 equals the conditional for
    records carrying neither identity."""

    name: str
    marginal: float
    skew: float

    def __post_init__(self):
        if not 0.0 < self.marginal < 1.0:
            raise InvalidSpec(f"{self.name}: marginal must be in (0,1)")
        if self.skew <= 0.0:
            raise InvalidSpec(f"{self.name}: skew must be positive")


@dataclass(frozen=True)
class SynthSpec:
    n: int
    x1: str
    x2: str
    p_x1: float
    p_x2: float
    labels: tuple[TargetLabelSpec, ...]

    def __post_init__(self):
        if self.n < 1:
            raise InvalidSpec("n must be >= 1")
        if self.x1 == self.x2:
            raise InvalidSpec("identity labels must differ")
        if not (0.0 < self.p_x1 < 1.0 and 0.0 < self.p_x2 < 1.0):
            raise InvalidSpec("identity prevalences must be in (0,1)")
        if self.p_x1 + self.p_x2 > 1.0:
            raise InvalidSpec("identity labels are disjoint; p_x1 + p_x2 must be <= 1")
        names = [l.name for l in self.labels]
        if len(set(names)) != len(names) or self.x1 in names or self.x2 in names:
            raise InvalidSpec("label names must be unique and distinct from identities")
        for label in self.labels:
            base, skewed = self.conditionals(label)
            if not (0.0 < base < 1.0 and 0.0 < skewed < 1.0):
                raise InvalidSpec(
                    f"{label.name}: conditional probabilities leave (0,1)"
                )

    def conditionals(self, label: TargetLabelSpec) -> tuple[float, float]:
        """(p(y|x2) = p(y|neither), p(y|x1)) hitting the requested marginal."""
        q0 = 1.0 - self.p_x1 - self.p_x2
        base = label.marginal / (self.p_x1 * label.skew + self.p_x2 + q0)
        return base, base * label.skew


def synth_corpus(
    spec: SynthSpec, seed: int, interner: LabelInterner
) -> list[LabelRecord]:
    """Deterministically sample records: identities are disjoint, targets are
    independent given the identity group. Labels are interned into `interner`
    (identities first, then targets in spec order)."""
    x1_id = interner.intern(spec.x1)
    x2_id = interner.intern(spec.x2)
    label_ids = np.array([interner.intern(l.name) for l in spec.labels], dtype=np.int64)

    rng = np.random.default_rng(seed)
    u = rng.random(spec.n)
    group = np.where(u < spec.p_x1, 0, np.where(u < spec.p_x1 + spec.p_x2, 1, 2))

    cond = np.empty((3, len(spec.labels)))
    for j, label in enumerate(spec.labels):
        base, skewed = spec.conditionals(label)
        cond[0, j] = skewed
        cond[1, j] = base
        cond[2, j] = base
    mask = rng.random((spec.n, len(spec.labels))) < cond[group]

    width = max(6, len(str(spec.n - 1)))
    identity_for_group = {0: x1_id, 1: x2_id}
    records = []
    for i in range(spec.n):
        labels = set(label_ids[np.flatnonzero(mask[i])].tolist())
        g = int(group[i])
        if g in identity_for_group:
            labels.add(identity_for_group[g])
        records.append(LabelRecord(f"ex{i:0{width}d}", frozenset(labels)))
    return records


# ---------------------------------------------------------------------------
# The SKEWMIX fixture
# ---------------------------------------------------------------------------

SKEWMIX_SEED = 20240607
SKEWMIX_X1 = "group_a"
SKEWMIX_X2 = "group_b"
RARE_PREFIX = "rare_"
COMMON_PREFIX = "common_"


def skewmix_spec() -> SynthSpec:
    """100k examples, disjoint identities at 30% each, 30 rare and 30 common
    target labels, half of each tier skewed 3:1 toward group_a."""
    labels = []
    for i in range(15):
        labels.append(TargetLabelSpec(f"rare_skew_{i:02d}", 0.0005, 3.0))
    for i in range(15):
        labels.append(TargetLabelSpec(f"rare_flat_{i:02d}", 0.0005, 1.0))
    for i in range(15):
        labels.append(TargetLabelSpec(f"common_skew_{i:02d}", 0.05, 3.0))
    for i in range(15):
        labels.append(TargetLabelSpec(f"common_flat_{i:02d}", 0.05, 1.0))
    return SynthSpec(
        n=100_000,
        x1=SKEWMIX_X1,
        x2=SKEWMIX_X2,
        p_x1=0.3,
        p_x2=0.3,
        labels=tuple(labels),
    )


SYNTH_PRESETS = {"skewmix": skewmix_spec}


def is_rare_tier(label: str) -> bool:
    return label.startswith(RARE_PREFIX)


def is_common_tier(label: str) -> bool:
    return label.startswith(COMMON_PREFIX)


def is_skewed(label: str) -> bool:
    return "_skew_" in label
