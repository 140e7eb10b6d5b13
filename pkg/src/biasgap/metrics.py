"""The ten association gaps, their reduced forms, and the one-vs-all variant.

Every gap is antisymmetric by construction: it is a difference of the same
single-pair association evaluated at (x1, y) and (x2, y). Natural logarithms
throughout.

Sign convention: both normalized-PMI variants divide by a negative log, so
their raw gap points the "wrong" way; GapValue.oriented multiplies by the
metric's sign factor so positive always means skewed toward x1.

Zero joints: with alpha = 0 the log-based metrics (LLR, PMI, nPMI_y,
nPMI_xy, PMI^2) are undefined rather than infinite; DP, SDC, JI, tau_b and
t-test remain defined. Additive smoothing (alpha > 0) re-admits zero-joint
labels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .core import (
    CooccurrenceTable,
    DegenerateVector,
    DomainError,
    EmptyTable,
    GapValue,
    LabelId,
    LabelRecord,
    MetricKind,
    ProbPoint,
    UndefinedGapError,
)

LOG_METRICS = frozenset(
    {MetricKind.LLR, MetricKind.PMI, MetricKind.NPMI_Y, MetricKind.NPMI_XY, MetricKind.PMI2}
)


@dataclass(frozen=True)
class SmoothingConfig:
    """Additive count smoothing: C <- C + alpha, n <- n + 2*alpha.

    alpha = 0 reproduces the raw maximum-likelihood estimates exactly.
    """

    alpha: float = 0.0

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")


NO_SMOOTHING = SmoothingConfig(0.0)


def smoothed_probs(
    table: CooccurrenceTable,
    x1: LabelId,
    x2: LabelId,
    y: LabelId,
    smoothing: SmoothingConfig = NO_SMOOTHING,
) -> ProbPoint:
    """ProbPoint from table counts with optional additive smoothing."""
    if table.n == 0:
        raise EmptyTable("cannot derive probabilities from an empty table")
    a = smoothing.alpha
    n = table.n + 2 * a
    return ProbPoint(
        p_x1=(table.count(x1) + a) / n,
        p_x2=(table.count(x2) + a) / n,
        p_y=(table.count(y) + a) / n,
        p_x1y=(table.joint_count(x1, y) + a) / n,
        p_x2y=(table.joint_count(x2, y) + a) / n,
        n=n,
    )


# ---------------------------------------------------------------------------
# Single-pair associations A(x, y)
# ---------------------------------------------------------------------------


def association(metric: MetricKind, p_x: float, p_y: float, p_xy: float) -> float:
    """The single-pair association underlying `metric`.

    gap = association(x1 side) - association(x2 side) for all ten metrics.
    Raises UndefinedGapError when the value does not exist at this point.
    """
    if metric is MetricKind.DP:
        if p_x == 0.0:
            raise UndefinedGapError(metric, "p(x) = 0 in conditional")
        return p_xy / p_x
    if metric is MetricKind.SDC:
        d = p_x + p_y
        if d == 0.0:
            raise UndefinedGapError(metric, "p(x) + p(y) = 0")
        return p_xy / d
    if metric is MetricKind.JI:
        d = p_x + p_y - p_xy
        if d == 0.0:
            raise UndefinedGapError(metric, "union probability is 0")
        return p_xy / d
    if metric is MetricKind.LLR:
        if p_xy == 0.0:
            raise UndefinedGapError(metric, "log of zero joint")
        return math.log(p_xy / p_y)
    if metric is MetricKind.PMI:
        if p_xy == 0.0:
            raise UndefinedGapError(metric, "log of zero joint")
        return math.log(p_xy / (p_x * p_y))
    if metric is MetricKind.NPMI_Y:
        if p_xy == 0.0:
            raise UndefinedGapError(metric, "log of zero joint")
        if p_y == 1.0:
            raise UndefinedGapError(metric, "ln p(y) = 0 in normalizer")
        return math.log(p_xy / (p_x * p_y)) / math.log(p_y)
    if metric is MetricKind.NPMI_XY:
        if p_xy == 0.0:
            raise UndefinedGapError(metric, "log of zero joint")
        if p_xy == 1.0:
            raise UndefinedGapError(metric, "ln p(x,y) = 0 in normalizer")
        return math.log(p_xy / (p_x * p_y)) / math.log(p_xy)
    if metric is MetricKind.PMI2:
        if p_xy == 0.0:
            raise UndefinedGapError(metric, "log of zero joint")
        return math.log(p_xy * p_xy / (p_x * p_y))
    if metric is MetricKind.TAU_B:
        if p_x in (0.0, 1.0) or p_y in (0.0, 1.0):
            raise UndefinedGapError(metric, "constant indicator (p in {0, 1})")
        return phi_coefficient(p_x, p_y, p_xy)
    if metric is MetricKind.TTEST:
        if p_x == 0.0 or p_y == 0.0:
            raise UndefinedGapError(metric, "zero marginal under square root")
        return (p_xy - p_x * p_y) / math.sqrt(p_x * p_y)
    raise ValueError(f"unhandled metric {metric}")


def phi_coefficient(p_x: float, p_y: float, p_xy: float) -> float:
    """tau_b of two binary indicators: (p(x,y) - p(x)p(y)) / sqrt(var_x * var_y)."""
    return (p_xy - p_x * p_y) / math.sqrt(p_x * (1.0 - p_x) * p_y * (1.0 - p_y))


def gap(
    metric: MetricKind,
    p: ProbPoint,
    *,
    y: LabelId | None = None,
    x1: LabelId | None = None,
    x2: LabelId | None = None,
) -> GapValue:
    """Association gap A(x1, y) - A(x2, y) at a probability point.

    Undefined values surface as GapValue.defined == False, never a crash.
    """
    try:
        a1 = association(metric, p.p_x1, p.p_y, p.p_x1y)
        a2 = association(metric, p.p_x2, p.p_y, p.p_x2y)
    except UndefinedGapError as exc:
        return GapValue.undefined(metric, exc.reason, y=y, x1=x1, x2=x2)
    raw = a1 - a2
    return GapValue(
        metric=metric,
        raw=raw,
        oriented=metric.sign * raw,
        defined=True,
        y=y,
        x1=x1,
        x2=x2,
    )


def table_gap(
    metric: MetricKind,
    table: CooccurrenceTable,
    x1: LabelId,
    x2: LabelId,
    y: LabelId,
    smoothing: SmoothingConfig = NO_SMOOTHING,
) -> GapValue:
    """Convenience: gap evaluated at the table's (smoothed) MLE point."""
    p = smoothed_probs(table, x1, x2, y, smoothing)
    return gap(metric, p, y=y, x1=x1, x2=x2)


# ---------------------------------------------------------------------------
# Reduced closed forms
# ---------------------------------------------------------------------------


def gap_reduced(metric: MetricKind, p: ProbPoint) -> float:
    """Algebraically reduced gap; equals gap(...).raw for PMI, nPMI_y,
    nPMI_xy and PMI^2, and falls through to the definitional value otherwise.

    Raises UndefinedGapError under the same conditions as gap().
    """
    if metric is MetricKind.PMI:
        _require_positive_joints(metric, p)
        return math.log(p.p_x1y / p.p_x1) - math.log(p.p_x2y / p.p_x2)
    if metric is MetricKind.NPMI_Y:
        _require_positive_joints(metric, p)
        if p.p_y == 1.0:
            raise UndefinedGapError(metric, "ln p(y) = 0 in normalizer")
        return (
            math.log(p.p_x1y / p.p_x1) - math.log(p.p_x2y / p.p_x2)
        ) / math.log(p.p_y)
    if metric is MetricKind.NPMI_XY:
        _require_positive_joints(metric, p)
        if p.p_x1y == 1.0 or p.p_x2y == 1.0:
            raise UndefinedGapError(metric, "ln p(x,y) = 0 in normalizer")
        l1, l2 = math.log(p.p_x1y), math.log(p.p_x2y)
        ly = math.log(p.p_y)
        return (
            math.log(p.p_x2) / l2
            - math.log(p.p_x1) / l1
            + ly / l2
            - ly / l1
        )
    if metric is MetricKind.PMI2:
        _require_positive_joints(metric, p)
        return (
            math.log(p.p_x1y / p.p_x1)
            - math.log(p.p_x2y / p.p_x2)
            + math.log(p.p_x1y)
            - math.log(p.p_x2y)
        )
    value = gap(metric, p)
    if not value.defined:
        raise UndefinedGapError(metric, value.reason or "undefined")
    return value.raw


def _require_positive_joints(metric: MetricKind, p: ProbPoint) -> None:
    if p.p_x1y == 0.0 or p.p_x2y == 0.0:
        raise UndefinedGapError(metric, "log of zero joint")


# ---------------------------------------------------------------------------
# Kendall tau-b for binary indicators
# ---------------------------------------------------------------------------


def tau_b_gap(p: ProbPoint) -> float:
    """Closed-form tau_b gap: phi(x1, y) - phi(x2, y). Value in [-2, 2] since
    each term lies in [-1, 1].
    """
    for name, v in (("p_x1", p.p_x1), ("p_x2", p.p_x2), ("p_y", p.p_y)):
        if v in (0.0, 1.0):
            raise UndefinedGapError(MetricKind.TAU_B, f"{name} = {v} (constant indicator)")
    return phi_coefficient(p.p_x1, p.p_y, p.p_x1y) - phi_coefficient(
        p.p_x2, p.p_y, p.p_x2y
    )


def tau_b_bruteforce(
    records: Sequence[LabelRecord], x: LabelId, y: LabelId
) -> float:
    """Oracle tau_b: explicit enumeration of all n(n-1)/2 example pairs.

    Counts concordant/discordant pairs and tie terms on the 0/1 indicator
    vectors directly from the standard definition. Deliberately independent
    of the closed form it validates.
    """
    xs = [1 if x in r.labels else 0 for r in records]
    ys = [1 if y in r.labels else 0 for r in records]
    n = len(records)
    if n < 2:
        raise DegenerateVector(f"need at least 2 records, got {n}")
    if len(set(xs)) < 2:
        raise DegenerateVector("x indicator is constant")
    if len(set(ys)) < 2:
        raise DegenerateVector("y indicator is constant")
    n_c = n_d = ties_x = ties_y = 0
    for (xi, yi), (xj, yj) in combinations(zip(xs, ys), 2):
        dx = xi - xj
        dy = yi - yj
        if dx == 0:
            ties_x += 1
        if dy == 0:
            ties_y += 1
        if dx == 0 or dy == 0:
            continue
        if dx * dy > 0:
            n_c += 1
        else:
            n_d += 1
    n_0 = n * (n - 1) // 2
    return (n_c - n_d) / math.sqrt((n_0 - ties_x) * (n_0 - ties_y))


# ---------------------------------------------------------------------------
# One-vs-all generalization
# ---------------------------------------------------------------------------


def one_vs_all_gap(
    metric: MetricKind,
    table: CooccurrenceTable,
    x: LabelId,
    others: Iterable[LabelId],
    y: LabelId,
    smoothing: SmoothingConfig = NO_SMOOTHING,
) -> GapValue:
    """A(x, y) minus the mean of A(x', y) over the other identity labels.

    With a single other label this reduces exactly to the pairwise gap.
    """
    others = list(others)
    if not others:
        raise DomainError("others must be non-empty")
    if x in others:
        raise DomainError("x must not be a member of others")
    if table.n == 0:
        raise EmptyTable("cannot derive probabilities from an empty table")
    a = smoothing.alpha
    n = table.n + 2 * a

    def single(xid: LabelId) -> float:
        return association(
            metric,
            (table.count(xid) + a) / n,
            (table.count(y) + a) / n,
            (table.joint_count(xid, y) + a) / n,
        )

    try:
        own = single(x)
        rest = [single(o) for o in others]
    except UndefinedGapError as exc:
        return GapValue.undefined(metric, exc.reason, y=y, x1=x)
    raw = own - sum(rest) / len(rest)
    return GapValue(
        metric=metric, raw=raw, oriented=metric.sign * raw, defined=True, y=y, x1=x
    )
