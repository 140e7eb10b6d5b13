"""Metric sensitivity vectors: partial derivatives of each gap with respect
to p(y), p(x1,y) and p(x2,y), analytically and by central finite differences.

The perturbation model treats (p(y), p(x1,y), p(x2,y), p(x1), p(x2)) as
independent coordinates; no renormalization of remaining mass. The analytic
formulas are the derivatives of the gap functions implemented in
biasgap.metrics, and the finite-difference evaluator is the acceptance bar
for them.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .core import DomainError, MetricKind, ProbPoint, UndefinedGapError
from . import metrics as _metrics


@dataclass(frozen=True)
class OrientationVector:
    """(d/dp(y), d/dp(x1,y), d/dp(x2,y)) of a raw gap at a point."""

    d_py: float
    d_px1y: float
    d_px2y: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.d_py, self.d_px1y, self.d_px2y)

    def oriented(self, metric: MetricKind) -> "OrientationVector":
        """Partials of the sign-corrected gap (oriented = sign * raw)."""
        s = metric.sign
        return OrientationVector(s * self.d_py, s * self.d_px1y, s * self.d_px2y)


@dataclass(frozen=True)
class FDConfig:
    """Central-difference step control. h = h_rel * coordinate value;
    clamp shrinks the step so perturbed points stay interior and consistent.
    """

    h_rel: float = 1e-6
    clamp: bool = True

    def __post_init__(self):
        if not 0.0 < self.h_rel < 1e-2:
            raise ValueError(f"h_rel must be in (0, 1e-2), got {self.h_rel}")


# ---------------------------------------------------------------------------
# Analytic partials
# ---------------------------------------------------------------------------


def partials(metric: MetricKind, p: ProbPoint) -> OrientationVector:
    """Analytic partial derivatives of the raw gap at a strictly interior point."""
    if not p.is_interior:
        raise DomainError("partials require a strictly interior point")
    px1, px2, py = p.p_x1, p.p_x2, p.p_y
    p1, p2 = p.p_x1y, p.p_x2y

    if metric is MetricKind.DP:
        return OrientationVector(0.0, 1.0 / px1, -1.0 / px2)

    if metric is MetricKind.SDC:
        d1, d2 = px1 + py, px2 + py
        return OrientationVector(
            p2 / (d2 * d2) - p1 / (d1 * d1), 1.0 / d1, -1.0 / d2
        )

    if metric is MetricKind.JI:
        d1 = px1 + py - p1
        d2 = px2 + py - p2
        return OrientationVector(
            p2 / (d2 * d2) - p1 / (d1 * d1),
            (px1 + py) / (d1 * d1),
            -(px2 + py) / (d2 * d2),
        )

    if metric in (MetricKind.LLR, MetricKind.PMI):
        # both gaps reduce to ln p(x1,y) - ln p(x2,y) + const in these coords
        return OrientationVector(0.0, 1.0 / p1, -1.0 / p2)

    if metric is MetricKind.PMI2:
        return OrientationVector(0.0, 2.0 / p1, -2.0 / p2)

    if metric is MetricKind.NPMI_Y:
        ly = math.log(py)
        pmi_gap = math.log(p1 / px1) - math.log(p2 / px2)
        return OrientationVector(
            -pmi_gap / (py * ly * ly), 1.0 / (ly * p1), -1.0 / (ly * p2)
        )

    if metric is MetricKind.NPMI_XY:
        l1, l2 = math.log(p1), math.log(p2)
        ly = math.log(py)
        return OrientationVector(
            (1.0 / l2 - 1.0 / l1) / py,
            (math.log(px1) + ly) / (p1 * l1 * l1),
            -(math.log(px2) + ly) / (p2 * l2 * l2),
        )

    if metric is MetricKind.TAU_B:
        c1 = math.sqrt(px1 * (1.0 - px1))
        c2 = math.sqrt(px2 * (1.0 - px2))
        g = math.sqrt(py * (1.0 - py))
        tau1 = (p1 - px1 * py) / (c1 * g)
        tau2 = (p2 - px2 * py) / (c2 * g)
        centered = (1.0 - 2.0 * py) / (2.0 * py * (1.0 - py))
        d_py = (-px1 / (c1 * g) - tau1 * centered) - (
            -px2 / (c2 * g) - tau2 * centered
        )
        return OrientationVector(d_py, 1.0 / (c1 * g), -1.0 / (c2 * g))

    if metric is MetricKind.TTEST:
        s1 = math.sqrt(px1 * py)
        s2 = math.sqrt(px2 * py)
        d_py = (-p1 / (2.0 * py) - px1 / 2.0) / s1 - (
            -p2 / (2.0 * py) - px2 / 2.0
        ) / s2
        return OrientationVector(d_py, 1.0 / s1, -1.0 / s2)

    raise ValueError(f"unhandled metric {metric}")


# ---------------------------------------------------------------------------
# Finite differences
# ---------------------------------------------------------------------------

_COORDS = ("p_y", "p_x1y", "p_x2y")


def _coordinate_slack(p: ProbPoint, coord: str) -> tuple[float, float]:
    """(room below, room above) for a coordinate before the point leaves
    the consistent open domain, holding every other coordinate fixed."""
    v = getattr(p, coord)
    if coord == "p_y":
        below = v - max(p.p_x1y, p.p_x2y)
        above = 1.0 - v
    elif coord == "p_x1y":
        below = v
        above = min(p.p_x1, p.p_y) - v
    else:
        below = v
        above = min(p.p_x2, p.p_y) - v
    return below, above


def fd_partials(
    metric: MetricKind, p: ProbPoint, cfg: FDConfig = FDConfig()
) -> OrientationVector:
    """Central-difference partials of the raw gap.

    Marginals p(x1), p(x2) are held fixed while joints are perturbed,
    matching the independent-coordinate model of the analytic table.
    """
    out = []
    for coord in _COORDS:
        v = getattr(p, coord)
        h = cfg.h_rel * v
        if cfg.clamp:
            below, above = _coordinate_slack(p, coord)
            h = min(h, 0.5 * below, 0.5 * above)
        if h <= 0.0:
            raise UndefinedGapError(
                metric, f"no interior margin to perturb {coord} at {v!r}"
            )
        try:
            hi = p.with_coords(**{coord: v + h})
            lo = p.with_coords(**{coord: v - h})
        except DomainError as exc:
            raise UndefinedGapError(metric, f"perturbed point left domain: {exc}")
        g_hi = _metrics.gap(metric, hi)
        g_lo = _metrics.gap(metric, lo)
        if not (g_hi.defined and g_lo.defined):
            reason = g_hi.reason if not g_hi.defined else g_lo.reason
            raise UndefinedGapError(metric, f"gap undefined at perturbed point: {reason}")
        out.append((g_hi.raw - g_lo.raw) / (2.0 * h))
    return OrientationVector(*out)


# ---------------------------------------------------------------------------
# Agreement report
# ---------------------------------------------------------------------------


def discrepancy(analytic: float, numeric: float) -> float:
    """Scaled error |a - f| / max(1, |a|, |f|): relative for large partials,
    absolute near zero (where relative error is meaningless)."""
    return abs(analytic - numeric) / max(1.0, abs(analytic), abs(numeric))


@dataclass
class MetricOrientationReport:
    metric: MetricKind
    samples: int = 0
    skipped: int = 0
    max_error: float = 0.0
    worst_coord: str | None = None
    passed: bool = True

    @property
    def status(self) -> str:
        if self.samples == 0:
            return "no-data"
        return "pass" if self.passed else "fail"

    def to_json(self) -> dict:
        return {
            "metric": self.metric.value,
            "samples": self.samples,
            "skipped": self.skipped,
            "max_error": self.max_error,
            "worst_coord": self.worst_coord,
            "status": self.status,
        }


@dataclass
class OrientationReport:
    tol: float
    entries: dict[MetricKind, MetricOrientationReport] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries.values())

    def to_json(self) -> dict:
        return {
            "tol": self.tol,
            "passed": self.passed,
            "metrics": [self.entries[m].to_json() for m in sorted(self.entries, key=lambda k: k.value)],
        }


def orientation_report(
    metric_kinds,
    points,
    tol: float,
    cfg: FDConfig = FDConfig(),
) -> OrientationReport:
    """Max scaled discrepancy between analytic and FD partials per metric.

    Points where either side is undefined are skipped and counted.
    """
    report = OrientationReport(tol=tol)
    points = list(points)
    for metric in metric_kinds:
        entry = MetricOrientationReport(metric=metric)
        for p in points:
            try:
                a = partials(metric, p)
                f = fd_partials(metric, p, cfg)
            except (UndefinedGapError, DomainError):
                entry.skipped += 1
                continue
            entry.samples += 1
            for coord, av, fv in zip(_COORDS, a.as_tuple(), f.as_tuple()):
                err = discrepancy(av, fv)
                if err > entry.max_error:
                    entry.max_error = err
                    entry.worst_coord = coord
        entry.passed = entry.samples > 0 and entry.max_error <= tol
        report.entries[metric] = entry
    return report


def sample_interior_points(
    count: int, seed: int, n: float = 10_000.0
) -> list[ProbPoint]:
    """Deterministic strictly-interior probability points with enough margin
    for finite-difference perturbation.

    Joints are sampled inside their Frechet envelope
    [max(0, p_x + p_y - 1), min(p_x, p_y)] so every point is realizable as a
    2x2 joint distribution (keeps phi/tau_b inside [-1, 1]).
    """
    rng = random.Random(seed)

    def joint(px: float, py: float) -> float:
        lo = max(px + py - 1.0, 0.0)
        hi = min(px, py)
        return lo + rng.uniform(0.05, 0.95) * (hi - lo)

    points = []
    for _ in range(count):
        px1 = rng.uniform(0.05, 0.9)
        px2 = rng.uniform(0.05, 0.9)
        py = rng.uniform(0.05, 0.9)
        points.append(ProbPoint(px1, px2, py, joint(px1, py), joint(px2, py), n))
    return points
