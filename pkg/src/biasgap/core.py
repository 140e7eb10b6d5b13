"""Shared domain types: label interning, co-occurrence counts, probability views.

Counts are exact integers; probabilities are derived doubles computed on
demand. Tables are immutable after build, so merges and concurrent reads
are safe without locking.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Iterator, Mapping

LabelId = int

_PROB_SLACK = 1e-12  # tolerance for joint <= marginal checks on hand-made points


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------


class BiasGapError(Exception):
    """Base class for all toolkit errors."""


class UnknownLabel(BiasGapError, KeyError):
    """A label string or id is not present in the interner/table."""

    def __init__(self, label):
        super().__init__(label)
        self.label = label

    def __str__(self) -> str:
        return f"unknown label: {self.label!r}"


class EmptyTable(BiasGapError):
    """Operation requires a table with at least one example."""


class DomainError(BiasGapError, ValueError):
    """Probabilities violate consistency in a way that is not a boundary case."""


class UndefinedGapError(BiasGapError):
    """A metric's value does not exist at this point (log of zero etc.).

    Surfaced to callers of `gap` as GapValue.defined == False, never as a crash.
    """

    def __init__(self, metric, reason: str):
        super().__init__(f"{getattr(metric, 'value', metric)}: {reason}")
        self.metric = metric
        self.reason = reason


class IdenticalIdentityLabels(BiasGapError, ValueError):
    """x1 and x2 must be distinct labels."""


class MalformedLine(BiasGapError, ValueError):
    """Input file is malformed; carries the 1-based line number."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class InfeasibleCounts(BiasGapError, ValueError):
    """A count overlay would violate C(a,b) <= min(C(a), C(b)) <= n."""


class DegenerateVector(BiasGapError, ValueError):
    """A binary indicator vector is constant; rank correlation is undefined."""


class MismatchedContext(BiasGapError, ValueError):
    """Rankings being compared come from different tables or identity pairs."""


class EmptyRanking(BiasGapError, ValueError):
    """Ranking has no rows."""


class InvalidSpec(BiasGapError, ValueError):
    """Synthetic corpus parameters are out of range."""


# ---------------------------------------------------------------------------
# Label interning
# ---------------------------------------------------------------------------


class LabelInterner:
    """Bijection between label display strings and dense non-negative ids.

    Ids are assigned in first-seen order and are stable for the lifetime of
    the interner. Ranking code never relies on id order; tie-breaks use the
    display string.
    """

    __slots__ = ("_ids", "_names")

    def __init__(self, names: Iterable[str] = ()):
        self._ids: dict[str, int] = {}
        self._names: list[str] = []
        for name in names:
            self.intern(name)

    def intern(self, name: str) -> LabelId:
        """Return the id for `name`, assigning the next id on first sight."""
        lid = self._ids.get(name)
        if lid is None:
            lid = len(self._names)
            self._ids[name] = lid
            self._names.append(name)
        return lid

    def get(self, name: str) -> LabelId:
        """Return the id for an already-interned name, or raise UnknownLabel."""
        try:
            return self._ids[name]
        except KeyError:
            raise UnknownLabel(name) from None

    def resolve(self, lid: LabelId) -> str:
        if 0 <= lid < len(self._names):
            return self._names[lid]
        raise UnknownLabel(lid)

    def __contains__(self, name: str) -> bool:
        return name in self._ids

    def __len__(self) -> int:
        return len(self._names)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self._names)

    def copy(self) -> "LabelInterner":
        return LabelInterner(self._names)


@dataclass(frozen=True)
class LabelRecord:
    """One example: an id plus its set of positively-predicted labels."""

    example_id: str
    labels: frozenset[LabelId]


# ---------------------------------------------------------------------------
# Metric identifiers
# ---------------------------------------------------------------------------


class MetricKind(Enum):
    """The ten association metrics, keyed by their CLI identifiers."""

    DP = "dp"
    SDC = "sdc"
    JI = "ji"
    LLR = "llr"
    PMI = "pmi"
    NPMI_Y = "npmi_y"
    NPMI_XY = "npmi_xy"
    PMI2 = "pmi2"
    TAU_B = "tau_b"
    TTEST = "ttest"

    @property
    def sign(self) -> int:
        """Orientation factor: oriented = sign * raw, positive => skew toward x1.

        Both normalized-PMI variants divide by a negative log, which flips
        their raw sign relative to PMI; all other metrics already point the
        right way.
        """
        return -1 if self in (MetricKind.NPMI_Y, MetricKind.NPMI_XY) else +1

    @classmethod
    def parse(cls, name: str) -> "MetricKind":
        try:
            return cls(name)
        except ValueError:
            valid = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown metric {name!r}; valid: {valid}") from None


METRIC_NAMES = tuple(m.value for m in MetricKind)
ALL_METRICS = tuple(MetricKind)


# ---------------------------------------------------------------------------
# Probability point
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProbPoint:
    """A consistent tuple of probabilities feeding metric and orientation kernels.

    Boundary values (exactly 0 or 1) are allowed and flagged; each metric
    decides whether it is defined there. Inconsistent values (a joint above
    its marginal) raise DomainError outright.
    """

    p_x1: float
    p_x2: float
    p_y: float
    p_x1y: float
    p_x2y: float
    n: float

    def __post_init__(self):
        for name in ("p_x1", "p_x2", "p_y", "p_x1y", "p_x2y"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise DomainError(f"{name}={v!r} outside [0, 1]")
        if self.p_x1y > min(self.p_x1, self.p_y) + _PROB_SLACK:
            raise DomainError(
                f"p_x1y={self.p_x1y!r} exceeds min(p_x1, p_y)="
                f"{min(self.p_x1, self.p_y)!r}"
            )
        if self.p_x2y > min(self.p_x2, self.p_y) + _PROB_SLACK:
            raise DomainError(
                f"p_x2y={self.p_x2y!r} exceeds min(p_x2, p_y)="
                f"{min(self.p_x2, self.p_y)!r}"
            )
        if not self.n > 0:
            raise DomainError(f"n={self.n!r} must be positive")

    @property
    def is_boundary(self) -> bool:
        """True when any probability sits exactly at 0 or 1."""
        return any(
            v == 0.0 or v == 1.0
            for v in (self.p_x1, self.p_x2, self.p_y, self.p_x1y, self.p_x2y)
        )

    @property
    def is_interior(self) -> bool:
        return not self.is_boundary

    def swapped(self) -> "ProbPoint":
        """The same point with the roles of x1 and x2 exchanged."""
        return ProbPoint(
            p_x1=self.p_x2,
            p_x2=self.p_x1,
            p_y=self.p_y,
            p_x1y=self.p_x2y,
            p_x2y=self.p_x1y,
            n=self.n,
        )

    def with_coords(self, **kw: float) -> "ProbPoint":
        return replace(self, **kw)


@dataclass(frozen=True)
class GapValue:
    """One metric's association gap at a point.

    raw is the literal formula value; oriented = sign * raw so that positive
    always means "skewed toward x1". When a required log/ratio input is zero
    (and smoothing is off), defined is False and both values are NaN.
    """

    metric: MetricKind
    raw: float
    oriented: float
    defined: bool = True
    reason: str | None = None
    y: LabelId | None = None
    x1: LabelId | None = None
    x2: LabelId | None = None

    @classmethod
    def undefined(cls, metric: MetricKind, reason: str, **ids) -> "GapValue":
        return cls(
            metric=metric,
            raw=float("nan"),
            oriented=float("nan"),
            defined=False,
            reason=reason,
            **ids,
        )


# ---------------------------------------------------------------------------
# Co-occurrence table
# ---------------------------------------------------------------------------


class CooccurrenceTable:
    """Example count, per-label marginal counts, and sparse unordered joint counts.

    Joint counts are stored once per unordered pair and only for pairs that
    actually co-occur; C(a, a) is not stored (it equals C(a)). Immutable
    after construction.
    """

    __slots__ = ("interner", "n", "_marginal", "_joint", "_digest")

    def __init__(
        self,
        interner: LabelInterner,
        n: int,
        marginal: Iterable[int],
        joint: Mapping[tuple[LabelId, LabelId], int],
    ):
        self.interner = interner
        self.n = int(n)
        self._marginal = tuple(int(c) for c in marginal)
        self._joint = {
            (a, b) if a < b else (b, a): int(c)
            for (a, b), c in joint.items()
            if c
        }
        self._digest: str | None = None
        self._validate()

    def _validate(self) -> None:
        if self.n < 0:
            raise DomainError(f"negative example count {self.n}")
        if len(self._marginal) != len(self.interner):
            raise DomainError("marginal vector length does not match interner")
        for lid, c in enumerate(self._marginal):
            if not 0 <= c <= self.n:
                raise DomainError(
                    f"C({self.interner.resolve(lid)})={c} outside [0, n={self.n}]"
                )
        for (a, b), c in self._joint.items():
            if a == b:
                raise DomainError("self-pair stored in joint map")
            cap = min(self._marginal[a], self._marginal[b])
            if not 0 <= c <= cap:
                raise DomainError(
                    f"C({self.interner.resolve(a)},{self.interner.resolve(b)})={c} "
                    f"exceeds min of marginals {cap}"
                )

    # -- lookups ------------------------------------------------------------

    @property
    def label_count(self) -> int:
        return len(self._marginal)

    def label_ids(self) -> range:
        return range(len(self._marginal))

    def count(self, lid: LabelId) -> int:
        if not 0 <= lid < len(self._marginal):
            raise UnknownLabel(lid)
        return self._marginal[lid]

    def count_by_name(self, name: str) -> int:
        return self.count(self.interner.get(name))

    def joint_count(self, a: LabelId, b: LabelId) -> int:
        if not (0 <= a < len(self._marginal) and 0 <= b < len(self._marginal)):
            raise UnknownLabel(a if not 0 <= a < len(self._marginal) else b)
        if a == b:
            return self._marginal[a]
        key = (a, b) if a < b else (b, a)
        return self._joint.get(key, 0)

    def joint_items(self) -> Iterator[tuple[tuple[LabelId, LabelId], int]]:
        return iter(self._joint.items())

    @property
    def joint_size(self) -> int:
        return len(self._joint)

    # -- probabilities --------------------------------------------------------

    def probs(self, x1: LabelId, x2: LabelId, y: LabelId) -> ProbPoint:
        """Maximum-likelihood probability point for (x1, x2, y).

        Boundary probabilities (0 or 1) are allowed; the point carries the
        flag and downstream metrics decide what is defined.
        """
        if self.n == 0:
            raise EmptyTable("cannot derive probabilities from an empty table")
        n = self.n
        return ProbPoint(
            p_x1=self.count(x1) / n,
            p_x2=self.count(x2) / n,
            p_y=self.count(y) / n,
            p_x1y=self.joint_count(x1, y) / n,
            p_x2y=self.joint_count(x2, y) / n,
            n=float(n),
        )

    # -- identity -------------------------------------------------------------

    def digest(self) -> str:
        """Canonical content hash, independent of id assignment order."""
        if self._digest is None:
            h = hashlib.sha256(b"biasgap-table-v1\0")
            h.update(str(self.n).encode())
            names = self.interner.names
            for name, c in sorted(zip(names, self._marginal)):
                h.update(b"\0m")
                h.update(name.encode("utf-8"))
                h.update(b"\0")
                h.update(str(c).encode())
            pairs = sorted(
                (tuple(sorted((names[a], names[b]))), c)
                for (a, b), c in self._joint.items()
            )
            for (na, nb), c in pairs:
                h.update(b"\0j")
                h.update(na.encode("utf-8"))
                h.update(b"\0")
                h.update(nb.encode("utf-8"))
                h.update(b"\0")
                h.update(str(c).encode())
            self._digest = h.hexdigest()
        return self._digest

    def same_counts(self, other: "CooccurrenceTable") -> bool:
        """Count-level equality, ignoring id assignment order."""
        return self.digest() == other.digest()

    def __repr__(self) -> str:
        return (
            f"CooccurrenceTable(n={self.n}, labels={self.label_count}, "
            f"joint_pairs={len(self._joint)})"
        )


def empty_table() -> CooccurrenceTable:
    """The identity element for merge."""
    return CooccurrenceTable(LabelInterner(), 0, (), {})


def merge(a: CooccurrenceTable, b: CooccurrenceTable) -> CooccurrenceTable:
    """Elementwise sum of two tables, reconciling label ids by display string.

    Associative and commutative on all counts; `empty_table()` is the
    identity element.
    """
    interner = a.interner.copy()
    remap = [interner.intern(name) for name in b.interner.names]
    marginal = [0] * len(interner)
    for lid in a.label_ids():
        marginal[lid] += a.count(lid)
    for lid in b.label_ids():
        marginal[remap[lid]] += b.count(lid)
    joint: dict[tuple[LabelId, LabelId], int] = {}
    for (pa, pb), c in a.joint_items():
        key = (pa, pb) if pa < pb else (pb, pa)
        joint[key] = joint.get(key, 0) + c
    for (pa, pb), c in b.joint_items():
        ra, rb = remap[pa], remap[pb]
        key = (ra, rb) if ra < rb else (rb, ra)
        joint[key] = joint.get(key, 0) + c
    return CooccurrenceTable(interner, a.n + b.n, marginal, joint)
