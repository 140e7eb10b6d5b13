"""Parse prediction corpora and build co-occurrence tables.

Input formats (see README):
  jsonl     one object per line: {"id": "...", "labels": ["a", "b"]};
            unknown fields are ignored.
  csv-long  header `example_id,label`, one row per (example, label)
            membership. Rows for one example MUST be contiguous: an id
            reappearing after a different id starts a NEW example.

Inputs are assumed pre-thresholded: a record's labels are the positive
predictions, nothing else.
"""

from __future__ import annotations

import csv
import io
import json
import struct
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Sequence

from .core import (
    CooccurrenceTable,
    DomainError,
    LabelId,
    LabelInterner,
    LabelRecord,
    MalformedLine,
    merge,
)

TABLE_MAGIC = b"BGAP"
TABLE_VERSION = 1

FORMATS = ("jsonl", "csv-long")


@dataclass(frozen=True)
class IngestConfig:
    """How to parse and count a corpus.

    restrict_pairs_to limits joint storage to pairs touching the given
    identity label ids (marginals stay complete). This keeps joint memory
    O(|identities| x vocabulary) instead of quadratic, and leaves every
    (x1, x2, y) gap computation unchanged.
    """

    format: str = "jsonl"
    shard_count: int = 1
    restrict_pairs_to: frozenset[LabelId] | None = None

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}, got {self.format!r}")
        if self.shard_count < 1:
            raise ValueError(f"shard_count must be >= 1, got {self.shard_count}")
        if self.restrict_pairs_to is not None and not self.restrict_pairs_to:
            raise ValueError("restrict_pairs_to must be non-empty when given")


def _text_lines(source: IO[bytes] | IO[str] | Iterable[bytes | str]) -> Iterator[str]:
    for raw in source:
        yield raw.decode("utf-8") if isinstance(raw, bytes) else raw


def parse_records(
    source: IO[bytes] | IO[str] | Iterable[bytes | str],
    config: IngestConfig,
    interner: LabelInterner,
) -> Iterator[LabelRecord]:
    """Yield one LabelRecord per example, interning label strings as they appear.

    Duplicate labels within one example collapse to a set. Records with the
    same example id are distinct examples (dedup is the producer's job).
    Malformed input fails fast with the offending line number.
    """
    if config.format == "jsonl":
        yield from _parse_jsonl(source, interner)
    else:
        yield from _parse_csv_long(source, interner)


def _parse_jsonl(source, interner: LabelInterner) -> Iterator[LabelRecord]:
    for line_no, line in enumerate(_text_lines(source), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedLine(line_no, f"invalid JSON: {exc.msg}") from None
        if not isinstance(obj, dict):
            raise MalformedLine(line_no, "expected a JSON object")
        example_id = obj.get("id")
        labels = obj.get("labels")
        if not isinstance(example_id, str):
            raise MalformedLine(line_no, "missing or non-string 'id'")
        if not isinstance(labels, list) or any(
            not isinstance(l, str) for l in labels
        ):
            raise MalformedLine(line_no, "'labels' must be an array of strings")
        yield LabelRecord(
            example_id=example_id,
            labels=frozenset(interner.intern(l) for l in labels),
        )


def _parse_csv_long(source, interner: LabelInterner) -> Iterator[LabelRecord]:
    reader = csv.reader(_text_lines(source))
    try:
        header = next(reader)
    except StopIteration:
        raise MalformedLine(1, "missing header row") from None
    if [h.strip() for h in header] != ["example_id", "label"]:
        raise MalformedLine(1, "header must be exactly 'example_id,label'")
    current_id: str | None = None
    current: set[LabelId] = set()
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 2:
            raise MalformedLine(line_no, f"expected 2 columns, got {len(row)}")
        example_id, label = row
        if example_id != current_id:
            if current_id is not None:
                yield LabelRecord(current_id, frozenset(current))
            current_id = example_id
            current = set()
        current.add(interner.intern(label))
    if current_id is not None:
        yield LabelRecord(current_id, frozenset(current))


# ---------------------------------------------------------------------------
# Counting
# ---------------------------------------------------------------------------


class _Accumulator:
    """Mutable shard-local counts; turned into an immutable table at the end."""

    __slots__ = ("n", "marginal", "joint", "restrict")

    def __init__(self, restrict: frozenset[LabelId] | None):
        self.n = 0
        self.marginal: dict[LabelId, int] = {}
        self.joint: dict[tuple[LabelId, LabelId], int] = {}
        self.restrict = restrict

    def add(self, record: LabelRecord) -> None:
        self.n += 1
        labels = record.labels
        marginal = self.marginal
        for l in labels:
            marginal[l] = marginal.get(l, 0) + 1
        joint = self.joint
        if self.restrict is None:
            ordered = sorted(labels)
            for i, a in enumerate(ordered):
                for b in ordered[i + 1 :]:
                    key = (a, b)
                    joint[key] = joint.get(key, 0) + 1
        else:
            anchors = labels & self.restrict
            for a in anchors:
                for b in labels:
                    if b == a or (b in self.restrict and b < a):
                        continue  # count each anchor pair once
                    key = (a, b) if a < b else (b, a)
                    joint[key] = joint.get(key, 0) + 1

    def to_table(self, interner: LabelInterner) -> CooccurrenceTable:
        marginal = [self.marginal.get(lid, 0) for lid in range(len(interner))]
        return CooccurrenceTable(interner, self.n, marginal, self.joint)


def count(
    records: Iterable[LabelRecord],
    interner: LabelInterner,
    config: IngestConfig = IngestConfig(),
) -> CooccurrenceTable:
    """Count marginals and joints over `records` into an immutable table.

    Records are fanned out round-robin to shard_count independent
    accumulators and merged associatively, so shard count never changes the
    resulting counts (they are exact integers).
    """
    shards = [_Accumulator(config.restrict_pairs_to) for _ in range(config.shard_count)]
    for i, record in enumerate(records):
        shards[i % len(shards)].add(record)
    tables = [s.to_table(interner.copy()) for s in shards]
    merged = tables[0]
    for t in tables[1:]:
        merged = merge(merged, t)
    return merged


# ---------------------------------------------------------------------------
# Binary table serialization (magic "BGAP", little-endian)
# ---------------------------------------------------------------------------


def write_table(table: CooccurrenceTable, stream: IO[bytes]) -> None:
    """Serialize a table: magic, version u16, interner, marginals, joints."""
    w = stream.write
    w(TABLE_MAGIC)
    w(struct.pack("<H", TABLE_VERSION))
    names = table.interner.names
    w(struct.pack("<I", len(names)))
    for name in names:
        raw = name.encode("utf-8")
        w(struct.pack("<I", len(raw)))
        w(raw)
    w(struct.pack("<Q", table.n))
    for lid in table.label_ids():
        w(struct.pack("<Q", table.count(lid)))
    pairs = sorted(table.joint_items())
    w(struct.pack("<Q", len(pairs)))
    for (a, b), c in pairs:
        w(struct.pack("<IIQ", a, b, c))


def read_table(stream: IO[bytes]) -> CooccurrenceTable:
    def take(size: int) -> bytes:
        buf = stream.read(size)
        if len(buf) != size:
            raise DomainError("truncated table file")
        return buf

    if take(4) != TABLE_MAGIC:
        raise DomainError("not a biasgap table file (bad magic)")
    (version,) = struct.unpack("<H", take(2))
    if version != TABLE_VERSION:
        raise DomainError(f"unsupported table version {version}")
    (label_count,) = struct.unpack("<I", take(4))
    names = []
    for _ in range(label_count):
        (size,) = struct.unpack("<I", take(4))
        names.append(take(size).decode("utf-8"))
    interner = LabelInterner(names)
    (n,) = struct.unpack("<Q", take(8))
    marginal = [struct.unpack("<Q", take(8))[0] for _ in range(label_count)]
    (joint_count,) = struct.unpack("<Q", take(8))
    joint: dict[tuple[LabelId, LabelId], int] = {}
    for _ in range(joint_count):
        a, b, c = struct.unpack("<IIQ", take(16))
        joint[(a, b)] = c
    return CooccurrenceTable(interner, n, marginal, joint)


def save_table(table: CooccurrenceTable, path) -> None:
    with open(path, "wb") as fh:
        write_table(table, fh)


def load_table(path) -> CooccurrenceTable:
    with open(path, "rb") as fh:
        return read_table(fh)


def write_jsonl(records: Sequence[LabelRecord], interner: LabelInterner, stream: IO[str]) -> None:
    """Write records in the jsonl input format (labels sorted for determinism)."""
    for record in records:
        names = sorted(interner.resolve(l) for l in record.labels)
        stream.write(json.dumps({"id": record.example_id, "labels": names}))
        stream.write("\n")


def records_to_jsonl_bytes(records: Sequence[LabelRecord], interner: LabelInterner) -> bytes:
    buf = io.StringIO()
    write_jsonl(records, interner, buf)
    return buf.getvalue().encode("utf-8")
