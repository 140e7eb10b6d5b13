"""Shared fixtures: the 10-record hand-checkable corpus and its variants.

Corpus counts (verified by hand): n=10, C(alpha)=4, C(beta)=6, C(widget)=5,
C(alpha,widget)=3, C(beta,widget)=2.
"""

import pytest

from biasgap import IngestConfig, LabelInterner, LabelRecord, count

CORPUS10_ROWS = [
    ("e1", {"alpha", "widget"}),
    ("e2", {"alpha", "widget"}),
    ("e3", {"alpha", "widget"}),
    ("e4", {"alpha"}),
    ("e5", {"beta", "widget"}),
    ("e6", {"beta", "widget"}),
    ("e7", {"beta"}),
    ("e8", {"beta"}),
    ("e9", {"beta"}),
    ("e10", {"beta"}),
]

# adds gizmo with C=4, C(alpha,gizmo)=1, C(beta,gizmo)=3
CORPUS10_Z_ROWS = [
    (eid, labels | ({"gizmo"} if eid in ("e1", "e5", "e6", "e7") else set()))
    for eid, labels in CORPUS10_ROWS
]

# adds gamma with C=5, C(gamma,widget)=2
CORPUS10_X3_ROWS = [
    (eid, labels | ({"gamma"} if eid in ("e1", "e5", "e7", "e8", "e9") else set()))
    for eid, labels in CORPUS10_ROWS
]


def build_corpus(rows):
    interner = LabelInterner()
    records = [
        LabelRecord(eid, frozenset(interner.intern(l) for l in labels))
        for eid, labels in rows
    ]
    return interner, records


def build_table(rows, **config_kw):
    interner, records = build_corpus(rows)
    table = count(records, interner, IngestConfig(**config_kw))
    return table, records


@pytest.fixture(scope="session")
def corpus10():
    interner, records = build_corpus(CORPUS10_ROWS)
    return interner, records


@pytest.fixture(scope="session")
def table10():
    table, _ = build_table(CORPUS10_ROWS)
    return table


@pytest.fixture(scope="session")
def point10(table10):
    x1 = table10.interner.get("alpha")
    x2 = table10.interner.get("beta")
    y = table10.interner.get("widget")
    return table10.probs(x1, x2, y)


@pytest.fixture(scope="session")
def table10_z():
    table, _ = build_table(CORPUS10_Z_ROWS)
    return table


@pytest.fixture(scope="session")
def table10_x3():
    table, _ = build_table(CORPUS10_X3_ROWS)
    return table


def corpus10_jsonl() -> bytes:
    import json

    lines = [
        json.dumps({"id": eid, "labels": sorted(labels)}) for eid, labels in CORPUS10_ROWS
    ]
    return ("\n".join(lines) + "\n").encode("utf-8")


def build_toy_base(num_targets: int):
    """Deterministic movement-test base: equal identity marginals, target
    labels sharing similar joint ratios but widely spread marginal counts
    (so normalized-PMI gaps fan out while PMI/DP gaps cluster)."""
    rows = []
    eid = 0

    def add(labels, copies):
        nonlocal eid
        for _ in range(copies):
            rows.append((f"t{eid}", labels))
            eid += 1

    for j in range(num_targets):
        name = f"t_{j:02d}"
        add({"alpha", name}, 10 + j % 3)
        add({"beta", name}, 5)
        add({name}, 8 * j)
    alpha_joint_total = sum(10 + j % 3 for j in range(num_targets))
    add({"alpha"}, 10 * num_targets + 100 - alpha_joint_total)
    add({"beta"}, 5 * num_targets + 100)
    return build_table(rows)


@pytest.fixture(scope="session")
def toy_base_50():
    table, _ = build_toy_base(50)
    return table
