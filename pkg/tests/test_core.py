import pytest
from hypothesis import given, strategies as st

from biasgap import (
    CooccurrenceTable,
    DomainError,
    EmptyTable,
    IngestConfig,
    LabelInterner,
    LabelRecord,
    ProbPoint,
    UnknownLabel,
    count,
    empty_table,
    merge,
)

from conftest import CORPUS10_ROWS, build_table


class TestInterner:
    def test_first_seen_order(self):
        interner = LabelInterner()
        assert interner.intern("b") == 0
        assert interner.intern("a") == 1
        assert interner.intern("b") == 0

    @given(st.lists(st.text(min_size=1), min_size=1))
    def test_round_trip(self, names):
        interner = LabelInterner()
        ids = [interner.intern(n) for n in names]
        for name, lid in zip(names, ids):
            assert interner.resolve(lid) == name
            assert interner.get(name) == lid
        assert len(interner) == len(set(names))

    def test_unknown(self):
        interner = LabelInterner(["a"])
        with pytest.raises(UnknownLabel):
            interner.get("b")
        with pytest.raises(UnknownLabel):
            interner.resolve(5)


class TestProbs:
    def test_corpus10_point(self, table10):
        t = table10
        p = t.probs(t.interner.get("alpha"), t.interner.get("beta"), t.interner.get("widget"))
        assert (p.p_x1, p.p_x2, p.p_y) == (0.4, 0.6, 0.5)
        assert (p.p_x1y, p.p_x2y) == (0.3, 0.2)
        assert p.n == 10
        assert p.is_interior

    def test_saturated_marginal_flags_boundary(self):
        # widget present in every record -> p_y = 1.0
        rows = [("e1", {"alpha", "widget"}), ("e2", {"beta", "widget"})]
        table, _ = build_table(rows)
        i = table.interner
        p = table.probs(i.get("alpha"), i.get("beta"), i.get("widget"))
        assert p.p_y == 1.0
        assert p.is_boundary

    def test_zero_joint_flags_boundary(self, table10_z):
        i = table10_z.interner
        # gizmo never co-occurs with... construct a pair that has zero joint
        rows = [("e1", {"alpha"}), ("e2", {"beta", "widget"})]
        table, _ = build_table(rows)
        i = table.interner
        p = table.probs(i.get("alpha"), i.get("beta"), i.get("widget"))
        assert p.p_x1y == 0.0
        assert p.is_boundary

    def test_empty_table_raises(self):
        with pytest.raises(EmptyTable):
            empty_table().probs(0, 1, 2)

    def test_unknown_label_raises(self, table10):
        with pytest.raises(UnknownLabel):
            table10.probs(0, 1, 99)


class TestProbPointValidation:
    def test_joint_above_marginal_rejected(self):
        with pytest.raises(DomainError):
            ProbPoint(0.2, 0.6, 0.5, 0.3, 0.2, 10)

    def test_out_of_range_rejected(self):
        with pytest.raises(DomainError):
            ProbPoint(1.2, 0.6, 0.5, 0.3, 0.2, 10)

    def test_swap_is_involution(self, point10):
        assert point10.swapped().swapped() == point10


class TestTableInvariants:
    def test_joint_bounded_by_marginals(self, table10_z):
        t = table10_z
        for (a, b), c in t.joint_items():
            assert 0 <= c <= min(t.count(a), t.count(b)) <= t.n

    def test_inconsistent_counts_rejected(self):
        interner = LabelInterner(["a", "b"])
        with pytest.raises(DomainError):
            CooccurrenceTable(interner, 5, [2, 3], {(0, 1): 4})

    def test_self_pair_rejected(self):
        interner = LabelInterner(["a"])
        with pytest.raises(DomainError):
            CooccurrenceTable(interner, 5, [2], {(0, 0): 2})


class TestMerge:
    def test_identity_element(self, table10):
        merged = merge(table10, empty_table())
        assert merged.same_counts(table10)
        assert merge(empty_table(), table10).same_counts(table10)

    def test_additivity(self, table10):
        merged = merge(table10, table10)
        assert merged.n == 2 * table10.n

    def test_split_merge_equals_single_pass(self):
        # count records 1-5 and 6-10 with independent interners, then merge
        first, _ = build_table(CORPUS10_ROWS[:5])
        second, _ = build_table(CORPUS10_ROWS[5:])
        whole, _ = build_table(CORPUS10_ROWS)
        assert merge(first, second).same_counts(whole)

    def test_commutative_and_associative(self):
        a, _ = build_table(CORPUS10_ROWS[:3])
        b, _ = build_table(CORPUS10_ROWS[3:7])
        c, _ = build_table(CORPUS10_ROWS[7:])
        assert merge(a, b).same_counts(merge(b, a))
        assert merge(merge(a, b), c).same_counts(merge(a, merge(b, c)))

    @given(st.data())
    def test_any_partition_matches_single_pass(self, data):
        vocab = ["alpha", "beta", "widget", "gizmo", "hat"]
        rows = data.draw(
            st.lists(
                st.sets(st.sampled_from(vocab)),
                min_size=1,
                max_size=12,
            )
        )
        rows = [(f"e{i}", labels) for i, labels in enumerate(rows)]
        cut = data.draw(st.integers(min_value=0, max_value=len(rows)))
        left, _ = build_table(rows[:cut])
        right, _ = build_table(rows[cut:])
        whole, _ = build_table(rows)
        assert merge(left, right).same_counts(whole)

    def test_id_remapping_by_string(self):
        # same labels, different id assignment order on each side
        ia = LabelInterner(["a", "b"])
        ib = LabelInterner(["b", "a"])
        ta = count([LabelRecord("1", frozenset([0, 1]))], ia, IngestConfig())
        tb = count([LabelRecord("2", frozenset([0]))], ib, IngestConfig())  # {"b"}
        m = merge(ta, tb)
        assert m.count_by_name("b") == 2
        assert m.count_by_name("a") == 1


class TestDigest:
    def test_digest_ignores_id_order(self):
        rows = [("e1", {"a", "b"}), ("e2", {"b"})]
        t1, _ = build_table(rows)
        t2, _ = build_table([("e2", {"b"}), ("e1", {"b", "a"})])
        assert t1.digest() == t2.digest()

    def test_digest_sees_count_changes(self, table10):
        other, _ = build_table(CORPUS10_ROWS[:9])
        assert table10.digest() != other.digest()
