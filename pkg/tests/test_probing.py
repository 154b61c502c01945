import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from linprobe.hashing import TrulyRandomHash, derived_rng, new_polynomial
from linprobe.probing import (
    DyadicInterval,
    ProbeTable,
    Run,
    TableFullError,
    check_query_run_lemma,
    check_run_lemma,
    hash_counts,
    interval_hash_count,
    near_full_threshold,
    run_containing,
    runs,
    table_size_for,
    verify_fill_invariant,
)


class FixedHash:
    """Test double: explicit key -> slot map."""

    def __init__(self, t, mapping=None, default=0):
        self.range_t = t
        self.mapping = mapping or {}
        self.default = default

    def __call__(self, x):
        return self.mapping.get(x, self.default)


def build(t, mapping, keys):
    table = ProbeTable(t, FixedHash(t, mapping))
    for x in keys:
        table.insert(x)
    return table


def random_table(t, load, seed, family="random"):
    n = int(t * load)
    if family == "random":
        h = TrulyRandomHash(t, seed)
    else:
        h = new_polynomial(int(family[-1]), t, seed)
    table = ProbeTable(t, h)
    rng = derived_rng(seed, 999)
    keys = set()
    while len(keys) < n:
        keys.update(int(k) for k in rng.integers(0, 2**61 - 1, size=n - len(keys), dtype=np.uint64))
    for x in keys:
        table.insert(x)
    return table, keys


class TestInsertSearch:
    def test_insert_into_empty(self):
        table = ProbeTable(8, FixedHash(8, {10: 5}))
        assert table.insert(10) == (5, 1)

    def test_insert_past_occupied(self):
        table = build(8, {20: 5, 10: 5}, [20])
        assert table.insert(10) == (6, 2)

    def test_insert_wraps_cyclically(self):
        table = build(8, {1: 6, 2: 7, 3: 6}, [1, 2])
        assert table.insert(3) == (0, 3)

    def test_insert_is_idempotent(self):
        table = build(8, {1: 3, 2: 3}, [1, 2])
        before = list(table.slots)
        pos, _ = table.insert(1)
        assert pos == 3
        assert table.slots == before and table.n == 2

    def test_search_after_insert(self):
        table = ProbeTable(8, FixedHash(8, {42: 2}))
        pos, _ = table.insert(42)
        res = table.search(42)
        assert res.found and res.position == pos

    def test_search_empty_table(self):
        table = ProbeTable(8, FixedHash(8))
        res = table.search(1)
        assert not res.found and res.probes == 1

    def test_absent_search_probes_equal_insert_probes(self):
        table, _ = random_table(64, 0.6, seed=11)
        for q in range(50):
            if table.search(q).found:
                continue
            probes_search = table.search(q).probes
            clone = ProbeTable(table.t, table.hash_fn)
            clone.slots = list(table.slots)
            clone.n = table.n
            _, probes_insert = clone.insert(q)
            assert probes_search == probes_insert

    def test_full_table_rejected(self):
        table = build(4, {}, [100, 101, 102])
        with pytest.raises(TableFullError):
            table.insert(103)


class TestDelete:
    def test_single_key(self):
        table = build(8, {5: 2}, [5])
        table.delete(5)
        assert table.n == 0 and all(s is None for s in table.slots)

    def test_chain_shifts_back(self):
        # a, b, c all hash to 5, land at 5, 6, 7
        table = build(8, {1: 5, 2: 5, 3: 5}, [1, 2, 3])
        table.delete(1)
        assert table.slots[5] == 2 and table.slots[6] == 3 and table.slots[7] is None

    def test_delete_absent_raises(self):
        table = build(8, {1: 0}, [1])
        with pytest.raises(KeyError):
            table.delete(2)

    def test_random_deletion_matches_rebuild(self):
        table, keys = random_table(256, 0.4, seed=13)
        order = list(keys)
        derived_rng(14, 0).shuffle(order)
        remaining = set(keys)
        for x in order:
            table.delete(x)
            remaining.discard(x)
            assert verify_fill_invariant(table) is None
            fresh = ProbeTable(table.t, table.hash_fn)
            for y in remaining:
                fresh.insert(y)
            assert table.occupied_set() == fresh.occupied_set()

    def test_delete_undoes_insert(self):
        table, keys = random_table(128, 0.5, seed=15)
        before = table.occupied_set()
        x = 2**60 + 123
        assert x not in keys
        table.insert(x)
        table.delete(x)
        assert table.occupied_set() == before


class TestFillInvariant:
    def test_constructed_breach_detected(self):
        table = ProbeTable(8, FixedHash(8, {7: 1}))
        table.slots[3] = 7  # h(7)=1 but slot 2 empty
        table.n = 1
        assert verify_fill_invariant(table) == (7, 3)

    def test_empty_table_ok(self):
        assert verify_fill_invariant(ProbeTable(8, FixedHash(8))) is None

    def test_holds_after_mixed_operations(self):
        table, keys = random_table(128, 0.6, seed=17)
        rng = derived_rng(18, 0)
        live = list(keys)
        for _ in range(200):
            if live and rng.random() < 0.4:
                x = live.pop(int(rng.integers(len(live))))
                table.delete(x)
            else:
                x = int(rng.integers(0, 2**61 - 1))
                if not table.search(x).found:
                    table.insert(x)
                    live.append(x)
            assert verify_fill_invariant(table) is None


class TestRuns:
    def test_contiguous_block(self):
        table = build(16, {i: i for i in [5, 6, 7]}, [5, 6, 7])
        assert runs(table) == [Run(5, 3)]

    def test_empty_table(self):
        assert runs(ProbeTable(16, FixedHash(16))) == []

    def test_wrapping_run(self):
        table = build(16, {15: 15, 16: 0, 17: 1}, [15, 16, 17])
        assert runs(table) == [Run(15, 3)]

    def test_full_table_rejected(self):
        table = build(4, {}, [1, 2, 3])
        table.slots[3] = 99
        table.n = 4
        with pytest.raises(TableFullError):
            runs(table)

    def test_lengths_sum_to_n_and_gaps_nonempty(self):
        table, _ = random_table(256, 0.6, seed=19)
        rs = runs(table)
        assert sum(r.length for r in rs) == table.n
        for start, length in rs:
            assert table.slots[(start - 1) % table.t] is None
            assert table.slots[(start + length) % table.t] is None

    def test_run_containing(self):
        table = build(16, {i: i for i in [5, 6, 7]}, [5, 6, 7])
        assert run_containing(table, 6) == 3
        assert run_containing(table, 9) == 0
        wrap = build(16, {15: 15, 16: 0, 17: 1}, [15, 16, 17])
        assert run_containing(wrap, 0) == 3


class TestIntervalCounts:
    def test_empty(self):
        table = ProbeTable(16, FixedHash(16))
        assert interval_hash_count(table, DyadicInterval(2, 1)) == 0

    def test_counts_hashes_in_interval(self):
        table = build(16, {1: 4, 2: 5, 3: 9}, [1, 2, 3])
        assert interval_hash_count(table, DyadicInterval(2, 1)) == 2

    def test_exclude_query_key(self):
        table = build(16, {1: 4, 2: 5, 3: 9}, [1, 2, 3])
        assert interval_hash_count(table, DyadicInterval(2, 1), exclude=1) == 1

    def test_near_full_threshold(self):
        assert near_full_threshold(0) == 1
        assert near_full_threshold(1) == 2
        assert [near_full_threshold(l) for l in (2, 3, 4)] == [3, 6, 12]


class TestRunLemma:
    def test_minimal_run(self):
        table = build(16, {i: 2 for i in [1, 2, 3, 4]}, [1, 2, 3, 4])
        assert check_run_lemma(table, runs(table)[0], level=0) is None

    def test_precondition(self):
        table = build(16, {i: 2 for i in [1, 2, 3]}, [1, 2, 3])
        with pytest.raises(ValueError):
            check_run_lemma(table, runs(table)[0], level=1)

    def test_monte_carlo_no_counterexamples(self):
        for seed in range(30):
            table, _ = random_table(1 << 10, 2 / 3, seed=seed)
            counts = hash_counts(table)
            for run in runs(table):
                if run.start + run.length > table.t:
                    continue
                level = 0
                while run.length >= 1 << (level + 2):
                    assert check_run_lemma(table, run, level, counts=counts) is None
                    level += 1

    def test_query_run_lemma_monte_carlo(self):
        for seed in range(20):
            table, keys = random_table(1 << 10, 2 / 3, seed=100 + seed)
            counts = hash_counts(table)
            rng = derived_rng(200 + seed, 0)
            for q in rng.integers(0, 2**61 - 1, size=30, dtype=np.uint64):
                q = int(q)
                try:
                    assert check_query_run_lemma(table, q, counts=counts) is None
                except Exception as exc:
                    if exc.__class__.__name__ != "WrappingRunError":
                        raise

    def test_absent_probe_bound(self):
        # absent-search probes <= run length at h(q) + 1
        table, _ = random_table(512, 2 / 3, seed=23)
        for q in range(200):
            if table.search(q).found:
                continue
            hq = table.hash_fn(q)
            assert table.search(q).probes <= run_containing(table, hq) + 1


class TestOrderIndependence:
    def test_exhaustive_eight_keys(self):
        h = TrulyRandomHash(16, seed=31)
        keys = list(range(8))
        reference = None
        for perm in itertools.permutations(keys):
            table = ProbeTable(16, h)
            for x in perm:
                table.insert(x)
            occ = table.occupied_set()
            if reference is None:
                reference = occ
            assert occ == reference

    def test_random_permutations_hundred_keys(self):
        h = TrulyRandomHash(256, seed=37)
        keys = list(range(100))
        base = ProbeTable(256, h)
        for x in keys:
            base.insert(x)
        reference = base.occupied_set()
        rng = derived_rng(38, 0)
        for _ in range(100):
            order = list(keys)
            rng.shuffle(order)
            table = ProbeTable(256, h)
            for x in order:
                table.insert(x)
            assert table.occupied_set() == reference


@st.composite
def op_sequences(draw):
    ops = draw(st.lists(st.tuples(st.sampled_from(["ins", "del", "search"]),
                                  st.integers(0, 40)), max_size=60))
    return ops


@given(op_sequences())
@settings(max_examples=60, deadline=None)
def test_hypothesis_fill_invariant_and_model(ops):
    h = TrulyRandomHash(64, seed=91)
    table = ProbeTable(64, h)
    model = set()
    for op, x in ops:
        if op == "ins" and len(model) < 40:
            table.insert(x)
            model.add(x)
        elif op == "del":
            if x in model:
                table.delete(x)
                model.discard(x)
            else:
                with pytest.raises(KeyError):
                    table.delete(x)
        else:
            assert table.search(x).found == (x in model)
        assert verify_fill_invariant(table) is None
    assert set(table.keys()) == model


def test_table_size_for():
    assert table_size_for(1024) == 2048
    assert table_size_for(682) == 1024
    assert 682 / 1024 <= 2 / 3 < 683 / 1024
    assert table_size_for(1) == 2
