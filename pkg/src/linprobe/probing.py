"""Linear probing over a cyclic power-of-two table, with true deletion
(backward shift, no tombstones) and run / dyadic-interval analytics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .hashing import _is_pow2


class SearchResult(NamedTuple):
    found: bool
    position: Optional[int]
    probes: int


class Run(NamedTuple):
    start: int
    length: int


@dataclass(frozen=True)
class DyadicInterval:
    """The aligned slot interval [index * 2^level, (index + 1) * 2^level)."""

    level: int
    index: int

    @property
    def length(self) -> int:
        return 1 << self.level

    @property
    def start(self) -> int:
        return self.index << self.level

    def __contains__(self, slot: int) -> bool:
        return self.start <= slot < self.start + self.length


def near_full_threshold(level: int) -> int:
    """Keys needed for an interval of length 2^level to count as near-full:
    ceil(3 * 2^level / 4)."""
    return -(-3 * (1 << level) // 4)


class TableFullError(RuntimeError):
    pass


class ProbeTable:
    """Open-addressing hash table with cyclic linear probing.

    Probe counts include the terminating slot (empty or match), so they
    are always >= 1.  Duplicate inserts are no-ops.
    """

    def __init__(self, t: int, hash_fn):
        if not _is_pow2(t):
            raise ValueError(f"table size {t} must be a nonzero power of two")
        self.t = t
        self.hash_fn = hash_fn
        self.slots: list[Optional[int]] = [None] * t
        self.n = 0

    @property
    def load(self) -> float:
        return self.n / self.t

    def keys(self):
        return (x for x in self.slots if x is not None)

    def insert(self, x: int) -> tuple[int, int]:
        """Place x at the first empty slot scanning from h(x).

        Returns (position, probes).  Re-inserting a present key leaves
        the table unchanged and reports the key's position.
        """
        if self.n >= self.t - 1 and not self._present(x):
            raise TableFullError("cannot insert into a full table")
        slots, mask = self.slots, self.t - 1
        i = self.hash_fn(x)
        probes = 1
        while slots[i] is not None:
            if slots[i] == x:
                return i, probes
            i = (i + 1) & mask
            probes += 1
        slots[i] = x
        self.n += 1
        return i, probes

    def _present(self, x: int) -> bool:
        return self.search(x).found

    def search(self, x: int) -> SearchResult:
        """Scan from h(x) until x or an empty slot.  For an absent key the
        scan is identical to the one insert would perform."""
        slots, mask = self.slots, self.t - 1
        i = self.hash_fn(x)
        probes = 1
        while slots[i] is not None:
            if slots[i] == x:
                return SearchResult(True, i, probes)
            i = (i + 1) & mask
            probes += 1
        return SearchResult(False, None, probes)

    def delete(self, x: int) -> None:
        """Remove x and refill the hole by backward shifting.

        Scanning from the hole, a later key y is moved back iff its own
        scan from h(y) would have reached the hole, i.e. h(y) lies
        cyclically outside (hole, current].  Stops at the first empty
        slot; the fill invariant is restored.
        """
        found = self.search(x)
        if not found.found:
            raise KeyError(f"key {x} not in table")
        slots, mask = self.slots, self.t - 1
        hole = found.position
        j = (hole + 1) & mask
        while slots[j] is not None:
            hy = self.hash_fn(slots[j])
            # distance from h(y) to j, vs distance from hole to j
            if (j - hy) & mask >= (j - hole) & mask:
                slots[hole] = slots[j]
                slots[j] = None
                hole = j
            j = (j + 1) & mask
        slots[hole] = None
        self.n -= 1

    def occupied_set(self) -> frozenset[int]:
        return frozenset(i for i, s in enumerate(self.slots) if s is not None)


def verify_fill_invariant(table: ProbeTable):
    """Check that every stored key's cyclic path from its hash slot to its
    storage slot is fully occupied.  Returns None, or (key, position) for
    the first violation."""
    slots, mask = table.slots, table.t - 1
    for pos, x in enumerate(slots):
        if x is None:
            continue
        i = table.hash_fn(x)
        while i != pos:
            if slots[i] is None:
                return x, pos
            i = (i + 1) & mask
    return None


def runs(table: ProbeTable) -> list[Run]:
    """Maximal cyclic intervals of occupied slots, in slot order of their
    (cyclic) start.  Requires at least one empty slot."""
    t, slots = table.t, table.slots
    if table.n >= t:
        raise TableFullError("a full table has no maximal runs")
    if table.n == 0:
        return []
    # scan from just past some empty slot so runs never straddle the origin
    origin = next(i for i in range(t) if slots[i] is None)
    out = []
    start, length = None, 0
    for off in range(1, t + 1):
        i = (origin + off) % t
        if slots[i] is not None:
            if start is None:
                start = i
            length += 1
        elif start is not None:
            out.append(Run(start, length))
            start, length = None, 0
    out.sort()
    return out


def run_containing(table: ProbeTable, slot: int) -> int:
    """Length of the run covering `slot`; 0 if the slot is empty."""
    slots, mask = table.slots, table.t - 1
    if slots[slot] is None:
        return 0
    if table.n >= table.t:
        raise TableFullError("a full table has no maximal runs")
    length = 1
    i = (slot + 1) & mask
    while slots[i] is not None:
        length += 1
        i = (i + 1) & mask
    i = (slot - 1) & mask
    while slots[i] is not None:
        length += 1
        i = (i - 1) & mask
    return length


def hash_counts(table: ProbeTable) -> np.ndarray:
    """Per-slot histogram of the stored keys' hash values; the analytics
    below take it precomputed to stay linear over many checks."""
    counts = np.zeros(table.t, dtype=np.int64)
    for x in table.keys():
        counts[table.hash_fn(x)] += 1
    return counts


def interval_hash_count(
    table: ProbeTable,
    interval: DyadicInterval,
    exclude: Optional[int] = None,
    counts: Optional[np.ndarray] = None,
) -> int:
    """Number of stored keys hashing into the interval, optionally not
    counting the key `exclude`."""
    if counts is None:
        counts = hash_counts(table)
    c = int(counts[interval.start : interval.start + interval.length].sum())
    if exclude is not None and table.search(exclude).found:
        if table.hash_fn(exclude) in interval:
            c -= 1
    return c


class WrappingRunError(ValueError):
    """Raised for analytics that are only defined on non-wrapping runs."""


def check_run_lemma(
    table: ProbeTable,
    run: Run,
    level: int,
    counts: Optional[np.ndarray] = None,
):
    """For a non-wrapping run of length >= 2^(level+2), verify that one of
    the first four level-intervals intersecting it is near-full.

    Returns None on success, or a counterexample dict.
    """
    if run.length < 1 << (level + 2):
        raise ValueError(f"run length {run.length} < 2^{level + 2}")
    if run.start + run.length > table.t:
        raise WrappingRunError("run wraps past the last slot")
    if counts is None:
        counts = hash_counts(table)
    first = run.start >> level
    threshold = near_full_threshold(level)
    observed = []
    for idx in range(first, first + 4):
        iv = DyadicInterval(level, idx)
        c = interval_hash_count(table, iv, counts=counts)
        if c >= threshold:
            return None
        observed.append(c)
    return {
        "run": run,
        "level": level,
        "intervals": list(range(first, first + 4)),
        "counts": observed,
        "threshold": threshold,
    }


def check_query_run_lemma(
    table: ProbeTable,
    q: int,
    counts: Optional[np.ndarray] = None,
):
    """For a query key q whose (non-wrapping) run has length r >= 4, with
    level l chosen so r is in [2^(l+2), 2^(l+3)), verify that one of the
    12 l-intervals around the one containing h(q) (8 left, own, 3 right)
    is near-full, not counting q itself.

    Returns None on success or when no level applies; raises
    WrappingRunError for wrapping runs; returns a counterexample dict on
    failure.
    """
    hq = table.hash_fn(q)
    r = run_containing(table, hq)
    if r < 4:
        return None
    level = r.bit_length() - 3  # largest l with 2^(l+2) <= r
    assert 1 << (level + 2) <= r < 1 << (level + 3)
    for run in runs(table):
        if (hq - run.start) % table.t < run.length:
            if run.start + run.length > table.t:
                raise WrappingRunError("run containing h(q) wraps")
            break
    if counts is None:
        counts = hash_counts(table)
    own = hq >> level
    threshold = near_full_threshold(level)
    max_index = table.t >> level
    observed = []
    for idx in range(own - 8, own + 4):
        if not 0 <= idx < max_index:
            continue
        iv = DyadicInterval(level, idx)
        c = interval_hash_count(table, iv, exclude=q, counts=counts)
        if c >= threshold:
            return None
        observed.append((idx, c))
    return {
        "query": q,
        "run_length": r,
        "level": level,
        "counts": observed,
        "threshold": threshold,
    }


def table_size_for(n: int, max_load: float = 2 / 3) -> int:
    """Smallest power of two t with n/t <= max_load."""
    if n < 1:
        return 2
    t = 1 << math.ceil(math.log2(n / max_load))
    while n / t > max_load:
        t *= 2
    return t
