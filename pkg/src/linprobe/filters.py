"""Approximate-membership filter: b-bit signatures stored in a linear
probing layout.  Never answers "no" for a stored key; a non-member is a
false positive only when its signature collides with one on its scan path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .hashing import (
    DEFAULT_FIELD,
    PolynomialHash,
    derived_rng,
    new_polynomial,
    new_tabulation,
    _is_pow2,
)
from .probing import ProbeTable, TableFullError

MODES = ("independent", "paired", "hash_of_signature", "tabulation_paired")


class SignatureFilter:
    """Array of t b-bit signatures with out-of-band occupancy marks.

    Every signature value is legal; a reserved nil-signature would skew
    the false-positive rate by 2^-b, so occupancy is tracked separately.
    There is deliberately no delete operation: removing one signature may
    remove the shared evidence for other keys.
    """

    def __init__(self, t: int, b: int, hash_fn, sig_fn, mode: str = "independent"):
        if not _is_pow2(t):
            raise ValueError(f"filter size {t} must be a nonzero power of two")
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
        self.t = t
        self.b = b
        self.hash_fn = hash_fn
        self.sig_fn = sig_fn
        self.mode = mode
        self.slots = [0] * t
        self.occupied = [False] * t
        self.n = 0

    def _start(self, x: int) -> int:
        if self.mode == "hash_of_signature":
            return self.hash_fn(self.sig_fn(x))
        return self.hash_fn(x)

    def insert(self, x: int) -> bool:
        """Insert x; returns False if x was already positive (its signature
        occurs on the scan path), in which case nothing is written."""
        if self.n >= self.t - 1:
            raise TableFullError("cannot insert into a full filter")
        sig = self.sig_fn(x)
        mask = self.t - 1
        i = self._start(x)
        while self.occupied[i]:
            if self.slots[i] == sig:
                return False
            i = (i + 1) & mask
        self.slots[i] = sig
        self.occupied[i] = True
        self.n += 1
        return True

    def query(self, q: int) -> bool:
        """True iff s(q) appears among the signatures scanned from the start
        slot to the first empty slot."""
        sig = self.sig_fn(q)
        mask = self.t - 1
        i = self._start(q)
        while self.occupied[i]:
            if self.slots[i] == sig:
                return True
            i = (i + 1) & mask
        return False


def _universal_signature(b: int, seed: int, stream: int) -> Callable[[int], int]:
    """Universal b-bit signature: degree-1 polynomial mod p, low b bits."""
    poly = new_polynomial(2, 2, seed, stream=stream)
    mask = (1 << b) - 1

    def sig(x: int) -> int:
        return poly.eval_mod_p(x) & mask

    return sig


def make_filter(t: int, b: int, mode: str, seed: int, *, stream: int = 0) -> SignatureFilter:
    """Build a filter with (h, s) drawn per the requested mode.

    independent:        5-independent h, universal s, separate seed streams.
    paired:             one 5-independent value of log2(t)+b bits; h is the
                        high bits, s the low b bits.
    hash_of_signature:  like independent, but keys are placed and sought at
                        h(s(x)) -- the anti-pattern, measured for comparison.
    tabulation_paired:  one simple-tabulation output split the same way.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if not _is_pow2(t):
        raise ValueError(f"filter size {t} must be a nonzero power of two")
    log_t = t.bit_length() - 1
    if mode in ("independent", "hash_of_signature"):
        h = new_polynomial(5, t, seed, stream=2 * stream)
        s = _universal_signature(b, seed, 2 * stream + 1)
        return SignatureFilter(t, b, h, s, mode)
    if mode == "paired":
        wide = 1 << (log_t + b)
        if DEFAULT_FIELD.p < 24 * wide:
            raise ValueError("log2(t) + b too wide for the paired construction")
        poly = new_polynomial(5, wide, seed, stream=stream)
        sig_mask = (1 << b) - 1
        h = lambda x: poly(x) >> b
        s = lambda x: poly(x) & sig_mask
        hs = SignatureFilter(t, b, h, s, mode)
        return hs
    # tabulation_paired
    tab = new_tabulation(4, 16, log_t + b, seed, stream=stream)
    sig_mask = (1 << b) - 1
    return SignatureFilter(t, b, lambda x: tab(x) >> b, lambda x: tab(x) & sig_mask, mode)


@dataclass(frozen=True)
class FprReport:
    mode: str
    b: int
    n: int
    t: int
    trials: int
    false_positives: int
    fpr: float
    mean_scan_keys: float  # E[|X(q)|] on the shadow exact table


def sample_distinct_keys(rng: np.random.Generator, count: int, bound: int) -> list[int]:
    """`count` distinct uniform keys below `bound` (bound >> count)."""
    seen: dict[int, None] = {}
    while len(seen) < count:
        draw = rng.integers(0, bound, size=count, dtype=np.uint64)
        for k in draw:
            seen.setdefault(int(k), None)
            if len(seen) == count:
                break
    return list(seen)


def measure_fpr(
    t: int,
    b: int,
    mode: str,
    n: int,
    trials: int,
    seed: int,
    *,
    stream: int = 0,
) -> FprReport:
    """Build a filter over n random keys and measure the false-positive
    rate on `trials` non-member queries.

    A shadow exact table using the same placement hash records, per query,
    the number of keys on the scan path from the query's start slot to the
    first empty slot; the mean is the scale of the theoretical FPR bound.
    """
    if n >= t:
        raise ValueError("filter must keep at least one empty slot")
    if trials < 1:
        raise ValueError("need at least one query")
    flt = make_filter(t, b, mode, seed, stream=stream)
    shadow = ProbeTable(t, flt._start)
    rng = derived_rng(seed, stream + 1_000_003)
    keys = sample_distinct_keys(rng, n + trials, DEFAULT_FIELD.p)
    stored, queries = keys[:n], keys[n:]
    for x in stored:
        flt.insert(x)
        shadow.insert(x)
    false_pos = 0
    scan_total = 0
    for q in queries:
        if flt.query(q):
            false_pos += 1
        scan_total += shadow.search(q).probes - 1
    return FprReport(
        mode=mode,
        b=b,
        n=n,
        t=t,
        trials=trials,
        false_positives=false_pos,
        fpr=false_pos / trials,
        mean_scan_keys=scan_total / trials,
    )


def scan_keys(table: ProbeTable, start: int) -> list[int]:
    """Keys encountered scanning cyclically from `start` to the first
    empty slot, in scan order."""
    out = []
    mask = table.t - 1
    i = start
    while table.slots[i] is not None:
        out.append(table.slots[i])
        i = (i + 1) & mask
    return out


def subsequence_scan_check(
    keys: list[int],
    subsequence_mask: list[bool],
    hash_fn,
    t: int,
    probe_start: int,
) -> Optional[dict]:
    """Insert the full key sequence and the masked subsequence into two
    exact tables with the same hash; every key scanned from `probe_start`
    in the subsequence table must also be scanned in the full table.

    Only membership is checked: dropping keys can shrink a later key's
    displacement, so the two scans may encounter shared keys in different
    relative orders.  Membership is the property that makes a filter's
    false positive traceable to a signature collision on the exact scan
    path.

    Returns None on success, else a violation witness.
    """
    if len(subsequence_mask) != len(keys):
        raise ValueError("mask length must match key count")
    full = ProbeTable(t, hash_fn)
    sub = ProbeTable(t, hash_fn)
    for x in keys:
        full.insert(x)
    for x, keep in zip(keys, subsequence_mask):
        if keep:
            sub.insert(x)
    full_scan = scan_keys(full, probe_start)
    sub_scan = scan_keys(sub, probe_start)
    encountered = set(full_scan)
    for x in sub_scan:
        if x not in encountered:
            return {"full_scan": full_scan, "sub_scan": sub_scan, "missing": x}
    return None
