"""Stream-order syndrome index: the linear-code fast path for the guess loop.

For a linear code, querying y xor z for membership is equivalent to
comparing syndromes: H(y xor z) = 0 iff Hz = Hy. Walking the pattern
stream once and recording, for every reachable syndrome, the first stream
index and pattern that achieves it turns each decode into a single lookup
with exactly the same outcome and query count as the reference loop.
Abandonment becomes a lookup miss, which is what makes large Monte Carlo
sweeps affordable: a miss no longer walks millions of patterns.

Construction is vectorized for one-, two-, three-burst and unit-burst
subclasses, which covers everything the stock abandonment rules schedule;
other subclasses fall back to the same generator the reference stream
uses. Codes with syndromes up to 24 bits get a dense first-hit table;
wider syndromes use a sorted array with binary search.
"""

from __future__ import annotations

import numpy as np

from .codes import LinearCode
from .gf2 import BitWord
from .markov import BoundaryCase, SubclassId, subclass_count
from .patterns import AbandonmentRule, CASE_ORDER, scheduled_classes, subclass_bursts

_M64 = (1 << 64) - 1
_DENSE_BITS = 24


class CodeTables:
    """Per-code lookup tables shared by index builds and batch decoding."""

    def __init__(self, code: LinearCode):
        self.code = code
        n, r = code.n, code.n - code.k
        if r > 64:
            raise ValueError("syndrome wider than 64 bits is unsupported")
        self.syn_bits = r
        self.h_bits = np.array(code.h.to_lists(), dtype=np.uint8)
        self.syn_weights = (1 << np.arange(r, dtype=np.uint64)).astype(np.uint64)
        col_syn = [0] * n
        for j in range(n):
            s = 0
            for i in range(r):
                s |= ((code.h.rows[i] >> j) & 1) << i
            col_syn[j] = s
        # burst_syn[s][L] = syndrome of the length-L burst starting at s
        self.burst_syn = [[0] * (n - s + 1) for s in range(n)]
        self.burst_lo = [[0] * (n - s + 1) for s in range(n)]
        self.burst_hi = [[0] * (n - s + 1) for s in range(n)]
        for s in range(n):
            for L in range(1, n - s + 1):
                self.burst_syn[s][L] = self.burst_syn[s][L - 1] ^ col_syn[s + L - 1]
                mask = ((1 << L) - 1) << s
                self.burst_lo[s][L] = mask & _M64
                self.burst_hi[s][L] = mask >> 64
        shape = (n, n + 1)
        self.bs_np = np.zeros(shape, dtype=np.uint64)
        self.lo_np = np.zeros(shape, dtype=np.uint64)
        self.hi_np = np.zeros(shape, dtype=np.uint64)
        for s in range(n):
            row_len = n - s + 1
            self.bs_np[s, :row_len] = self.burst_syn[s]
            self.lo_np[s, :row_len] = self.burst_lo[s]
            self.hi_np[s, :row_len] = self.burst_hi[s]

    def syndromes_of_bits(self, bits: np.ndarray) -> np.ndarray:
        """Packed syndromes of (B, n) uint8 words."""
        par = (bits.astype(np.float32) @ self.h_bits.T.astype(np.float32)).astype(np.int64) & 1
        return ((par.astype(np.uint64)) * self.syn_weights).sum(axis=1).astype(np.uint64)


class DenseStreamIndex:
    """First-hit index backed by a direct-addressed table over all syndromes."""

    def __init__(self, syn_bits: int, n: int):
        size = 1 << syn_bits
        self.first_idx = np.full(size, -1, dtype=np.int64)
        self.lane_lo = np.zeros(size, dtype=np.uint64)
        self.lane_hi = np.zeros(size, dtype=np.uint64)
        self.stream_len = 0
        self.n = n

    def _absorb(self, syn: np.ndarray, lo: np.ndarray, hi: np.ndarray, base: int) -> None:
        s = syn.astype(np.int64)
        fresh = self.first_idx[s] < 0
        if not fresh.any():
            return
        s, lo, hi = s[fresh], lo[fresh], hi[fresh]
        idx = base + np.flatnonzero(fresh)
        # reversed write: earliest duplicate within the batch wins
        self.first_idx[s[::-1]] = idx[::-1]
        self.lane_lo[s[::-1]] = lo[::-1]
        self.lane_hi[s[::-1]] = hi[::-1]

    def lookup_batch(self, syns: np.ndarray):
        idx = self.first_idx[syns.astype(np.int64)]
        return idx >= 0, idx, self.lane_lo[syns.astype(np.int64)], self.lane_hi[syns.astype(np.int64)]

    def lookup(self, syn: int):
        idx = int(self.first_idx[syn])
        if idx < 0:
            return None
        return idx, (int(self.lane_hi[syn]) << 64) | int(self.lane_lo[syn])


class SortedStreamIndex:
    """First-hit index as sorted syndromes plus binary search."""

    def __init__(self, sorted_syn, first_idx, lane_lo, lane_hi, stream_len, n):
        self.sorted_syn = sorted_syn
        self.first_idx = first_idx
        self.lane_lo = lane_lo
        self.lane_hi = lane_hi
        self.stream_len = stream_len
        self.n = n

    def lookup_batch(self, syns: np.ndarray):
        pos = np.searchsorted(self.sorted_syn, syns)
        pos_c = np.minimum(pos, len(self.sorted_syn) - 1)
        hit = self.sorted_syn[pos_c] == syns
        return hit, self.first_idx[pos_c], self.lane_lo[pos_c], self.lane_hi[pos_c]

    def lookup(self, syn: int):
        hit, idx, lo, hi = self.lookup_batch(np.array([syn], dtype=np.uint64))
        if not hit[0]:
            return None
        return int(idx[0]), (int(hi[0]) << 64) | int(lo[0])


StreamIndex = DenseStreamIndex | SortedStreamIndex


def _ragged_arange(counts: np.ndarray, starts: np.ndarray) -> np.ndarray:
    """Concatenate arange(starts[i], starts[i] + counts[i]) for all i."""
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    idx = np.arange(total, dtype=np.int64)
    offsets = np.repeat(np.cumsum(counts) - counts, counts)
    return idx - offsets + np.repeat(starts, counts)


def _emit_two_burst(tables, n, l, case, put) -> bool:
    """Two-burst subclass: ragged (second start, first length) batches."""
    leading = case in (BoundaryCase.LEADING, BoundaryCase.SPANNING)
    trailing = case in (BoundaryCase.TRAILING, BoundaryCase.SPANNING)
    s1_range = (0,) if leading else range(1, n - 2)
    for s1 in s1_range:
        if trailing:
            s2 = np.arange(max(s1 + 2, n - l + 1), n, dtype=np.int64)
            l1 = l - n + s2
            keep = (l1 >= 1) & (l1 <= s2 - s1 - 1)
            s2, l1 = s2[keep], l1[keep]
        else:
            s2_vals = np.arange(s1 + 2, n - 1, dtype=np.int64)
            lo1 = np.maximum(1, l - (n - s2_vals - 1))
            hi1 = np.minimum(s2_vals - s1 - 1, l - 1)
            counts = np.maximum(0, hi1 - lo1 + 1)
            s2 = np.repeat(s2_vals, counts)
            l1 = _ragged_arange(counts, lo1)
        if s2.size == 0:
            continue
        l2 = l - l1
        syn = tables.bs_np[s1, l1] ^ tables.bs_np[s2, l2]
        lo = tables.lo_np[s1, l1] | tables.lo_np[s2, l2]
        hi = tables.hi_np[s1, l1] | tables.hi_np[s2, l2]
        if not put(syn, lo, hi):
            return False
    return True


_THREE_BURST_PAIR_LIMIT = 512


def _emit_three_burst(tables, n, l, case, put) -> bool:
    """Three-burst subclass: per (s1, s2), batch over (s3, length split).

    The flattening is s3-major with (L1, L2) pairs pre-sorted, matching the
    (starts, lengths) lexicographic emission order.
    """
    leading = case in (BoundaryCase.LEADING, BoundaryCase.SPANNING)
    trailing = case in (BoundaryCase.TRAILING, BoundaryCase.SPANNING)
    pairs = [
        (l1, l2)
        for l1 in range(1, l - 1)
        for l2 in range(1, l - l1)
    ]
    pl1 = np.array([a for a, _ in pairs], dtype=np.int64)
    pl2 = np.array([b for _, b in pairs], dtype=np.int64)
    pl3 = l - pl1 - pl2
    s1_range = (0,) if leading else range(1, n - 4)
    for s1 in s1_range:
        for s2 in range(s1 + 2, n - 2):
            u1 = s2 - s1 - 1
            s3 = np.arange(s2 + 2, n, dtype=np.int64)
            if trailing:
                ok3 = pl3[None, :] == (n - s3)[:, None]
            else:
                ok3 = pl3[None, :] <= (n - s3 - 1)[:, None]
            mask = (pl1[None, :] <= u1) & (pl2[None, :] <= (s3 - s2 - 1)[:, None]) & ok3
            rows, cols = np.nonzero(mask)
            if rows.size == 0:
                continue
            s3f = s3[rows]
            l1f, l2f, l3f = pl1[cols], pl2[cols], pl3[cols]
            syn = tables.bs_np[s1, l1f] ^ tables.bs_np[s2, l2f] ^ tables.bs_np[s3f, l3f]
            lo = tables.lo_np[s1, l1f] | tables.lo_np[s2, l2f] | tables.lo_np[s3f, l3f]
            hi = tables.hi_np[s1, l1f] | tables.hi_np[s2, l2f] | tables.hi_np[s3f, l3f]
            if not put(syn, lo, hi):
                return False
    return True


def _emit_unit_bursts(tables, n, m, case, put) -> bool:
    """Weight-equals-bursts subclass (all lengths 1), ragged over the last two."""
    leading = case in (BoundaryCase.LEADING, BoundaryCase.SPANNING)
    trailing = case in (BoundaryCase.TRAILING, BoundaryCase.SPANNING)

    def last_two(prefix_end: int, syn0: int, lo0: int, hi0: int) -> bool:
        # positions for burst m-1 then burst m, both length 1
        a_lo = prefix_end + 2 if prefix_end >= 0 else (1 if not leading else 0)
        if trailing:
            a = np.arange(a_lo, n - 2, dtype=np.int64)
            if a.size == 0:
                return True
            syn = syn0 ^ tables.bs_np[a, 1] ^ np.uint64(tables.burst_syn[n - 1][1])
            lo = lo0 | tables.lo_np[a, 1] | np.uint64(tables.burst_lo[n - 1][1])
            hi = hi0 | tables.hi_np[a, 1] | np.uint64(tables.burst_hi[n - 1][1])
            return put(syn, lo, hi)
        a_vals = np.arange(a_lo, n - 3, dtype=np.int64)
        if a_vals.size == 0:
            return True
        counts = n - 3 - a_vals  # partner burst runs over [a+2, n-2]
        keep = counts > 0
        a_vals, counts = a_vals[keep], counts[keep]
        if a_vals.size == 0:
            return True
        a = np.repeat(a_vals, counts)
        b = _ragged_arange(counts, a_vals + 2)
        syn = syn0 ^ tables.bs_np[a, 1] ^ tables.bs_np[b, 1]
        lo = lo0 | tables.lo_np[a, 1] | tables.lo_np[b, 1]
        hi = hi0 | tables.hi_np[a, 1] | tables.hi_np[b, 1]
        return put(syn, lo, hi)

    def walk(level: int, prev: int, syn0: int, lo0: int, hi0: int) -> bool:
        if level == m - 2:
            return last_two(prev, syn0, lo0, hi0)
        if level == 0 and leading:
            rng = (0,)
        else:
            start = prev + 2 if level else 1
            stop = n - 1 - 2 * (m - level - 1)
            rng = range(start, stop + 1)
        for s in rng:
            if not walk(
                level + 1,
                s,
                syn0 ^ tables.burst_syn[s][1],
                lo0 | tables.burst_lo[s][1],
                hi0 | tables.burst_hi[s][1],
            ):
                return False
        return True

    if m == 2:
        return _emit_two_burst(tables, n, m, case, put)
    return walk(0, -1, 0, 0, 0)


def _emit_generic(tables, n, m, l, case, put, room: int) -> bool:
    """Fallback through the reference enumeration, buffered."""
    syn_l, lo_l, hi_l = [], [], []
    bsyn, blo, bhi = tables.burst_syn, tables.burst_lo, tables.burst_hi
    for starts, lengths in subclass_bursts(n, m, l, case):
        s = lo = hi = 0
        for st, ln in zip(starts, lengths):
            s ^= bsyn[st][ln]
            lo |= blo[st][ln]
            hi |= bhi[st][ln]
        syn_l.append(s)
        lo_l.append(lo)
        hi_l.append(hi)
        if len(syn_l) >= room:
            break
    if not syn_l:
        return True
    return put(
        np.array(syn_l, dtype=np.uint64),
        np.array(lo_l, dtype=np.uint64),
        np.array(hi_l, dtype=np.uint64),
    )


def build_index(
    code: LinearCode, offset: int, rule: AbandonmentRule, tables: CodeTables | None = None
) -> StreamIndex:
    """Walk the full pattern stream once, recording first-hit syndromes."""
    n = code.n
    if tables is None:
        tables = CodeTables(code)
    cap = rule.max_queries
    dense = tables.syn_bits <= _DENSE_BITS

    if dense:
        index = DenseStreamIndex(tables.syn_bits, n)
    else:
        parts: list[tuple[np.ndarray, np.ndarray, np.ndarray]] = []

    total = 0

    def put(syn, lo, hi) -> bool:
        nonlocal total
        room = cap - total
        if room <= 0:
            return False
        syn = np.asarray(syn, dtype=np.uint64)
        lo = np.asarray(lo, dtype=np.uint64)
        hi = np.asarray(hi, dtype=np.uint64)
        if len(syn) > room:
            syn, lo, hi = syn[:room], lo[:room], hi[:room]
        if dense:
            index._absorb(syn, lo, hi, total)
        else:
            parts.append((syn, lo, hi))
        total += len(syn)
        return total < cap

    zero = np.zeros(1, dtype=np.uint64)
    alive = put(zero, zero, zero)
    for m, l in scheduled_classes(n, offset, rule):
        if not alive:
            break
        for case in CASE_ORDER:
            if not alive:
                break
            if subclass_count(n, SubclassId(m, l, case)) == 0:
                continue
            if m == 1 or (m >= 4 and l > m):
                alive = _emit_generic(tables, n, m, l, case, put, cap - total)
            elif m == 2:
                alive = _emit_two_burst(tables, n, l, case, put)
            elif m == 3 and len_pairs_small(l):
                alive = _emit_three_burst(tables, n, l, case, put)
            elif m == 3:
                alive = _emit_generic(tables, n, m, l, case, put, cap - total)
            else:
                alive = _emit_unit_bursts(tables, n, m, case, put)

    if dense:
        index.stream_len = total
        return index
    syn = np.concatenate([p[0] for p in parts])
    lo = np.concatenate([p[1] for p in parts])
    hi = np.concatenate([p[2] for p in parts])
    # concatenation order == emission order, so first occurrence == stream index
    uniq, first = np.unique(syn, return_index=True)
    return SortedStreamIndex(
        sorted_syn=uniq,
        first_idx=first.astype(np.int64),
        lane_lo=lo[first],
        lane_hi=hi[first],
        stream_len=total,
        n=n,
    )


def len_pairs_small(l: int) -> bool:
    return (l - 1) * (l - 2) // 2 <= _THREE_BURST_PAIR_LIMIT


def pack_bits(bits: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(B, nbits<=128) uint8 -> two uint64 lanes per row (bit j = element j)."""
    b, nbits = bits.shape
    if nbits > 128:
        raise ValueError("pack_bits supports up to 128 bits")
    padded = np.zeros((b, 128), dtype=np.uint8)
    padded[:, :nbits] = bits
    lanes = np.packbits(padded, axis=1, bitorder="little").view("<u8")
    return np.ascontiguousarray(lanes[:, 0]), np.ascontiguousarray(lanes[:, 1])


def word_to_lanes(w: BitWord) -> tuple[int, int]:
    return w.value & _M64, w.value >> 64
