"""Putative noise pattern stream in burst-matched likelihood order.

Patterns are grouped into classes (m bursts, weight l). Classes are
scheduled by the integer key l + m*(offset+1), where the interlace offset
comes from the channel parameters; a memoryless channel gives offset 0.
Within a class the four boundary cases are emitted in decreasing
per-pattern probability (spanning, leading, trailing, interior), and
within a subclass patterns follow lexicographic (burst starts, burst
lengths) order. The first emission is always the all-zero pattern.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

from .gf2 import BitWord
from .markov import (
    BoundaryCase,
    MarkovParams,
    SubclassId,
    interlace_offset,
    log_subclass_prob,
    subclass_count,
)

DEFAULT_QUERY_CAP = 10_000_000

CASE_ORDER = (
    BoundaryCase.SPANNING,
    BoundaryCase.LEADING,
    BoundaryCase.TRAILING,
    BoundaryCase.INTERIOR,
)


@dataclass(frozen=True)
class AbandonmentRule:
    """Stop querying after the last class keyed at or below (max_bursts, last_weight).

    last_weight is the weight bound that applies at max_bursts; classes with
    fewer bursts run further out in weight before the key boundary cuts them
    off. max_queries is a hard backstop on total emissions.
    """

    max_bursts: int
    last_weight: int
    max_queries: int = DEFAULT_QUERY_CAP

    def __post_init__(self):
        if self.max_bursts < 1:
            raise ValueError(f"max_bursts must be >= 1, got {self.max_bursts}")
        if self.last_weight < self.max_bursts:
            raise ValueError(
                f"last_weight {self.last_weight} < max_bursts {self.max_bursts}"
            )
        if self.max_queries < 1:
            raise ValueError("max_queries must be >= 1")

    @classmethod
    def from_min_distance(cls, d: int, max_queries: int = DEFAULT_QUERY_CAP) -> "AbandonmentRule":
        """Half the minimum distance, for both the burst and weight bounds."""
        if d < 2:
            raise ValueError(f"minimum distance must be >= 2, got {d}")
        half = d // 2
        return cls(max_bursts=half, last_weight=half, max_queries=max_queries)


def class_key(bursts: int, weight: int, offset: int) -> int:
    """Scheduling key: weight + bursts*(offset+1), emitted in increasing order.

    Ties are broken toward more bursts: the class with m+1 bursts and weight
    m+1 enters immediately after the m-burst class of weight offset+m+1, one
    key below it, which reproduces the interlacing rule exactly.
    """
    return weight + bursts * (offset + 1)


def scheduled_classes(n: int, offset: int, rule: AbandonmentRule) -> list[tuple[int, int]]:
    """All (bursts, weight) classes in emission order.

    A class is scheduled iff its key does not exceed the key of
    (rule.max_bursts, rule.last_weight). With a large offset this lets
    single-burst classes run to weights far above last_weight.
    """
    stop = class_key(rule.max_bursts, rule.last_weight, offset)
    out = []
    m = 1
    while class_key(m, m, offset) <= stop and m <= (n + 1) // 2:
        l = m
        while l <= n and m <= n - l + 1 and class_key(m, l, offset) <= stop:
            out.append((m, l))
            l += 1
        m += 1
    out.sort(key=lambda ml: (class_key(ml[0], ml[1], offset), -ml[0]))
    return out


def _compositions(total: int, caps: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """Compositions of `total` into len(caps) parts, 1 <= part i <= caps[i], lex order."""
    k = len(caps)
    if k == 0:
        if total == 0:
            yield ()
        return
    tail_cap = sum(caps[1:])
    lo = max(1, total - tail_cap)
    hi = min(caps[0], total - (k - 1))
    for first in range(lo, hi + 1):
        for rest in _compositions(total - first, caps[1:]):
            yield (first,) + rest


def _burst_value(starts: tuple[int, ...], lengths: tuple[int, ...]) -> int:
    v = 0
    for s, L in zip(starts, lengths):
        v |= ((1 << L) - 1) << s
    return v


def subclass_bursts(
    n: int, m: int, l: int, case: BoundaryCase
) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """(burst starts, burst lengths) tuples of one subclass, lexicographic."""
    leading = case in (BoundaryCase.LEADING, BoundaryCase.SPANNING)
    trailing = case in (BoundaryCase.TRAILING, BoundaryCase.SPANNING)

    def emit(starts: tuple[int, ...]):
        caps = tuple(starts[i + 1] - starts[i] - 1 for i in range(m - 1))
        if trailing:
            last_len = n - starts[-1]
            rest = l - last_len
            if last_len < 1 or rest < m - 1:
                return
            for head in _compositions(rest, caps):
                yield starts, head + (last_len,)
        else:
            caps = caps + (n - starts[-1] - 1,)
            for lengths in _compositions(l, caps):
                yield starts, lengths

    def walk(prefix: tuple[int, ...]):
        j = len(prefix)
        if j == m:
            yield from emit(prefix)
            return
        lo = 0 if (j == 0 and leading) else (prefix[-1] + 2 if j else 1)
        if j == 0 and leading:
            hi = 0
        else:
            # room for this burst (>=1 bit) plus 2 bits per later burst
            hi = n - 1 - 2 * (m - j - 1)
            if trailing and j == m - 1:
                lo = max(lo, n - (l - (m - 1)))
        for s in range(lo, hi + 1):
            yield from walk(prefix + (s,))

    if m == 0:
        if l == 0:
            yield (), ()
        return
    yield from walk(())


def subclass_patterns(n: int, m: int, l: int, case: BoundaryCase) -> Iterator[int]:
    """All patterns of the subclass, sorted by (burst starts, burst lengths)."""
    for starts, lengths in subclass_bursts(n, m, l, case):
        yield _burst_value(starts, lengths)


@dataclass(frozen=True)
class PatternRecord:
    index: int
    word: BitWord
    subclass: SubclassId
    log_prob: float | None


def _plan(n: int, offset: int, rule: AbandonmentRule):
    """Emission plan: (bursts, weight, case, count) per nonempty subclass."""
    for m, l in scheduled_classes(n, offset, rule):
        for case in CASE_ORDER:
            cnt = subclass_count(n, SubclassId(m, l, case))
            if cnt:
                yield m, l, case, cnt


class PatternStream:
    """Single-owner cursor over the pattern order for one channel and rule.

    Not safe to share between concurrent decodes; create one stream per
    decode. skip_to() jumps over whole subclasses by count, so sharding a
    stream across workers costs at most one subclass walk.
    """

    def __init__(
        self,
        params: MarkovParams,
        rule: AbandonmentRule,
        offset: int | None = None,
        rounding: str = "floor",
    ):
        self.params = params
        self.rule = rule
        self.offset = interlace_offset(params, rounding) if offset is None else offset
        if not 0 <= self.offset <= params.n:
            raise ValueError(f"offset {self.offset} outside [0, {params.n}]")
        self.n = params.n
        self._index = 0
        self._exhausted = False
        self._gen = self._emit(0)

    @property
    def index(self) -> int:
        """Number of patterns emitted so far."""
        return self._index

    @property
    def exhausted(self) -> bool:
        return self._exhausted

    def _emit(self, start: int):
        idx = 0
        if start == 0:
            yield 0, SubclassId(0, 0, BoundaryCase.INTERIOR)
        idx += 1
        for m, l, case, cnt in _plan(self.n, self.offset, self.rule):
            if idx + cnt <= start:
                idx += cnt
                continue
            gen = subclass_patterns(self.n, m, l, case)
            if idx < start:
                gen = itertools.islice(gen, start - idx, None)
                idx = start
            sub = SubclassId(m, l, case)
            for v in gen:
                yield v, sub
                idx += 1

    def next_pattern(self) -> BitWord | None:
        """Next pattern, or None when the stream is exhausted or capped."""
        if self._exhausted:
            return None
        if self._index >= self.rule.max_queries:
            self._exhausted = True
            return None
        nxt = next(self._gen, None)
        if nxt is None:
            self._exhausted = True
            return None
        self._index += 1
        return BitWord(self.n, nxt[0])

    def next_record(self) -> PatternRecord | None:
        """Like next_pattern, with subclass and log-probability attached."""
        if self._exhausted:
            return None
        if self._index >= self.rule.max_queries:
            self._exhausted = True
            return None
        nxt = next(self._gen, None)
        if nxt is None:
            self._exhausted = True
            return None
        value, sub = nxt
        rec = PatternRecord(
            index=self._index,
            word=BitWord(self.n, value),
            subclass=sub,
            log_prob=log_subclass_prob(self.params, sub),
        )
        self._index += 1
        return rec

    def __iter__(self) -> "PatternStream":
        return self

    def __next__(self) -> BitWord:
        w = self.next_pattern()
        if w is None:
            raise StopIteration
        return w

    def skip_to(self, index: int) -> None:
        """Position the cursor so the next emission carries this index."""
        if index < self._index:
            raise ValueError(f"cannot rewind from {self._index} to {index}")
        if index > self.rule.max_queries:
            raise ValueError("cannot skip beyond the query cap")
        self._gen = self._emit(index)
        self._index = index


def materialize(stream: PatternStream, limit: int | None = None) -> list[BitWord]:
    """Drain a stream into a list; mainly for tests and small dumps."""
    out = []
    while limit is None or len(out) < limit:
        w = stream.next_pattern()
        if w is None:
            break
        out.append(w)
    return out


def emitted_set_contains_bsc_set(params: MarkovParams, rule: AbandonmentRule) -> bool:
    """Check the emitted set covers the memoryless-order set for the same rule.

    Materializes both streams, so intended for modest block lengths.
    """
    matched = {w.value for w in materialize(PatternStream(params, rule))}
    bsc = {w.value for w in materialize(PatternStream(params, rule, offset=0))}
    return bsc <= matched
