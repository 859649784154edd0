"""Universal guess-and-check decoding loop.

Subtract candidate noise patterns from the received word in stream order
and test code-book membership; the first hit is the decoding. Membership
is an opaque predicate, so any code-book plugs in, linear or not.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Union

from .gf2 import BitWord, mat_vec_mul
from .patterns import PatternStream


class DecodeStatus(Enum):
    DECODED = "decoded"
    ABANDONED = "abandoned"


@dataclass(frozen=True)
class DecodeOutcome:
    status: DecodeStatus
    codeword: BitWord | None
    inferred_noise: BitWord | None
    queries: int

    @property
    def decoded(self) -> bool:
        return self.status is DecodeStatus.DECODED


def membership(code, w: BitWord) -> bool:
    """True iff H @ w = 0 for the code's parity-check matrix."""
    h = code.h
    if h.ncols != w.n:
        raise ValueError(f"length mismatch: word {w.n}, code block {h.ncols}")
    v = w.value
    for row in h.rows:
        if (row & v).bit_count() & 1:
            return False
    return True


MembershipFn = Callable[[BitWord], bool]


def grand_decode(
    y: BitWord,
    code_or_membership: Union[MembershipFn, object],
    stream: PatternStream,
) -> DecodeOutcome:
    """Decode y by querying y xor z for each stream pattern z until a hit.

    Returns the first hit as (codeword, inferred noise, query count), or an
    abandonment carrying the full query count once the stream exhausts.
    The stream must be fresh; the query count equals 1 + the stream index
    of the hit.
    """
    if callable(code_or_membership):
        is_member = code_or_membership
    else:
        code = code_or_membership
        if code.n != y.n:
            raise ValueError(f"length mismatch: word {y.n}, code block {code.n}")
        is_member = lambda w: membership(code, w)
    if stream.index != 0:
        raise ValueError(f"stream already advanced to index {stream.index}")
    if stream.n != y.n:
        raise ValueError(f"length mismatch: word {y.n}, stream {stream.n}")

    queries = 0
    while True:
        z = stream.next_pattern()
        if z is None:
            return DecodeOutcome(DecodeStatus.ABANDONED, None, None, queries)
        queries += 1
        candidate = y ^ z
        if is_member(candidate):
            return DecodeOutcome(DecodeStatus.DECODED, candidate, z, queries)


def syndrome(code, w: BitWord) -> BitWord:
    """H @ w as a word of length n - k."""
    return mat_vec_mul(code.h, w)
