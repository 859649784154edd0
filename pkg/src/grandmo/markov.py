"""Exact probability model of two-state Markov (Gilbert) burst noise.

A binary channel flips bit i exactly when a hidden two-state chain is in
the Bad state at step i. Transitions: Good->Bad with probability b,
Bad->Good with probability g. The chain starts from its stationary
distribution, so the marginal flip rate is p = b/(b+g) and the lag-1
correlation of the flip process is 1-b-g.

Noise words are grouped into subclasses (burst count, total weight,
boundary case); every word in a subclass has the same probability, which
this module evaluates in closed form in the log domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from math import comb, log

from .gf2 import BitWord

_CORR_TOL = 1e-12


class BoundaryCase(Enum):
    """Boundary condition of a noise word's first and last symbols."""

    INTERIOR = "interior"  # begins and ends with 0
    LEADING = "leading"  # begins with 1, ends with 0
    TRAILING = "trailing"  # begins with 0, ends with 1
    SPANNING = "spanning"  # begins and ends with 1

    def __repr__(self) -> str:
        return f"BoundaryCase.{self.name}"


@dataclass(frozen=True)
class SubclassId:
    """Family of length-n words with `bursts` runs of 1s and `weight` 1s total."""

    bursts: int
    weight: int
    case: BoundaryCase


def validate_subclass(sub: SubclassId, n: int, strict: bool = True) -> None:
    """Check the subclass fields; strict mode also rejects impossible cases."""
    m, l = sub.bursts, sub.weight
    if m < 0 or l < 0:
        raise ValueError(f"negative subclass fields: {sub}")
    if m == 0:
        if l != 0 or sub.case is not BoundaryCase.INTERIOR:
            raise ValueError(f"zero bursts requires the interior all-zero class: {sub}")
        return
    if not (m <= l <= n):
        raise ValueError(f"weight {l} out of range [{m}, {n}] for {m} bursts")
    if m > n - l + 1:
        raise ValueError(f"{m} bursts of total weight {l} do not fit in {n} bits")
    if strict and sub.case is BoundaryCase.SPANNING and m == 1 and l != n:
        raise ValueError("a single burst touching both ends must fill the word")


@dataclass(frozen=True)
class MarkovParams:
    """Gilbert channel transition probabilities and block length.

    b = P(Good->Bad), g = P(Bad->Good). Supported regime: 0 < b < g <= 1
    and nonnegative correlation 1-b-g >= 0 (b = 1-g is the memoryless BSC
    boundary). Negatively correlated chains are rejected: the generator's
    likelihood scheduling relies on spanning >= leading/trailing >= interior
    per-pattern ordering, which flips sign there.
    """

    b: float
    g: float
    n: int

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError(f"block length must be positive, got {self.n}")
        if not 0.0 < self.b < self.g <= 1.0:
            raise ValueError(
                f"need 0 < b < g <= 1, got b={self.b}, g={self.g}"
                " (b = g would mean flip rate 1/2)"
            )
        if 1.0 - self.b - self.g < -_CORR_TOL:
            raise ValueError(
                f"negatively correlated chain unsupported: 1-b-g = {1.0 - self.b - self.g:.3g}"
            )

    @classmethod
    def from_p_and_g(cls, p: float, g: float, n: int) -> "MarkovParams":
        """Build params from the stationary flip rate p and burst-exit rate g."""
        if not 0.0 < p < 0.5:
            raise ValueError(f"stationary flip rate must be in (0, 1/2), got {p}")
        if not 0.0 < g <= 1.0:
            raise ValueError(f"burst-exit probability must be in (0, 1], got {g}")
        return cls(b=p * g / (1.0 - p), g=g, n=n)

    @property
    def p(self) -> float:
        return self.b / (self.b + self.g)

    @property
    def correlation(self) -> float:
        return 1.0 - self.b - self.g

    @property
    def is_memoryless(self) -> bool:
        return abs(self.correlation) <= _CORR_TOL


def log_subclass_prob(params: MarkovParams, sub: SubclassId) -> float:
    """Natural-log probability of any single word in the subclass.

    Interior case, m bursts of total weight l in n bits:

        log P = log(g/(1-b)) + n log(1-b) - log(b+g)
                + m log(bg / ((1-b)(1-g))) + l log((1-g)/(1-b))

    A boundary touching 1 (leading or trailing) multiplies by (1-b)/g;
    spanning multiplies by ((1-b)/g)^2. At the BSC point b = 1-g all cases
    collapse to (1-p)^(n-l) p^l.
    """
    validate_subclass(sub, params.n)
    b, g, n = params.b, params.g, params.n
    m, l = sub.bursts, sub.weight
    lp = (
        log(g / (1.0 - b))
        + n * log(1.0 - b)
        - log(b + g)
        + m * log(b * g / ((1.0 - b) * (1.0 - g)))
        + l * log((1.0 - g) / (1.0 - b))
    )
    edge = log((1.0 - b) / g)
    if sub.case in (BoundaryCase.LEADING, BoundaryCase.TRAILING):
        lp += edge
    elif sub.case is BoundaryCase.SPANNING:
        lp += 2.0 * edge
    return lp


def interlace_offset(params: MarkovParams, rounding: str = "floor") -> int:
    """Weight headroom before patterns with one more burst enter the schedule.

    Solves "interior pattern with m bursts and weight l equals spanning
    pattern with m+1 bursts and weight l - offset" for the offset:

        offset = log(b/g) / log((1-g)/(1-b)) - 1

    clamped to [0, n]. Memoryless channels give 0. The crossing is a real
    number; `rounding` selects floor (default, never interlacing earlier
    than the true crossing) or round (sensitivity checks).
    """
    if params.is_memoryless:
        return 0
    num = log(params.b / params.g)
    den = log((1.0 - params.g) / (1.0 - params.b))
    raw = num / den - 1.0
    if rounding == "floor":
        val = math.floor(raw)
    elif rounding == "round":
        val = round(raw)
    else:
        raise ValueError(f"rounding must be 'floor' or 'round', got {rounding!r}")
    return max(0, min(params.n, val))


def _c(a: int, k: int) -> int:
    return comb(a, k) if 0 <= k <= a else 0


def subclass_count(n: int, sub: SubclassId) -> int:
    """Number of length-n words with the subclass's bursts, weight, and case."""
    validate_subclass(sub, n, strict=False)
    m, l = sub.bursts, sub.weight
    if m == 0:
        return 1
    ones_splits = _c(l - 1, m - 1)
    zeros = n - l
    if sub.case is BoundaryCase.INTERIOR:
        return ones_splits * _c(zeros - 1, m)
    if sub.case in (BoundaryCase.LEADING, BoundaryCase.TRAILING):
        return ones_splits * _c(zeros - 1, m - 1)
    if m == 1:
        return 1 if l == n else 0
    return ones_splits * _c(zeros - 1, m - 2)


def classify(word: BitWord) -> SubclassId:
    """Subclass of a concrete word: count 1-runs, weight, boundary case."""
    v = word.value
    if v == 0:
        return SubclassId(0, 0, BoundaryCase.INTERIOR)
    starts = v & ~(v << 1)
    m = starts.bit_count()
    l = v.bit_count()
    first = v & 1
    last = (v >> (word.n - 1)) & 1
    if first and last:
        case = BoundaryCase.SPANNING
    elif first:
        case = BoundaryCase.LEADING
    elif last:
        case = BoundaryCase.TRAILING
    else:
        case = BoundaryCase.INTERIOR
    return SubclassId(m, l, case)


def log_word_prob(params: MarkovParams, word: BitWord) -> float:
    """Log probability of one concrete noise word under the chain."""
    if word.n != params.n:
        raise ValueError(f"word length {word.n} != block length {params.n}")
    return log_subclass_prob(params, classify(word))
