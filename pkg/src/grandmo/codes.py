"""Binary linear block code constructions behind one representation.

Three families: narrow-sense BCH(127,106) built over GF(2^7), Reed-Muller
codes from monomial evaluation vectors, and systematic random linear codes
from a seeded generator. All expose (n, k, G, H, d) with H derived from G.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import gf128
from .gf2 import BitMatrix, BitWord, parity_from_generator, rank


@dataclass(frozen=True)
class LinearCode:
    """(n, k) binary linear code with generator G, parity check H."""

    n: int
    k: int
    g: BitMatrix
    h: BitMatrix
    d: int | None
    label: str
    seed: int | None = None
    poly: int | None = None  # field modulus for algebraically built codes

    def __post_init__(self):
        if self.g.nrows != self.k or self.g.ncols != self.n:
            raise ValueError("generator shape mismatch")
        if self.h.nrows != self.n - self.k or self.h.ncols != self.n:
            raise ValueError("parity check shape mismatch")

    @property
    def rate(self) -> float:
        return self.k / self.n


def encode(code: LinearCode, u: BitWord) -> BitWord:
    """u @ G: xor of the generator rows selected by the message bits."""
    if u.n != code.k:
        raise ValueError(f"message length {u.n} != k = {code.k}")
    acc = 0
    v = u.value
    rows = code.g.rows
    while v:
        i = (v & -v).bit_length() - 1
        acc ^= rows[i]
        v &= v - 1
    return BitWord(code.n, acc)


def _from_generator(g: BitMatrix, d, label, seed=None, poly=None) -> LinearCode:
    h = parity_from_generator(g)
    return LinearCode(g.ncols, g.nrows, g, h, d, label, seed, poly)


# ---------------------------------------------------------------- BCH

def _poly_mul_gf128(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if bj:
                out[i + j] ^= gf128.gf_mul(ai, bj)
    return out


def _minimal_poly(exponent: int) -> list[int]:
    """Minimal polynomial over GF(2) of alpha^exponent, as GF(2) coefficients."""
    conjugates = set()
    e = exponent
    while e not in conjugates:
        conjugates.add(e)
        e = (e * 2) % gf128.ORDER
    poly = [1]
    for e in sorted(conjugates):
        poly = _poly_mul_gf128(poly, [gf128.alpha_pow(e), 1])
    if any(c not in (0, 1) for c in poly):
        raise AssertionError("minimal polynomial left the base field")
    return poly


def bch_generator_poly(t: int = 3) -> list[int]:
    """lcm of the minimal polynomials of alpha, alpha^3, ..., alpha^(2t-1)."""
    seen_classes = set()
    gpoly = [1]
    for i in range(1, 2 * t, 2):
        cls = frozenset({(i << j) % gf128.ORDER for j in range(gf128.FIELD_BITS)})
        if cls in seen_classes:
            continue
        seen_classes.add(cls)
        gpoly = _poly_mul_gf128(gpoly, _minimal_poly(i))
    return gpoly


def make_bch(n: int = 127, k: int = 106) -> LinearCode:
    """Narrow-sense triple-error-correcting BCH over GF(2^7); d = 7.

    The generator matrix holds the cyclic shifts of the generator
    polynomial, in natural bit order.
    """
    if (n, k) != (127, 106):
        raise ValueError("only the (127, 106) construction is provided")
    gpoly = bch_generator_poly(t=3)
    deg = len(gpoly) - 1
    if deg != n - k:
        raise AssertionError(f"generator polynomial degree {deg} != {n - k}")
    gval = sum(c << j for j, c in enumerate(gpoly))
    rows = [gval << i for i in range(k)]
    g = BitMatrix(k, n, rows)
    return _from_generator(g, d=7, label="bch", poly=gf128.PRIMITIVE_POLY)


# ---------------------------------------------------------- Reed-Muller

def rm_monomials(r: int, m: int) -> list[tuple[int, ...]]:
    """Monomial supports of degree <= r, ascending degree then lexicographic."""
    out = []
    for deg in range(r + 1):
        out.extend(itertools.combinations(range(m), deg))
    return out


def rm_row(support: tuple[int, ...], m: int) -> int:
    """Evaluation vector of the monomial over all 2^m points, packed."""
    mask = 0
    for i in support:
        mask |= 1 << i
    row = 0
    for pt in range(1 << m):
        if pt & mask == mask:
            row |= 1 << pt
    return row


def make_rm(r: int = 4, m: int = 7) -> LinearCode:
    """Reed-Muller code of order r in m variables: n = 2^m, d = 2^(m-r)."""
    if not 0 <= r <= m:
        raise ValueError(f"need 0 <= r <= m, got r={r}, m={m}")
    monos = rm_monomials(r, m)
    n = 1 << m
    g = BitMatrix(len(monos), n, [rm_row(s, m) for s in monos])
    return _from_generator(g, d=1 << (m - r), label="rm")


# ------------------------------------------------------- random linear

def make_rlc(n: int, k: int, seed: int) -> LinearCode:
    """Systematic random linear code G = [I | A], A from a seeded Philox stream.

    Systematic form guarantees rank k and makes the construction
    reproducible bit for bit across platforms.
    """
    if not 0 < k <= n:
        raise ValueError(f"need 0 < k <= n, got k={k}, n={n}")
    rng = np.random.Generator(np.random.Philox(key=seed))
    a = rng.integers(0, 2, size=(k, n - k), dtype=np.uint8) if n > k else None
    rows = []
    for i in range(k):
        row = 1 << i
        if a is not None:
            for j in range(n - k):
                row |= int(a[i, j]) << (k + j)
        rows.append(row)
    g = BitMatrix(k, n, rows)
    return _from_generator(g, d=None, label="rlc", seed=seed)


def exhaustive_min_distance(code: LinearCode, limit_k: int = 20) -> int:
    """True minimum distance by walking all codewords in Gray-code order."""
    if code.k > limit_k:
        raise ValueError(f"k = {code.k} too large for exhaustive search")
    best = code.n
    c = 0
    for msg in range(1, 1 << code.k):
        gray_bit = ((msg ^ (msg >> 1)) ^ ((msg - 1) ^ ((msg - 1) >> 1))).bit_length() - 1
        c ^= code.g.rows[gray_bit]
        w = c.bit_count()
        if 0 < w < best:
            best = w
    return best


def full_rank(code: LinearCode) -> bool:
    return rank(code.g) == code.k
