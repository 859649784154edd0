"""Classical hard-decision baselines: Berlekamp-Massey and majority logic.

Both return the corrected codeword or None for a detected-but-uncorrectable
block. Scalar entry points wrap batch implementations that the Monte Carlo
harness calls on whole trial arrays.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import gf128
from .codes import LinearCode, rm_monomials, rm_row
from .gf2 import BitWord

BCH_T = 3  # design error-correcting radius of the (127, 106) construction


# ------------------------------------------------------- Berlekamp-Massey


@lru_cache(maxsize=4)
def _bch_tables(n: int):
    """alpha-power matrices for vectorized syndrome evaluation."""
    apow = np.zeros((2 * BCH_T + 1, n), dtype=np.int16)
    for i in range(1, 2 * BCH_T + 1):
        for j in range(n):
            apow[i, j] = gf128.alpha_pow(i * j)
    chien = np.zeros((BCH_T + 1, n), dtype=np.int16)
    for deg in range(1, BCH_T + 1):
        for j in range(n):
            chien[deg, j] = gf128.alpha_pow((-j * deg) % gf128.ORDER)
    return apow, chien


def _massey(syndromes: list[int]) -> list[int]:
    """Minimal LFSR (error locator) for the syndrome sequence."""
    sigma = [1]
    prev = [1]
    length = 0
    shift = 1
    prev_disc = 1
    for step, s in enumerate(syndromes):
        disc = s
        for i in range(1, length + 1):
            if i < len(sigma) and sigma[i]:
                disc ^= gf128.gf_mul(sigma[i], syndromes[step - i])
        if disc == 0:
            shift += 1
            continue
        scale = gf128.gf_mul(disc, gf128.gf_inv(prev_disc))
        update = sigma[:]
        need = len(prev) + shift
        if len(update) < need:
            update += [0] * (need - len(update))
        for i, c in enumerate(prev):
            if c:
                update[i + shift] ^= gf128.gf_mul(scale, c)
        if 2 * length <= step:
            prev = sigma
            prev_disc = disc
            length = step + 1 - length
            shift = 1
        else:
            shift += 1
        sigma = update
    while sigma and sigma[-1] == 0:
        sigma.pop()
    return sigma


def _chien_roots(sigma: list[int], n: int) -> list[int]:
    """Positions j with sigma(alpha^-j) = 0, via the precomputed powers."""
    _, chien = _bch_tables(n)
    acc = np.full(n, sigma[0], dtype=np.int16)
    for deg in range(1, len(sigma)):
        c = sigma[deg]
        if not c:
            continue
        logc = gf128.LOG[c]
        powers = chien[deg].astype(np.int64)
        term = np.zeros(n, dtype=np.int16)
        nz = powers != 0
        logs = np.array(gf128.LOG, dtype=np.int64)[powers[nz]]
        exps = np.array(gf128.EXP, dtype=np.int16)
        term[nz] = exps[(logs + logc) % gf128.ORDER]
        acc ^= term
    return [int(j) for j in np.flatnonzero(acc == 0)]


def _bm_correct(syndromes: list[int], n: int) -> list[int] | None:
    """Error positions implied by the syndromes, or None if uncorrectable."""
    sigma = _massey(syndromes)
    degree = len(sigma) - 1
    if degree == 0:
        return []
    if degree > BCH_T:
        return None
    roots = _chien_roots(sigma, n)
    if len(roots) != degree:
        return None
    return roots


def bm_syndromes_batch(code: LinearCode, bits: np.ndarray) -> np.ndarray:
    """(B, 2t) field syndromes y(alpha^i) for i = 1..2t."""
    apow, _ = _bch_tables(code.n)
    out = np.zeros((bits.shape[0], 2 * BCH_T), dtype=np.int16)
    for i in range(1, 2 * BCH_T + 1):
        masked = np.where(bits.astype(bool), apow[i], 0)
        out[:, i - 1] = np.bitwise_xor.reduce(masked, axis=1)
    return out


def bm_decode_batch(code: LinearCode, bits: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Decode (B, n) words; returns (corrected bits, failure mask).

    Failed rows keep the received bits and are flagged. Every corrected
    output is syndrome-checked; a non-codeword correction is converted to
    failure rather than silently accepted.
    """
    syn = bm_syndromes_batch(code, bits)
    out = bits.copy()
    fail = np.zeros(bits.shape[0], dtype=bool)
    dirty = np.flatnonzero(syn.any(axis=1))
    for row in dirty:
        roots = _bm_correct([int(s) for s in syn[row]], code.n)
        if roots is None:
            fail[row] = True
            continue
        out[row, roots] ^= 1
    if dirty.size:
        residual = bm_syndromes_batch(code, out[dirty]).any(axis=1)
        fail[dirty] |= residual
    return out, fail


def bm_decode(code: LinearCode, y: BitWord) -> BitWord | None:
    """Berlekamp-Massey decoding of one received word (None = failure)."""
    if code.label != "bch" or y.n != code.n:
        raise ValueError("bm_decode expects a received word matching the BCH code")
    bits = np.array(list(y), dtype=np.uint8)[None, :]
    out, fail = bm_decode_batch(code, bits)
    if fail[0]:
        return None
    return BitWord.from_bits(int(b) for b in out[0])


# -------------------------------------------------------- majority logic


class ReedDecoder:
    """Reed's peeling decoder for RM(r, m), batch-oriented.

    For each monomial of the current top degree d the codeword bits are
    summed over the 2^d-point subcubes that fix the complement variables;
    the 2^(m-d) disjoint parities vote on the coefficient. Recovered layers
    are peeled off and the next degree down is decoded. A tied vote anywhere
    fails the block.
    """

    def __init__(self, r: int, m: int):
        self.r, self.m = r, m
        self.n = 1 << m
        monos = rm_monomials(r, m)
        self.k = len(monos)
        self.layers = []
        for d in range(r + 1):
            supports = [s for s in monos if len(s) == d]
            idx = np.zeros((len(supports), 1 << (m - d), 1 << d), dtype=np.int32)
            rows = np.zeros((len(supports), self.n), dtype=np.uint8)
            for mi, sup in enumerate(supports):
                sup_mask = sum(1 << i for i in sup)
                free = [i for i in range(m) if i not in sup]
                offs = [
                    sum(((t >> a) & 1) << sup[a] for a in range(d))
                    for t in range(1 << d)
                ]
                bases = [
                    sum(((t >> a) & 1) << free[a] for a in range(m - d))
                    for t in range(1 << (m - d))
                ]
                idx[mi] = np.add.outer(bases, offs)
                row = rm_row(sup, m)
                rows[mi] = [(row >> pt) & 1 for pt in range(self.n)]
            self.layers.append((supports, idx, rows))

    def decode_batch(self, bits: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(B, n) -> (decoded codewords, message coefficients, failure mask)."""
        work = bits.copy()
        nblocks = bits.shape[0]
        fail = np.zeros(nblocks, dtype=bool)
        coeffs = []
        for d in range(self.r, -1, -1):
            supports, idx, rows = self.layers[d]
            votes = work[:, idx]  # (B, monos, votes, cube)
            parities = votes.sum(axis=3, dtype=np.int32) & 1
            ones = parities.sum(axis=2, dtype=np.int32)
            nvotes = parities.shape[2]
            fail |= (2 * ones == nvotes).any(axis=1)
            layer_bits = (2 * ones > nvotes).astype(np.uint8)
            coeffs.append(layer_bits)
            work = work ^ ((layer_bits.astype(np.int32) @ rows.astype(np.int32)) & 1).astype(np.uint8)
        msg = np.concatenate(coeffs[::-1], axis=1)
        decoded = (bits ^ work).astype(np.uint8)
        return decoded, msg, fail


@lru_cache(maxsize=4)
def _reed_decoder(r: int, m: int) -> ReedDecoder:
    return ReedDecoder(r, m)


def rm_orders(code: LinearCode) -> tuple[int, int]:
    """Recover (r, m) from an RM code's (n, k)."""
    m = code.n.bit_length() - 1
    if 1 << m != code.n:
        raise ValueError(f"block length {code.n} is not a power of two")
    from math import comb

    total = 0
    for r in range(m + 1):
        total += comb(m, r)
        if total == code.k:
            return r, m
    raise ValueError(f"k = {code.k} does not match any RM(r, {m})")


def majority_logic_decode(code: LinearCode, y: BitWord) -> BitWord | None:
    """Reed majority-vote decoding of one received word (None = tie failure)."""
    if y.n != code.n:
        raise ValueError(f"length mismatch: word {y.n}, code block {code.n}")
    r, m = rm_orders(code)
    dec = _reed_decoder(r, m)
    bits = np.array(list(y), dtype=np.uint8)[None, :]
    decoded, _, fail = dec.decode_batch(bits)
    if fail[0]:
        return None
    return BitWord.from_bits(int(b) for b in decoded[0])
