import itertools

import numpy as np
import pytest

from grandmo.codes import (
    bch_generator_poly,
    encode,
    exhaustive_min_distance,
    full_rank,
    make_bch,
    make_rlc,
    make_rm,
    rm_monomials,
)
from grandmo.decoder import membership
from grandmo.gf2 import BitWord, mat_vec_mul

RLC_15_10_SEED1_MIN_DISTANCE = 2  # frozen from the exhaustive search below


class TestBch:
    def test_shape_and_distance(self, bch):
        assert (bch.n, bch.k, bch.d) == (127, 106, 7)
        assert full_rank(bch)

    def test_generator_poly_degree(self):
        assert len(bch_generator_poly(3)) - 1 == 21

    def test_generator_poly_divides_whole_space(self, bch):
        # cyclic code: g(x) must divide x^127 + 1
        gval = bch.g.rows[0]
        deg = gval.bit_length() - 1
        rem = (1 << 127) | 1
        while rem and rem.bit_length() - 1 >= deg:
            rem ^= gval << (rem.bit_length() - 1 - deg)
        assert rem == 0

    def test_h_annihilates_g(self, bch):
        for i in range(bch.k):
            assert mat_vec_mul(bch.h, bch.g.row_word(i)).value == 0

    def test_members(self, bch):
        assert membership(bch, BitWord(127, 0))
        assert membership(bch, bch.g.row_word(0))  # the generator polynomial word

    def test_sampled_pair_distance(self, bch):
        rng = np.random.default_rng(2)
        for _ in range(150):
            u1 = BitWord.from_bits(rng.integers(0, 2, bch.k).tolist())
            u2 = BitWord.from_bits(rng.integers(0, 2, bch.k).tolist())
            if u1 == u2:
                continue
            d = (encode(bch, u1) ^ encode(bch, u2)).weight()
            assert d >= 7

    def test_syndromes_of_small_errors_distinct(self, bch):
        """All weight <= 3 error patterns have distinct syndromes (full run)."""
        from grandmo.syndrome_index import CodeTables

        tables = CodeTables(bch)
        cols = np.array([tables.burst_syn[j][1] for j in range(127)], dtype=np.uint64)
        syns = [np.zeros(1, dtype=np.uint64)]
        syns.append(cols)
        pair = cols[:, None] ^ cols[None, :]
        iu = np.triu_indices(127, k=1)
        pairs = pair[iu]
        syns.append(pairs)
        triple_parts = []
        idx_i, idx_j = iu
        for t, (i, j) in enumerate(zip(idx_i, idx_j)):
            ks = np.arange(j + 1, 127)
            if ks.size:
                triple_parts.append(pairs[t] ^ cols[ks])
        syns.append(np.concatenate(triple_parts))
        allsyn = np.concatenate(syns)
        expect = 1 + 127 + 127 * 126 // 2 + 127 * 126 * 125 // 6
        assert len(allsyn) == expect
        assert len(np.unique(allsyn)) == expect


class TestRm:
    def test_dimension_sum(self, rm47):
        assert rm47.k == 1 + 7 + 21 + 35 + 35 == 99
        assert rm47.n == 128
        assert rm47.d == 8
        assert full_rank(rm47)

    def test_monomial_count(self):
        assert len(rm_monomials(4, 7)) == 99

    def test_repetition_code(self):
        rep = make_rm(0, 4)
        assert (rep.n, rep.k, rep.d) == (16, 1, 16)
        assert encode(rep, BitWord(1, 1)).weight() == 16

    def test_min_weight_sampled(self, rm47):
        rng = np.random.default_rng(3)
        gbits = np.array(rm47.g.to_lists(), dtype=np.float32)
        msgs = rng.integers(0, 2, size=(100_000, rm47.k)).astype(np.float32)
        words = (msgs @ gbits).astype(np.int64) & 1
        weights = words.sum(axis=1)
        weights = weights[weights > 0]
        assert weights.min() == 8

    def test_invalid_orders(self):
        with pytest.raises(ValueError):
            make_rm(7, 7)
        with pytest.raises(ValueError):
            make_rm(-1, 4)


class TestRlc:
    def test_deterministic(self):
        a = make_rlc(31, 20, seed=7)
        b = make_rlc(31, 20, seed=7)
        assert a.g.rows == b.g.rows
        c = make_rlc(31, 20, seed=8)
        assert a.g.rows != c.g.rows

    def test_pinned_generator_words(self):
        # regression pin: first rows of the seed-1 (15, 10) instance
        code = make_rlc(15, 10, seed=1)
        assert code.g.rows[0] & ((1 << 10) - 1) == 1
        assert [r & ((1 << 10) - 1) for r in code.g.rows] == [1 << i for i in range(10)]

    def test_systematic_rank(self):
        code = make_rlc(24, 12, seed=3)
        assert full_rank(code)
        assert code.d is None

    def test_exhaustive_min_distance_fixture(self, rlc_15_10):
        assert exhaustive_min_distance(rlc_15_10) == RLC_15_10_SEED1_MIN_DISTANCE

    def test_rate(self, rlc_15_10):
        assert rlc_15_10.rate == pytest.approx(10 / 15)


class TestEncode:
    def test_zero_message(self, rlc_15_10):
        assert encode(rlc_15_10, BitWord(10, 0)).value == 0

    def test_unit_messages_are_rows(self, rlc_15_10):
        for i in range(10):
            assert encode(rlc_15_10, BitWord(10, 1 << i)) == rlc_15_10.g.row_word(i)

    def test_random_messages_are_members(self, bch):
        rng = np.random.default_rng(5)
        for _ in range(20):
            u = BitWord.from_bits(rng.integers(0, 2, bch.k).tolist())
            assert membership(bch, encode(bch, u))

    def test_length_check(self, bch):
        with pytest.raises(ValueError):
            encode(bch, BitWord(10, 0))
