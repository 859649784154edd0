import numpy as np
import pytest

from grandmo.codes import encode, make_bch, make_rlc
from grandmo.decoder import DecodeStatus, grand_decode, membership, syndrome
from grandmo.gf2 import BitWord
from grandmo.markov import MarkovParams, classify, interlace_offset, log_subclass_prob
from grandmo.patterns import AbandonmentRule, PatternStream


def exhaustive_rule(n):
    return AbandonmentRule(n, n)


FIXTURE_P, FIXTURE_G = 0.08, 0.7  # verified: stream order and probabilities agree


class TestMembership:
    def test_generator_rows(self, rlc_15_10):
        for i in range(rlc_15_10.k):
            assert membership(rlc_15_10, rlc_15_10.g.row_word(i))

    def test_single_flip_leaves_code(self, bch):
        c = encode(bch, BitWord(bch.k, 0))
        flipped = BitWord(bch.n, c.value ^ 1)
        assert membership(bch, c)
        assert not membership(bch, flipped)

    def test_exhaustive_member_count(self, rlc_15_10):
        members = sum(membership(rlc_15_10, BitWord(15, v)) for v in range(2**15))
        assert members == 2**10

    def test_length_mismatch(self, rlc_15_10):
        with pytest.raises(ValueError):
            membership(rlc_15_10, BitWord(14, 0))


class TestGrandDecode:
    def stream(self, n, rule=None):
        params = MarkovParams.from_p_and_g(FIXTURE_P, FIXTURE_G, n)
        return PatternStream(params, rule or exhaustive_rule(n))

    def test_codeword_one_query(self, rlc_15_10):
        rng = np.random.default_rng(1)
        for _ in range(10):
            msg = BitWord.from_bits(rng.integers(0, 2, 10).tolist())
            c = encode(rlc_15_10, msg)
            out = grand_decode(c, rlc_15_10, self.stream(15))
            assert out.status is DecodeStatus.DECODED
            assert out.queries == 1
            assert out.inferred_noise.value == 0
            assert out.codeword == c

    def test_outcome_consistency(self, rlc_15_10):
        rng = np.random.default_rng(2)
        for _ in range(40):
            y = BitWord(15, int(rng.integers(0, 2**15)))
            out = grand_decode(y, rlc_15_10, self.stream(15))
            assert out.status is DecodeStatus.DECODED  # exhaustive stream always hits
            assert (out.codeword ^ out.inferred_noise) == y
            assert membership(rlc_15_10, out.codeword)

    def test_query_count_is_stream_position(self, rlc_15_10):
        rng = np.random.default_rng(3)
        for _ in range(20):
            y = BitWord(15, int(rng.integers(0, 2**15)))
            out = grand_decode(y, rlc_15_10, self.stream(15))
            replay = self.stream(15)
            for _ in range(out.queries - 1):
                z = replay.next_pattern()
                assert not membership(rlc_15_10, y ^ z)
            assert membership(rlc_15_10, y ^ replay.next_pattern())

    def test_determinism(self, rlc_15_10):
        y = BitWord(15, 0b101001110001101)
        a = grand_decode(y, rlc_15_10, self.stream(15))
        b = grand_decode(y, rlc_15_10, self.stream(15))
        assert a == b

    def test_abandonment_counts_all_queries(self, rlc_15_10):
        rule = AbandonmentRule(1, 1, max_queries=5)
        y = BitWord(15, 0b111000111000111)
        out = grand_decode(y, rlc_15_10, PatternStream(
            MarkovParams.from_p_and_g(FIXTURE_P, FIXTURE_G, 15), rule))
        if out.status is DecodeStatus.ABANDONED:
            assert out.queries == 5
            assert out.codeword is None

    def test_membership_callable_interface(self):
        # a non-linear code book: plain lookup table
        book = {0b110011, 0b000000, 0b111111, 0b010101}
        stream = self.stream(6)
        y = BitWord(6, 0b110001)
        out = grand_decode(y, lambda w: w.value in book, stream)
        assert out.status is DecodeStatus.DECODED
        assert out.codeword.value in book

    def test_used_stream_rejected(self, rlc_15_10):
        stream = self.stream(15)
        stream.next_pattern()
        with pytest.raises(ValueError):
            grand_decode(BitWord(15, 0), rlc_15_10, stream)

    def test_burst_recovery_bch(self, bch):
        params = MarkovParams.from_p_and_g(0.01, 0.05, bch.n)
        assert interlace_offset(params) >= 4
        rng = np.random.default_rng(4)
        msg = BitWord.from_bits(rng.integers(0, 2, bch.k).tolist())
        c = encode(bch, msg)
        start = int(rng.integers(0, bch.n - 5))
        z = BitWord(bch.n, ((1 << 5) - 1) << start)
        stream = PatternStream(params, AbandonmentRule(3, 3))
        out = grand_decode(c ^ z, bch, stream)
        assert out.status is DecodeStatus.DECODED
        assert out.inferred_noise == z
        assert out.codeword == c


class TestMaximumLikelihood:
    def test_exhaustive_small_code(self):
        """Every coset leader in stream order carries the coset's max probability,
        so the first hit is a maximum likelihood decoding for every reception."""
        code = make_rlc(10, 6, seed=1)
        n = 10
        params = MarkovParams.from_p_and_g(FIXTURE_P, FIXTURE_G, n)
        stream = PatternStream(params, exhaustive_rule(n))
        order = {}
        logp = {}
        while True:
            rec = stream.next_record()
            if rec is None:
                break
            order[rec.word.value] = rec.index
            logp[rec.word.value] = rec.log_prob
        assert len(order) == 2**n

        codewords = []
        for msg in range(2**code.k):
            codewords.append(encode(code, BitWord(code.k, msg)).value)

        for y in range(2**n):
            candidates = [y ^ c for c in codewords]
            first = min(candidates, key=lambda z: order[z])
            best = max(logp[z] for z in candidates)
            assert logp[first] == pytest.approx(best, abs=1e-9), y

    def test_decode_agrees_with_bruteforce_ml_samples(self, rlc_15_10):
        code = rlc_15_10
        params = MarkovParams.from_p_and_g(FIXTURE_P, FIXTURE_G, 15)
        codewords = [encode(code, BitWord(10, m)).value for m in range(2**10)]
        rng = np.random.default_rng(9)
        for _ in range(25):
            y = BitWord(15, int(rng.integers(0, 2**15)))
            out = grand_decode(y, code, PatternStream(params, exhaustive_rule(15)))
            achieved = log_subclass_prob(params, classify(out.inferred_noise))
            best = max(
                log_subclass_prob(params, classify(BitWord(15, y.value ^ c)))
                for c in codewords
            )
            assert achieved == pytest.approx(best, abs=1e-9)


class TestSyndrome:
    def test_zero_for_codewords(self, rlc_15_10):
        for msg in (0, 5, 1023):
            c = encode(rlc_15_10, BitWord(10, msg))
            assert syndrome(rlc_15_10, c).value == 0
