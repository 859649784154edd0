import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from grandmo.gf2 import (
    BitMatrix,
    BitWord,
    load_matrix,
    mat_vec_mul,
    parity_from_generator,
    rank,
    save_matrix,
    xor_add,
)


def rand_word(n, rng):
    return BitWord(n, rng.getrandbits(n))


class TestBitWord:
    def test_roundtrip_string(self):
        w = BitWord.from_string("10110")
        assert w.to01() == "10110"
        assert w[0] == 1 and w[1] == 0 and w[4] == 0
        assert w.weight() == 3
        assert len(w) == 5

    def test_immutable_fixed_length(self):
        w = BitWord(4, 0b1010)
        with pytest.raises(AttributeError):
            w.value = 3
        with pytest.raises(ValueError):
            BitWord(3, 0b1000)
        with pytest.raises(ValueError):
            BitWord(0)

    def test_bad_bits(self):
        with pytest.raises(ValueError):
            BitWord.from_bits([0, 2, 1])


class TestXorAdd:
    def test_identity(self):
        z = BitWord(6, 0)
        assert xor_add(z, z) == z

    def test_bitwise(self):
        assert xor_add(BitWord.from_string("101"), BitWord.from_string("011")) == (
            BitWord.from_string("110")
        )

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            xor_add(BitWord(3), BitWord(4))

    @given(st.integers(1, 200), st.data())
    def test_self_inverse_commutative_associative(self, n, data):
        a = BitWord(n, data.draw(st.integers(0, 2**n - 1)))
        b = BitWord(n, data.draw(st.integers(0, 2**n - 1)))
        c = BitWord(n, data.draw(st.integers(0, 2**n - 1)))
        assert xor_add(a, a).value == 0
        assert xor_add(a, b) == xor_add(b, a)
        assert xor_add(xor_add(a, b), c) == xor_add(a, xor_add(b, c))


class TestMatVecMul:
    def test_identity(self):
        m = BitMatrix.identity(5)
        v = BitWord.from_string("10110")
        assert mat_vec_mul(m, v) == v

    def test_zero(self):
        m = BitMatrix.zeros(3, 5)
        assert mat_vec_mul(m, BitWord.from_string("11111")).value == 0

    def test_against_entry_loop(self):
        rng = random.Random(5)
        for _ in range(25):
            rows, cols = 4, 7
            m = BitMatrix(rows, cols, [rng.getrandbits(cols) for _ in range(rows)])
            v = rand_word(cols, rng)
            got = mat_vec_mul(m, v)
            for i in range(rows):
                acc = 0
                for j in range(cols):
                    acc ^= m.entry(i, j) & v[j]
                assert got[i] == acc

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            mat_vec_mul(BitMatrix.identity(4), BitWord(5))


def rational_rank(rows_lists):
    """Oracle: elimination over rationals, reducing entries mod 2 at each pivot."""
    m = [[Fraction(x % 2) for x in row] for row in rows_lists]
    rnk = 0
    cols = len(m[0])
    for col in range(cols):
        piv = None
        for r in range(rnk, len(m)):
            if m[r][col] % 2 == 1:
                piv = r
                break
        if piv is None:
            continue
        m[rnk], m[piv] = m[piv], m[rnk]
        for r in range(len(m)):
            if r != rnk and m[r][col] % 2 == 1:
                m[r] = [(a + b) % 2 for a, b in zip(m[r], m[rnk])]
        rnk += 1
    return rnk


class TestRank:
    def test_identity(self):
        assert rank(BitMatrix.identity(8)) == 8

    def test_duplicate_row(self):
        m = BitMatrix(3, 4, [0b1010, 0b1010, 0b0001])
        assert rank(m) < 3

    def test_against_rational_oracle(self):
        rng = random.Random(11)
        for _ in range(20):
            m = BitMatrix(10, 20, [rng.getrandbits(20) for _ in range(10)])
            assert rank(m) == rational_rank(m.to_lists())


class TestParityFromGenerator:
    def test_repetition(self):
        g = BitMatrix(1, 2, [0b11])
        h = parity_from_generator(g)
        assert (h.nrows, h.ncols) == (1, 2)
        assert h.rows == [0b11]

    def test_hamming_7_4_annihilates_all_codewords(self):
        g = BitMatrix.from_lists(
            [
                [1, 0, 0, 0, 1, 1, 0],
                [0, 1, 0, 0, 1, 0, 1],
                [0, 0, 1, 0, 0, 1, 1],
                [0, 0, 0, 1, 1, 1, 1],
            ]
        )
        h = parity_from_generator(g)
        for msg in range(16):
            c = 0
            for i in range(4):
                if (msg >> i) & 1:
                    c ^= g.rows[i]
            assert mat_vec_mul(h, BitWord(7, c)).value == 0

    def test_rlc_product_zero(self):
        from grandmo.codes import make_rlc

        code = make_rlc(15, 10, seed=1)
        for i in range(code.k):
            assert mat_vec_mul(code.h, code.g.row_word(i)).value == 0

    def test_rank_deficient_rejected(self):
        g = BitMatrix(2, 3, [0b101, 0b101])
        with pytest.raises(ValueError):
            parity_from_generator(g)

    def test_exhaustive_small_generators(self):
        rng = random.Random(3)
        for _ in range(30):
            k, n = 3, 6
            rows = [rng.getrandbits(n) for _ in range(k)]
            m = BitMatrix(k, n, rows)
            if rank(m) < k:
                continue
            h = parity_from_generator(m)
            assert rank(h) == n - k
            span = set()
            for msg in range(2**k):
                c = 0
                for i in range(k):
                    if (msg >> i) & 1:
                        c ^= rows[i]
                span.add(c)
                assert mat_vec_mul(h, BitWord(n, c)).value == 0
            # H's kernel is exactly the rowspan
            members = [
                v for v in range(2**n) if mat_vec_mul(h, BitWord(n, v)).value == 0
            ]
            assert set(members) == span


class TestMatrixFile:
    def test_roundtrip(self, tmp_path):
        rng = random.Random(9)
        m = BitMatrix(5, 12, [rng.getrandbits(12) for _ in range(5)])
        path = tmp_path / "m.txt"
        save_matrix(m, path)
        assert load_matrix(path) == m
        first = path.read_text().splitlines()[0]
        assert first == "5 12"

    def test_bad_header(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("nonsense\n")
        with pytest.raises(ValueError):
            load_matrix(path)
