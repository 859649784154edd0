"""Bit-packed GF(2) vectors and matrices.

Words and matrix rows are stored as Python integers, bit i of the integer
holding symbol i, so xor/and run word-parallel on arbitrary lengths. The
syndrome test sits in the innermost decoding loop and relies on this.
"""

from __future__ import annotations

from typing import Iterable, Sequence


class BitWord:
    """Fixed-length binary word. Immutable; index 0 prints leftmost."""

    __slots__ = ("n", "value")

    def __init__(self, n: int, value: int = 0):
        if n <= 0:
            raise ValueError(f"length must be positive, got {n}")
        if value < 0 or value >> n:
            raise ValueError("value has bits outside [0, n)")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, val):
        raise AttributeError("BitWord is immutable")

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitWord":
        bits = list(bits)
        value = 0
        for i, b in enumerate(bits):
            if b not in (0, 1):
                raise ValueError(f"bit {i} is {b}, expected 0 or 1")
            value |= b << i
        return cls(len(bits), value)

    @classmethod
    def from_string(cls, s: str) -> "BitWord":
        return cls.from_bits(int(c) for c in s.strip())

    @classmethod
    def zeros(cls, n: int) -> "BitWord":
        return cls(n)

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(i)
        return (self.value >> i) & 1

    def __iter__(self):
        v = self.value
        for _ in range(self.n):
            yield v & 1
            v >>= 1

    def __xor__(self, other: "BitWord") -> "BitWord":
        return xor_add(self, other)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitWord)
            and self.n == other.n
            and self.value == other.value
        )

    def __hash__(self) -> int:
        return hash((self.n, self.value))

    def weight(self) -> int:
        return self.value.bit_count()

    def to01(self) -> str:
        return "".join(str(b) for b in self)

    def __repr__(self) -> str:
        return f"BitWord({self.to01()!r})"


class BitMatrix:
    """Binary matrix, row-major, each row an int with bit j = column j."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: Sequence[int]):
        if nrows <= 0 or ncols <= 0:
            raise ValueError("bad matrix shape")
        rows = list(rows)
        if len(rows) != nrows:
            raise ValueError(f"expected {nrows} rows, got {len(rows)}")
        for r in rows:
            if r < 0 or r >> ncols:
                raise ValueError("row has bits outside column range")
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[int]]) -> "BitMatrix":
        ncols = len(rows[0])
        packed = []
        for row in rows:
            if len(row) != ncols:
                raise ValueError("ragged rows")
            packed.append(sum(b << j for j, b in enumerate(row)))
        return cls(len(rows), ncols, packed)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls(nrows, ncols, [0] * nrows)

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def row_word(self, i: int) -> BitWord:
        return BitWord(self.ncols, self.rows[i])

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.ncols)] for r in self.rows]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __repr__(self) -> str:
        return f"BitMatrix({self.nrows}x{self.ncols})"


def xor_add(a: BitWord, b: BitWord) -> BitWord:
    """Bitwise sum modulo 2 of two equal-length words."""
    if a.n != b.n:
        raise ValueError(f"length mismatch: {a.n} != {b.n}")
    return BitWord(a.n, a.value ^ b.value)


def mat_vec_mul(m: BitMatrix, v: BitWord) -> BitWord:
    """M @ v over GF(2): result bit i is the parity of row i AND v."""
    if m.ncols != v.n:
        raise ValueError(f"dimension mismatch: {m.ncols} cols vs {v.n}")
    out = 0
    for i, row in enumerate(m.rows):
        out |= ((row & v.value).bit_count() & 1) << i
    return BitWord(m.nrows, out)


def rank(m: BitMatrix) -> int:
    """GF(2) row rank via Gaussian elimination."""
    work = list(m.rows)
    rnk = 0
    for col in range(m.ncols):
        pivot = None
        for r in range(rnk, len(work)):
            if (work[r] >> col) & 1:
                pivot = r
                break
        if pivot is None:
            continue
        work[rnk], work[pivot] = work[pivot], work[rnk]
        for r in range(len(work)):
            if r != rnk and ((work[r] >> col) & 1):
                work[r] ^= work[rnk]
        rnk += 1
        if rnk == len(work):
            break
    return rnk


def _rref(m: BitMatrix) -> tuple[list[int], list[int]]:
    """Reduced row echelon form; returns (rows, pivot column list)."""
    work = list(m.rows)
    pivots = []
    r = 0
    for col in range(m.ncols):
        if r >= len(work):
            break
        pivot = None
        for i in range(r, len(work)):
            if (work[i] >> col) & 1:
                pivot = i
                break
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        for i in range(len(work)):
            if i != r and ((work[i] >> col) & 1):
                work[i] ^= work[r]
        pivots.append(col)
        r += 1
    return work, pivots


def parity_from_generator(g: BitMatrix) -> BitMatrix:
    """Parity-check matrix H with H @ c = 0 for every codeword c of G.

    G is reduced to systematic form under an implicit column permutation
    (the pivot columns); H is assembled with that permutation undone, so it
    checks words in the original bit order. Raises if G is rank deficient.
    """
    rref, pivots = _rref(g)
    k, n = g.nrows, g.ncols
    if len(pivots) != k:
        raise ValueError(f"generator is rank deficient: rank {len(pivots)} < {k}")
    free = [c for c in range(n) if c not in set(pivots)]
    rows = []
    for f in free:
        h = 1 << f
        for i, p in enumerate(pivots):
            if (rref[i] >> f) & 1:
                h |= 1 << p
        rows.append(h)
    return BitMatrix(n - k, n, rows)


def save_matrix(m: BitMatrix, path) -> None:
    """Text format: first line "rows cols", then one 0/1 row per line."""
    with open(path, "w") as fh:
        fh.write(f"{m.nrows} {m.ncols}\n")
        for i in range(m.nrows):
            fh.write(m.row_word(i).to01() + "\n")


def load_matrix(path) -> BitMatrix:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError("bad matrix header, expected 'rows cols'")
        nrows, ncols = int(header[0]), int(header[1])
        rows = []
        for _ in range(nrows):
            line = fh.readline().strip()
            if len(line) != ncols or set(line) - {"0", "1"}:
                raise ValueError("bad matrix row line")
            rows.append(int(line[::-1], 2) if line else 0)
    return BitMatrix(nrows, ncols, rows)
