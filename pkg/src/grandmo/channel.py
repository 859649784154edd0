"""Gilbert channel sampling, Eb/N0 mapping, and block interleavers.

Randomness comes from counter-based Philox4x64-10 streams keyed by
(master seed, grid point, chunk), so every trial batch is reproducible
bit for bit regardless of execution order or worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from .gf2 import BitWord
from .markov import MarkovParams

P_MODES = ("paper", "standard")


def p_from_ebn0(ebn0_db: float, rate: float, mode: str = "paper") -> float:
    """Stationary flip probability from energy per information bit (dB).

    mode "paper" uses erfc(sqrt(2 R Eb/N0)); mode "standard" is the
    textbook hard-decision BPSK expression (1/2) erfc(sqrt(R Eb/N0)).
    The two differ by roughly a factor of two in rate at a given p; both
    are kept so curve shapes can be compared either way.
    """
    if not 0.0 < rate <= 1.0:
        raise ValueError(f"rate must be in (0, 1], got {rate}")
    lin = 10.0 ** (ebn0_db / 10.0)
    if mode == "paper":
        return float(erfc(math.sqrt(2.0 * rate * lin)))
    if mode == "standard":
        return float(0.5 * erfc(math.sqrt(rate * lin)))
    raise ValueError(f"p mode must be one of {P_MODES}, got {mode!r}")


@dataclass(frozen=True)
class ChannelPoint:
    """One operating point: Eb/N0 and rate mapped to chain parameters.

    g is None for the memoryless (BSC) channel, in which case the chain
    degenerates to b = p, exit rate 1 - p.
    """

    ebn0_db: float
    rate: float
    g: float | None
    p: float
    b: float
    p_mode: str

    @classmethod
    def build(cls, ebn0_db: float, rate: float, g: float | None, mode: str = "paper"):
        p = p_from_ebn0(ebn0_db, rate, mode)
        if g is None:
            b = p
        else:
            if p >= 0.5:
                raise ValueError(f"flip rate {p:.4g} >= 1/2 at {ebn0_db} dB")
            b = p * g / (1.0 - p)
        return cls(ebn0_db, rate, g, p, b, mode)

    @property
    def is_bsc(self) -> bool:
        return self.g is None

    @property
    def g_effective(self) -> float:
        return 1.0 - self.p if self.g is None else self.g

    def params(self, n: int) -> MarkovParams:
        return MarkovParams(b=self.b, g=self.g_effective, n=n)


def trial_stream(master_seed: int, point_index: int, chunk_index: int) -> np.random.Generator:
    """Isolated Philox stream for one chunk of trials at one grid point."""
    bitgen = np.random.Philox(key=master_seed, counter=[chunk_index, point_index, 0, 0])
    return np.random.Generator(bitgen)


def sample_noise_bits(
    params: MarkovParams, nbits: int, count: int, rng: np.random.Generator
) -> np.ndarray:
    """(count, nbits) uint8 noise words from the two-state chain.

    The chain starts in its stationary distribution (Bad with probability
    p) and emits 1 exactly while in Bad.
    """
    out = np.empty((count, nbits), dtype=np.uint8)
    bad = rng.random(count) < params.p
    out[:, 0] = bad
    b, g = params.b, params.g
    for t in range(1, nbits):
        u = rng.random(count)
        bad = np.where(bad, u >= g, u < b)
        out[:, t] = bad
    return out


def sample_noise(params: MarkovParams, n: int, rng: np.random.Generator) -> BitWord:
    """One noise word of length n."""
    bits = sample_noise_bits(params, n, 1, rng)[0]
    return BitWord.from_bits(int(b) for b in bits)


# ------------------------------------------------------------ interleavers


@dataclass(frozen=True)
class InterleaverSpec:
    """Permutation spreading `packets` codewords of length n across one stream.

    matrix kind: bits are written column-major into an s x s square with
    s = ceil(sqrt(packets * n)), zero-padded, and read row-major; the pad
    positions ride through the channel and are dropped on deinterleave.
    random kind: a seeded uniform permutation of all packets * n positions.
    """

    kind: str
    packets: int
    n: int
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("matrix", "random"):
            raise ValueError(f"interleaver kind must be matrix or random, got {self.kind!r}")
        if self.packets < 1 or self.n < 1:
            raise ValueError("packets and n must be positive")

    @property
    def data_bits(self) -> int:
        return self.packets * self.n

    @property
    def side(self) -> int:
        return math.isqrt(self.data_bits - 1) + 1 if self.kind == "matrix" else 0

    @property
    def stream_bits(self) -> int:
        return self.side * self.side if self.kind == "matrix" else self.data_bits

    def permutation(self) -> np.ndarray:
        """perm[d] = transmitted position of data bit d."""
        if self.kind == "matrix":
            d = np.arange(self.data_bits, dtype=np.int64)
            s = self.side
            return (d % s) * s + d // s
        rng = np.random.Generator(np.random.Philox(key=self.seed))
        return rng.permutation(self.data_bits).astype(np.int64)


def interleave_bits(spec: InterleaverSpec, data: np.ndarray) -> np.ndarray:
    """data (..., data_bits) -> transmitted stream (..., stream_bits)."""
    if data.shape[-1] != spec.data_bits:
        raise ValueError(f"expected {spec.data_bits} data bits, got {data.shape[-1]}")
    out = np.zeros(data.shape[:-1] + (spec.stream_bits,), dtype=data.dtype)
    out[..., spec.permutation()] = data
    return out


def deinterleave_bits(spec: InterleaverSpec, stream: np.ndarray) -> np.ndarray:
    """Inverse of interleave_bits; pad positions are discarded."""
    if stream.shape[-1] != spec.stream_bits:
        raise ValueError(f"expected {spec.stream_bits} stream bits, got {stream.shape[-1]}")
    return stream[..., spec.permutation()]


def interleave(spec: InterleaverSpec, blocks: list[BitWord]) -> BitWord:
    """Buffer `packets` codewords and emit the interleaved stream word."""
    if len(blocks) != spec.packets:
        raise ValueError(f"expected {spec.packets} blocks, got {len(blocks)}")
    data = np.zeros(spec.data_bits, dtype=np.uint8)
    for i, blk in enumerate(blocks):
        if blk.n != spec.n:
            raise ValueError(f"block {i} has length {blk.n}, expected {spec.n}")
        data[i * spec.n : (i + 1) * spec.n] = list(blk)
    stream = interleave_bits(spec, data)
    return BitWord.from_bits(int(b) for b in stream)


def deinterleave(spec: InterleaverSpec, stream: BitWord) -> list[BitWord]:
    if stream.n != spec.stream_bits:
        raise ValueError(f"stream length {stream.n}, expected {spec.stream_bits}")
    data = deinterleave_bits(spec, np.array(list(stream), dtype=np.uint8))
    return [
        BitWord.from_bits(int(b) for b in data[i * spec.n : (i + 1) * spec.n])
        for i in range(spec.packets)
    ]
