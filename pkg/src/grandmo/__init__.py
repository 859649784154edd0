"""Burst-channel forward error correction kit around guess-and-check decoding.

Core pieces: bit-packed GF(2) linear algebra, the two-state Markov noise
model with exact subclass probabilities, a likelihood-ordered noise pattern
stream, the universal guess-loop decoder plus a syndrome-index fast path,
BCH/Reed-Muller/random-linear codebooks, classical baseline decoders,
Gilbert channel sampling with interleavers, and a Monte Carlo BLER harness.
"""

from .gf2 import BitMatrix, BitWord, mat_vec_mul, parity_from_generator, rank, xor_add
from .markov import (
    BoundaryCase,
    MarkovParams,
    SubclassId,
    classify,
    interlace_offset,
    log_subclass_prob,
    log_word_prob,
    subclass_count,
)
from .patterns import (
    AbandonmentRule,
    PatternStream,
    class_key,
    emitted_set_contains_bsc_set,
    materialize,
    scheduled_classes,
)
from .decoder import DecodeOutcome, DecodeStatus, grand_decode, membership
from .codes import LinearCode, encode, exhaustive_min_distance, make_bch, make_rlc, make_rm
from .classical import bm_decode, majority_logic_decode
from .channel import (
    ChannelPoint,
    InterleaverSpec,
    deinterleave,
    interleave,
    p_from_ebn0,
    sample_noise,
    trial_stream,
)
from .syndrome_index import StreamIndex, build_index
from .simulate import (
    BlerPoint,
    SimConfig,
    ebn0_at_target_bler,
    run_bler_point,
    sweep,
)

__all__ = [
    "BitMatrix", "BitWord", "mat_vec_mul", "parity_from_generator", "rank", "xor_add",
    "BoundaryCase", "MarkovParams", "SubclassId", "classify", "interlace_offset",
    "log_subclass_prob", "log_word_prob", "subclass_count",
    "AbandonmentRule", "PatternStream", "class_key", "emitted_set_contains_bsc_set",
    "materialize", "scheduled_classes",
    "DecodeOutcome", "DecodeStatus", "grand_decode", "membership",
    "LinearCode", "encode", "exhaustive_min_distance", "make_bch", "make_rlc", "make_rm",
    "bm_decode", "majority_logic_decode",
    "ChannelPoint", "InterleaverSpec", "deinterleave", "interleave", "p_from_ebn0",
    "sample_noise", "trial_stream",
    "StreamIndex", "build_index",
    "BlerPoint", "SimConfig", "ebn0_at_target_bler", "run_bler_point", "sweep",
]

__version__ = "0.1.0"
