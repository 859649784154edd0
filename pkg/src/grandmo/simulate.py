"""Monte Carlo block-error-rate harness with CSV output.

Each grid point (decoder, burst-exit rate, Eb/N0) runs chunked trials on
isolated RNG streams until enough block errors accumulate. Guess-loop
decoders go through the stream-order syndrome index, classical baselines
through their batch decoders; results are bit-reproducible for a given
master seed regardless of worker count.
"""

from __future__ import annotations

import csv
import os
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import sqrt
from typing import IO, Iterable

import numpy as np
from scipy.stats import beta as beta_dist

from .channel import (
    ChannelPoint,
    InterleaverSpec,
    deinterleave_bits,
    interleave_bits,
    sample_noise_bits,
    trial_stream,
)
from .classical import ReedDecoder, bm_decode_batch, rm_orders
from .codes import LinearCode
from .markov import interlace_offset
from .patterns import AbandonmentRule
from .syndrome_index import CodeTables, StreamIndex, build_index, pack_bits

DECODERS = ("grandmo", "grand-bsc", "bm", "ml")

CSV_COLUMNS = [
    "code", "n", "k", "decoder", "p_mode", "g", "b", "ebn0_db", "p",
    "interleaver", "packets", "abandon_mmax", "abandon_llast", "trials",
    "block_errors", "bler", "ci95", "mean_queries", "max_queries",
    "mean_err_weight", "seed",
]


class ConfigError(ValueError):
    """Inconsistent simulation configuration (CLI exit code 2)."""


@dataclass
class SimConfig:
    code: LinearCode
    decoders: list[str]
    ebn0_grid: list[float]
    g_grid: list[float | None]  # None entries are the memoryless channel
    p_mode: str = "paper"
    rule: AbandonmentRule | None = None  # default: half the code's min distance
    interleaver_kind: str | None = None
    packets: int = 1
    interleaver_seed: int = 0
    min_errors: int = 100
    max_trials: int = 1_000_000
    seed: int = 0
    chunk: int = 4096

    def resolved_rule(self) -> AbandonmentRule:
        if self.rule is not None:
            return self.rule
        if self.code.d is None:
            raise ConfigError(
                "code has unknown minimum distance; an explicit abandonment rule is required"
            )
        return AbandonmentRule.from_min_distance(self.code.d)

    def validate(self) -> None:
        for dec in self.decoders:
            if dec not in DECODERS:
                raise ConfigError(f"unknown decoder {dec!r}")
            if dec == "bm" and self.code.label != "bch":
                raise ConfigError("the Berlekamp-Massey baseline only decodes the BCH code")
            if dec == "ml":
                try:
                    rm_orders(self.code)
                except ValueError as exc:
                    raise ConfigError(f"majority-logic needs a Reed-Muller code: {exc}")
        if not self.ebn0_grid or not self.g_grid:
            raise ConfigError("empty channel grid")
        if self.min_errors < 1 or self.max_trials < 1:
            raise ConfigError("stopping rule must be positive")
        if self.interleaver_kind not in (None, "matrix", "random"):
            raise ConfigError(f"unknown interleaver {self.interleaver_kind!r}")
        if any(dec in ("grandmo", "grand-bsc") for dec in self.decoders):
            self.resolved_rule()


@dataclass
class BlerPoint:
    code: str
    n: int
    k: int
    decoder: str
    p_mode: str
    g: float | None
    b: float
    ebn0_db: float
    p: float
    interleaver: str
    packets: int
    abandon_mmax: int
    abandon_llast: int
    trials: int
    block_errors: int
    bler: float
    ci95: float
    mean_queries: float
    max_queries: int
    mean_err_weight: float
    seed: int
    weight_hist: np.ndarray | None = field(default=None, repr=False, compare=False)

    def csv_row(self) -> list[str]:
        return [
            self.code, str(self.n), str(self.k), self.decoder, self.p_mode,
            "bsc" if self.g is None else f"{self.g:g}",
            f"{self.b:.10g}", f"{self.ebn0_db:g}", f"{self.p:.10g}",
            self.interleaver, str(self.packets),
            str(self.abandon_mmax), str(self.abandon_llast),
            str(self.trials), str(self.block_errors),
            f"{self.bler:.8g}", f"{self.ci95:.6g}",
            f"{self.mean_queries:.8g}", str(self.max_queries),
            f"{self.mean_err_weight:.8g}", str(self.seed),
        ]


def _ci95_halfwidth(errors: int, trials: int) -> float:
    """Normal approximation, switching to exact Clopper-Pearson below 10 errors."""
    if trials == 0:
        return 0.0
    p = errors / trials
    if errors >= 10:
        return 1.96 * sqrt(p * (1.0 - p) / trials)
    lo = 0.0 if errors == 0 else float(beta_dist.ppf(0.025, errors, trials - errors + 1))
    hi = 1.0 if errors == trials else float(beta_dist.ppf(0.975, errors + 1, trials - errors))
    return (hi - lo) / 2.0


class _EngineCache:
    """Per-code tables plus a small LRU of stream indexes (RM ones are large)."""

    def __init__(self, maxsize: int = 6):
        self.tables: dict[int, tuple[LinearCode, CodeTables]] = {}
        self.indexes: OrderedDict = OrderedDict()
        self.reed: dict[int, ReedDecoder] = {}
        self.gfloat: dict[int, np.ndarray] = {}
        self.maxsize = maxsize

    def code_tables(self, code: LinearCode) -> CodeTables:
        entry = self.tables.get(id(code))
        if entry is None:
            entry = (code, CodeTables(code))
            self.tables[id(code)] = entry
        return entry[1]

    def generator_f32(self, code: LinearCode) -> np.ndarray:
        arr = self.gfloat.get(id(code))
        if arr is None:
            arr = np.array(code.g.to_lists(), dtype=np.float32)
            self.gfloat[id(code)] = arr
        return arr

    def stream_index(self, code: LinearCode, offset: int, rule: AbandonmentRule) -> StreamIndex:
        key = (id(code), offset, rule.max_bursts, rule.last_weight, rule.max_queries)
        idx = self.indexes.get(key)
        if idx is None:
            idx = build_index(code, offset, rule, self.code_tables(code))
            self.indexes[key] = (code, idx)
            while len(self.indexes) > self.maxsize:
                self.indexes.popitem(last=False)
            return idx
        self.indexes.move_to_end(key)
        return idx[1]

    def reed_decoder(self, code: LinearCode) -> ReedDecoder:
        dec = self.reed.get(id(code))
        if dec is None:
            r, m = rm_orders(code)
            dec = ReedDecoder(r, m)
            self.reed[id(code)] = dec
        return dec


_ENGINES = _EngineCache()


def _encode_batch(gf32: np.ndarray, msgs: np.ndarray) -> np.ndarray:
    # float32 matmul hits BLAS; k < 2^24 keeps the products exact
    return (msgs.astype(np.float32) @ gf32).astype(np.int64).astype(np.uint8) & 1


def run_bler_point(
    config: SimConfig,
    decoder: str,
    g: float | None,
    ebn0_db: float,
    point_index: int = 0,
) -> BlerPoint:
    """One Monte Carlo grid point; deterministic given (config.seed, point_index)."""
    code = config.code
    n = code.n
    point = ChannelPoint.build(ebn0_db, code.rate, g, config.p_mode)
    rule = config.resolved_rule()
    is_grand = decoder in ("grandmo", "grand-bsc")

    spec = None
    if config.interleaver_kind is not None:
        spec = InterleaverSpec(config.interleaver_kind, config.packets, n, config.interleaver_seed)

    tables = _ENGINES.code_tables(code)
    gf32 = _ENGINES.generator_f32(code)
    noiseless = point.p == 0.0
    params = None if noiseless else point.params(n)

    if is_grand:
        if decoder == "grand-bsc" or noiseless:
            offset = 0
        else:
            offset = interlace_offset(params)
        index = _ENGINES.stream_index(code, offset, rule)
    elif decoder == "ml":
        reed = _ENGINES.reed_decoder(code)

    packets = spec.packets if spec else 1
    group_bits = spec.stream_bits if spec else n
    trials = 0
    block_errors = 0
    query_sum = 0.0
    query_max = 0
    weight_sum = 0.0
    successes = 0
    weight_hist = np.zeros(n + 1, dtype=np.int64)
    chunk_index = 0

    while trials < config.max_trials and block_errors < config.min_errors:
        groups = max(1, min(config.chunk, config.max_trials - trials) // packets)
        words = groups * packets
        rng = trial_stream(config.seed, point_index, chunk_index)
        chunk_index += 1

        msgs = rng.integers(0, 2, size=(words, code.k), dtype=np.uint8)
        cwords = _encode_batch(gf32, msgs)
        if noiseless:
            noise_stream = np.zeros((groups, group_bits), dtype=np.uint8)
        else:
            noise_stream = sample_noise_bits(params, group_bits, groups, rng)

        if spec is not None:
            data = cwords.reshape(groups, packets * n)
            tx = interleave_bits(spec, data)
            rx = tx ^ noise_stream
            y = deinterleave_bits(spec, rx).reshape(words, n)
            noise_eff = deinterleave_bits(spec, noise_stream).reshape(words, n)
        else:
            noise_eff = noise_stream
            y = cwords ^ noise_eff

        if is_grand:
            syns = tables.syndromes_of_bits(y)
            hit, idx, lane_lo, lane_hi = index.lookup_batch(syns)
            n_lo, n_hi = pack_bits(noise_eff)
            success = hit & (lane_lo == n_lo) & (lane_hi == n_hi)
            errs = ~success
            queries = np.where(hit, idx.astype(np.int64) + 1, index.stream_len)
            query_sum += float(queries.sum())
            query_max = max(query_max, int(queries.max()))
        else:
            if decoder == "bm":
                out, fail = bm_decode_batch(code, y)
            else:
                out, _, fail = reed.decode_batch(y)
            errs = fail | (out != cwords).any(axis=1)
            success = ~errs

        weights = noise_eff.sum(axis=1, dtype=np.int64)
        ok_weights = weights[success]
        weight_sum += float(ok_weights.sum())
        successes += int(success.sum())
        weight_hist += np.bincount(ok_weights, minlength=n + 1)

        trials += words
        block_errors += int(errs.sum())

    return BlerPoint(
        code=code.label,
        n=n,
        k=code.k,
        decoder=decoder,
        p_mode=config.p_mode,
        g=g,
        b=point.b,
        ebn0_db=ebn0_db,
        p=point.p,
        interleaver=config.interleaver_kind or "none",
        packets=packets,
        abandon_mmax=rule.max_bursts,
        abandon_llast=rule.last_weight,
        trials=trials,
        block_errors=block_errors,
        bler=block_errors / trials,
        ci95=_ci95_halfwidth(block_errors, trials),
        mean_queries=query_sum / trials if is_grand else 0.0,
        max_queries=query_max,
        mean_err_weight=weight_sum / successes if successes else 0.0,
        seed=config.seed,
        weight_hist=weight_hist,
    )


def _worker_count() -> int:
    env = os.environ.get("GRANDMO_THREADS", "")
    if env.strip():
        return max(1, int(env))
    return min(4, os.cpu_count() or 1)


def sweep(config: SimConfig, out: IO[str] | None = None) -> list[BlerPoint]:
    """Run every (decoder, g, ebn0) point; stream CSV rows in grid order.

    Points may execute in parallel (capped by GRANDMO_THREADS), but rows
    are emitted in deterministic grid order and every point's result is
    independent of scheduling, so repeated runs are byte-identical.
    """
    config.validate()
    grid = [
        (dec, g, e)
        for dec in config.decoders
        for g in config.g_grid
        for e in config.ebn0_grid
    ]
    writer = None
    if out is not None:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)

    results: list[BlerPoint] = []
    workers = _worker_count()
    if workers == 1:
        for i, (dec, g, e) in enumerate(grid):
            pt = run_bler_point(config, dec, g, e, point_index=i)
            results.append(pt)
            if writer:
                writer.writerow(pt.csv_row())
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(run_bler_point, config, dec, g, e, i)
                for i, (dec, g, e) in enumerate(grid)
            ]
            for fut in futures:
                pt = fut.result()
                results.append(pt)
                if writer:
                    writer.writerow(pt.csv_row())
    return results


def ebn0_at_target_bler(points: Iterable[BlerPoint], target: float) -> float | None:
    """Eb/N0 where one curve crosses the target BLER, by log-linear interpolation.

    Points must belong to a single curve; they are sorted by Eb/N0 here.
    Measured zeros are floored at half a count for interpolation. Returns
    None when the curve never brackets the target (no extrapolation).
    """
    pts = sorted(points, key=lambda pt: pt.ebn0_db)
    if not pts:
        return None
    xs = [pt.ebn0_db for pt in pts]
    ys = [max(pt.bler, 0.5 / pt.trials) if pt.trials else 1.0 for pt in pts]
    for x, pt in zip(xs, pts):
        if pt.bler == target:
            return x
    for i in range(len(pts) - 1):
        hi, lo = ys[i], ys[i + 1]
        if hi >= target >= lo and hi > lo:
            t = (np.log10(hi) - np.log10(target)) / (np.log10(hi) - np.log10(lo))
            return xs[i] + t * (xs[i + 1] - xs[i])
    return None


def write_csv(points: Iterable[BlerPoint], out: IO[str]) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for pt in points:
        writer.writerow(pt.csv_row())
