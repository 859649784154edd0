"""Command line front end: codegen, patterns, decode, simulate, interleave-study.

Exit codes: 0 on success, 2 for configuration errors, 3 for I/O failures.
A --config FILE of key=value lines overrides the corresponding flags.
"""

from __future__ import annotations

import argparse
import sys

from .channel import ChannelPoint
from .codes import LinearCode, make_bch, make_rlc, make_rm
from .decoder import grand_decode
from .classical import bm_decode, majority_logic_decode
from .gf2 import BitWord, save_matrix
from .markov import MarkovParams, interlace_offset
from .patterns import DEFAULT_QUERY_CAP, AbandonmentRule, PatternStream
from .simulate import ConfigError, SimConfig, sweep, write_csv


def build_code(spec: str) -> LinearCode:
    """Code spec: 'bch', 'rm', 'rm:R:M', or 'rlc:N:K:SEED'."""
    parts = spec.split(":")
    fam = parts[0]
    if fam == "bch":
        return make_bch()
    if fam == "rm":
        if len(parts) == 1:
            return make_rm()
        if len(parts) == 3:
            return make_rm(int(parts[1]), int(parts[2]))
        raise ConfigError(f"bad rm spec {spec!r}, expected rm or rm:R:M")
    if fam == "rlc":
        if len(parts) != 4:
            raise ConfigError(f"bad rlc spec {spec!r}, expected rlc:N:K:SEED")
        return make_rlc(int(parts[1]), int(parts[2]), int(parts[3]))
    raise ConfigError(f"unknown code family {fam!r}")


def parse_grid(text: str) -> list[float]:
    """'a,b,c' or 'start:stop:step' (stop inclusive within half a step)."""
    if ":" in text:
        start, stop, step = (float(x) for x in text.split(":"))
        out = []
        x = start
        while x <= stop + step / 2:
            out.append(round(x, 10))
            x += step
        return out
    return [float(x) for x in text.split(",")]


def parse_g_grid(text: str) -> list[float | None]:
    out: list[float | None] = []
    for tok in text.split(","):
        tok = tok.strip()
        out.append(None if tok.lower() == "bsc" else float(tok))
    return out


def parse_word(text: str, n: int) -> BitWord:
    text = text.strip()
    if text.lower().startswith("0x"):
        return BitWord(n, int(text, 16))
    if len(text) != n:
        raise ConfigError(f"received word has {len(text)} bits, code expects {n}")
    return BitWord.from_string(text)


def _channel_params(args, n: int) -> MarkovParams:
    if args.p is None and args.ebn0 is None:
        raise ConfigError("need --p or --ebn0 to set the channel point")
    if args.p is not None:
        p = args.p
    else:
        rate = args.rate if args.rate is not None else 1.0
        from .channel import p_from_ebn0

        p = p_from_ebn0(args.ebn0, rate, args.p_mode)
    if args.bsc:
        return MarkovParams(b=p, g=1.0 - p, n=n)
    if args.g is None:
        raise ConfigError("need --g (or --bsc) to fix the burst-exit rate")
    return MarkovParams.from_p_and_g(p, args.g, n)


def _rule(args, code: LinearCode | None) -> AbandonmentRule:
    cap = args.max_queries
    if args.mmax is not None or args.llast is not None:
        if args.mmax is None or args.llast is None:
            raise ConfigError("--mmax and --llast must be given together")
        return AbandonmentRule(args.mmax, args.llast, cap)
    if code is not None and code.d is not None:
        return AbandonmentRule.from_min_distance(code.d, cap)
    raise ConfigError("no --mmax/--llast and the code has no known minimum distance")


def cmd_codegen(args) -> int:
    code = build_code(args.code)
    prefix = args.out
    save_matrix(code.g, f"{prefix}.g.txt")
    save_matrix(code.h, f"{prefix}.h.txt")
    meta = (
        f"family={code.label} n={code.n} k={code.k} d={code.d if code.d is not None else 'unknown'}"
        f" seed={code.seed if code.seed is not None else '-'}"
        f" poly={code.poly if code.poly is not None else '-'}"
    )
    with open(f"{prefix}.meta", "w") as fh:
        fh.write(meta + "\n")
    print(meta)
    return 0


def cmd_patterns(args) -> int:
    params = _channel_params(args, args.n)
    if args.mmax is not None or args.llast is not None:
        rule = _rule(args, None)
    else:
        rule = AbandonmentRule(3, 3, args.max_queries)
    offset = args.offset
    stream = PatternStream(params, rule, offset=offset, rounding=args.rounding)
    limit = args.limit
    count = 0
    while limit is None or count < limit:
        rec = stream.next_record()
        if rec is None:
            break
        sub = rec.subclass
        print(
            f"{rec.index}\t{sub.bursts}\t{sub.weight}\t{sub.case.value}"
            f"\t{rec.log_prob:.6f}\t{rec.word.to01()}"
        )
        count += 1
    return 0


def cmd_decode(args) -> int:
    code = build_code(args.code)
    y = parse_word(args.received, code.n)
    if args.decoder == "bm":
        out = bm_decode(code, y)
        _print_classical(y, out)
        return 0
    if args.decoder == "ml":
        out = majority_logic_decode(code, y)
        _print_classical(y, out)
        return 0
    params = _channel_params(args, code.n)
    rule = _rule(args, code)
    offset = 0 if args.decoder == "grand-bsc" else interlace_offset(params)
    stream = PatternStream(params, rule, offset=offset)
    outcome = grand_decode(y, code, stream)
    if outcome.decoded:
        print("status decoded")
        print(f"codeword {outcome.codeword.to01()}")
        print(f"noise    {outcome.inferred_noise.to01()}")
    else:
        print("status abandoned")
    print(f"queries  {outcome.queries}")
    return 0


def _print_classical(y: BitWord, out: BitWord | None) -> None:
    if out is None:
        print("status failure")
    else:
        print("status decoded")
        print(f"codeword {out.to01()}")
        print(f"noise    {(y ^ out).to01()}")
    print("queries  0")


def _sim_config(args) -> SimConfig:
    code = build_code(args.code)
    rule = None
    if args.mmax is not None or args.llast is not None:
        rule = _rule(args, code)
    elif args.max_queries != DEFAULT_QUERY_CAP and code.d is not None:
        rule = AbandonmentRule.from_min_distance(code.d, args.max_queries)
    elif code.d is None:
        # random linear codes default to the comparison BCH rule
        rule = AbandonmentRule(3, 3, args.max_queries)
    return SimConfig(
        code=code,
        decoders=[d.strip() for d in args.decoders.split(",")],
        ebn0_grid=parse_grid(args.ebn0_grid),
        g_grid=parse_g_grid(args.g_grid),
        p_mode=args.p_mode,
        rule=rule,
        interleaver_kind=None if args.interleaver == "none" else args.interleaver,
        packets=args.packets,
        interleaver_seed=args.interleaver_seed,
        min_errors=args.min_errors,
        max_trials=args.max_trials,
        seed=args.seed,
    )


def cmd_simulate(args) -> int:
    config = _sim_config(args)
    if args.out == "-":
        sweep(config, sys.stdout)
    else:
        with open(args.out, "w") as fh:
            sweep(config, fh)
    return 0


def cmd_interleave_study(args) -> int:
    code = build_code(args.code)
    rows = []
    packet_list = [int(x) for x in args.packets_list.split(",")]
    base = dict(
        code=code,
        ebn0_grid=parse_grid(args.ebn0_grid),
        g_grid=[args.g],
        p_mode=args.p_mode,
        min_errors=args.min_errors,
        max_trials=args.max_trials,
        seed=args.seed,
    )
    for packets in packet_list:
        cfg = SimConfig(
            decoders=["bm"],
            interleaver_kind="matrix",
            packets=packets,
            **base,
        )
        rows.extend(sweep(cfg))
    rows.extend(sweep(SimConfig(decoders=["grandmo"], **base)))
    if args.out == "-":
        write_csv(rows, sys.stdout)
    else:
        with open(args.out, "w") as fh:
            write_csv(rows, fh)
    return 0


def _add_channel_flags(sub, include_rate=True):
    sub.add_argument("--p", type=float, default=None, help="stationary flip probability")
    sub.add_argument("--ebn0", type=float, default=None, help="Eb/N0 in dB (alternative to --p)")
    sub.add_argument("--g", type=float, default=None, help="burst-exit probability")
    sub.add_argument("--bsc", action="store_true", help="memoryless channel (b = 1-g)")
    sub.add_argument("--p-mode", choices=("paper", "standard"), default="paper")
    if include_rate:
        sub.add_argument("--rate", type=float, default=None, help="code rate for --ebn0 mapping")


def _add_rule_flags(sub):
    sub.add_argument("--mmax", type=int, default=None, help="abandonment burst bound")
    sub.add_argument("--llast", type=int, default=None, help="abandonment weight at the burst bound")
    sub.add_argument("--max-queries", type=int, default=DEFAULT_QUERY_CAP)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="grandmo", description=__doc__)
    parser.add_argument("--config", default=None, help="key=value file overriding flags")
    subs = parser.add_subparsers(dest="command", required=True)

    cg = subs.add_parser("codegen", help="emit generator/parity matrices and metadata")
    cg.add_argument("--code", required=True)
    cg.add_argument("--out", required=True, help="output path prefix")
    cg.set_defaults(func=cmd_codegen)

    pat = subs.add_parser("patterns", help="dump the pattern stream as a table")
    pat.add_argument("--n", type=int, required=True)
    _add_channel_flags(pat)
    _add_rule_flags(pat)
    pat.add_argument("--offset", type=int, default=None, help="override the interlace offset")
    pat.add_argument("--rounding", choices=("floor", "round"), default="floor")
    pat.add_argument("--limit", type=int, default=None)
    pat.set_defaults(func=cmd_patterns)

    dec = subs.add_parser("decode", help="decode one received word")
    dec.add_argument("--code", required=True)
    dec.add_argument("--decoder", choices=("grandmo", "grand-bsc", "bm", "ml"), default="grandmo")
    dec.add_argument("--received", required=True, help="0/1 string or 0x-prefixed hex")
    _add_channel_flags(dec)
    _add_rule_flags(dec)
    dec.set_defaults(func=cmd_decode)

    sim = subs.add_parser("simulate", help="Monte Carlo BLER sweep to CSV")
    sim.add_argument("--code", required=True)
    sim.add_argument("--decoders", default="grandmo")
    sim.add_argument("--ebn0-grid", required=True, help="comma list or start:stop:step")
    sim.add_argument("--g-grid", default="bsc", help="comma list of g values and/or 'bsc'")
    sim.add_argument("--p-mode", choices=("paper", "standard"), default="paper")
    sim.add_argument("--interleaver", choices=("none", "matrix", "random"), default="none")
    sim.add_argument("--packets", type=int, default=1)
    sim.add_argument("--interleaver-seed", type=int, default=0)
    sim.add_argument("--min-errors", type=int, default=100)
    sim.add_argument("--max-trials", type=int, default=1_000_000)
    sim.add_argument("--seed", type=int, default=0)
    _add_rule_flags(sim)
    sim.add_argument("--out", default="-", help="CSV path or - for stdout")
    sim.set_defaults(func=cmd_simulate)

    study = subs.add_parser(
        "interleave-study",
        help="matrix-interleaved B-M over packet counts vs un-interleaved GRAND-MO",
    )
    study.add_argument("--code", default="bch")
    study.add_argument("--g", type=float, default=0.05)
    study.add_argument("--packets-list", default="1,4,16,64")
    study.add_argument("--ebn0-grid", default="2.5:7:0.5")
    study.add_argument("--p-mode", choices=("paper", "standard"), default="paper")
    study.add_argument("--min-errors", type=int, default=100)
    study.add_argument("--max-trials", type=int, default=100000)
    study.add_argument("--seed", type=int, default=0)
    study.add_argument("--out", default="-")
    study.set_defaults(func=cmd_interleave_study)

    return parser


def _apply_config_file(argv: list[str]) -> list[str]:
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    path = argv[i + 1]
    extras: list[str] = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            extras.extend([f"--{key.strip().replace('_', '-')}", value.strip()])
    return argv + extras


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _apply_config_file(argv)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
