"""Command line front end: construct, simulate, verify, decode."""

from __future__ import annotations

import argparse
import sys

from . import codes
from .channel import ErasureInstance
from .gf2 import BitVector, bits_from_indices
from .sweep import DECODER_NAMES, SweepConfig, decode_side, run_sweep, verify_code, write_csv

__all__ = ["main", "resolve_code", "parse_rates"]


def resolve_code(spec: str) -> codes.CssCode:
    """'surface:<d>' or 'hgp:example' or a bundle directory path."""
    if spec.startswith("surface:"):
        return codes.surface_code(int(spec.split(":", 1)[1]))
    if spec == "hgp:example":
        return codes.example_hgp()
    return codes.load(spec)


def parse_rates(spec: str) -> list[float]:
    """'a:b:step' (inclusive) or a comma-separated list."""
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError("rate range must be start:stop:step")
        start, stop, step = (float(x) for x in parts)
        if step <= 0:
            raise ValueError("rate step must be positive")
        rates = []
        i = 0
        while True:
            p = round(start + i * step, 12)
            if p > stop + 1e-9:
                break
            rates.append(p)
            i += 1
        return rates
    return [float(x) for x in spec.split(",") if x.strip()]


def _read_indices(path: str) -> list[int]:
    out = []
    with open(path) as fh:
        for ln, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            try:
                out.append(int(stripped))
            except ValueError:
                raise ValueError(f"{path}:{ln}: expected one 0-based index per line") from None
    return out


def _cmd_construct(args) -> int:
    if args.code == "surface":
        if args.distance is None:
            raise SystemExit("construct --code surface requires --distance")
        code = codes.surface_code(args.distance)
    elif args.code == "hgp":
        if args.h1 is None or args.h2 is None:
            raise SystemExit("construct --code hgp requires --h1 and --h2")
        h1 = codes._read_mtx(args.h1)
        h2 = codes._read_mtx(args.h2)
        code = codes.hgp(h1, h2, name=f"hgp_{h1.num_rows}x{h1.num_cols}_{h2.num_rows}x{h2.num_cols}")
    else:
        raise SystemExit(f"unknown code family {args.code!r}")
    codes.save(code, args.out)
    print(f"wrote {code.name} (n={code.n}, k={code.k}) to {args.out}")
    return 0


def _cmd_simulate(args) -> int:
    code = resolve_code(args.code)
    config = SweepConfig(
        code=code,
        decoders=[d.strip() for d in args.decoders.split(",") if d.strip()],
        rates=parse_rates(args.p),
        trials=args.trials,
        master_seed=args.seed,
        workers=args.workers,
    )
    config.check()
    rows = run_sweep(config)
    write_csv(rows, args.out)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _cmd_verify(args) -> int:
    code = resolve_code(args.code)
    report = verify_code(code, args.p, args.trials, args.seed)
    for line in report.lines():
        print(line)
    return 0 if report.hard_violations == 0 else 1


def _cmd_decode(args) -> int:
    code = resolve_code(args.code)
    if args.decoder not in DECODER_NAMES:
        raise SystemExit(f"unknown decoder {args.decoder!r}; choose from {', '.join(DECODER_NAMES)}")
    erased = sorted(_read_indices(args.erasures))
    n = code.n
    s_x = BitVector.from_support(code.hz.num_rows, _read_indices(args.syndrome_x))
    s_z = BitVector.from_support(code.hx.num_rows, _read_indices(args.syndrome_z))
    instance = ErasureInstance(
        erased=erased,
        erased_bits=bits_from_indices(erased, n),
        x_error=BitVector.zeros(n),
        z_error=BitVector.zeros(n),
        s_x=s_x,
        s_z=s_z,
    )
    for side in ("x", "z"):
        result = decode_side(code, instance, side, args.decoder)
        support = " ".join(str(i) for i in result.estimate.support())
        status = result.status.value
        print(f"{side}: {support}".rstrip())
        print(f"{side}_status: {status}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="cssdec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_con = sub.add_parser("construct", help="build a code and write a bundle directory")
    p_con.add_argument("--code", required=True, choices=("surface", "hgp"))
    p_con.add_argument("--distance", type=int, help="surface code distance")
    p_con.add_argument("--h1", help="MatrixMarket file for the first classical code")
    p_con.add_argument("--h2", help="MatrixMarket file for the second classical code")
    p_con.add_argument("--out", required=True, help="bundle directory to write")
    p_con.set_defaults(func=_cmd_construct)

    p_sim = sub.add_parser("simulate", help="Monte Carlo sweep over erasure rates")
    p_sim.add_argument("--code", required=True, help="bundle dir, surface:<d>, or hgp:example")
    p_sim.add_argument("--decoders", required=True, help=f"comma list from: {','.join(DECODER_NAMES)}")
    p_sim.add_argument("--p", required=True, help="erasure rates, a:b:step or comma list")
    p_sim.add_argument("--trials", type=int, required=True)
    p_sim.add_argument("--seed", type=int, required=True)
    p_sim.add_argument("--workers", type=int, default=1)
    p_sim.add_argument("--out", required=True, help="CSV output path (append)")
    p_sim.set_defaults(func=_cmd_simulate)

    p_ver = sub.add_parser("verify", help="cross-check decoders against the exact ML oracle")
    p_ver.add_argument("--code", required=True)
    p_ver.add_argument("--p", type=float, required=True)
    p_ver.add_argument("--trials", type=int, required=True)
    p_ver.add_argument("--seed", type=int, required=True)
    p_ver.set_defaults(func=_cmd_verify)

    p_dec = sub.add_parser("decode", help="single-shot decode from erasure and syndrome files")
    p_dec.add_argument("--code", required=True)
    p_dec.add_argument("--erasures", required=True, help="file of erased qubit indices, one per line")
    p_dec.add_argument("--syndrome-x", required=True, dest="syndrome_x", help="set bits of s_x = Hz x")
    p_dec.add_argument("--syndrome-z", required=True, dest="syndrome_z", help="set bits of s_z = Hx z")
    p_dec.add_argument("--decoder", required=True)
    p_dec.set_defaults(func=_cmd_decode)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
