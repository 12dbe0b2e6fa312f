"""Command-line surface: generate banks, verify files, run the selftest.

Output is byte-identical across runs for fixed arguments: floats print
through repr, no timestamps, deterministic figure filenames. Exit
codes: 0 success, 1 assertion or runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import ConfigError, DomainError, FormatError, NumericError
from .initializers import SCHEMES, FilterBank, InitSpec, initialize
from .npyio import read_array, write_array
from .selftest import run_selftest
from .verify import POLICIES, analyze, check, determinism_hash

__all__ = ["main"]

_USAGE_EXIT = 2
_FAILURE_EXIT = 1


def _parse_shape(text: str) -> tuple[int, ...]:
    try:
        shape = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise DomainError(f"shape must be comma-separated integers, got {text!r}") from None
    if len(shape) not in (3, 4):
        raise DomainError(f"shape must have rank 3 (1-D) or 4 (2-D), got {shape}")
    return shape


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="convaware",
        description="Synthesize, export, and verify convolution weight banks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="initialize a bank and write it to an NPY file")
    gen.add_argument("--scheme", choices=SCHEMES, default="cai")
    gen.add_argument("--shape", required=True, help="f,s,r,c for 2-D kernels or f,s,r for 1-D")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--eps-std", type=float, default=0.05)
    gen.add_argument("--fan-in", type=int, default=None)
    gen.add_argument("--no-scale", action="store_true", help="skip the variance-target scaling")
    gen.add_argument("--dtype", choices=("f32", "f64"), default="f64")
    gen.add_argument("--out", required=True)
    gen.add_argument("--gain", type=float, default=1.0, help="orthogonal scheme gain")
    gen.add_argument("--low", type=float, default=-0.05, help="uniform scheme lower bound")
    gen.add_argument("--high", type=float, default=0.05, help="uniform scheme upper bound")
    gen.add_argument("--mu", type=float, default=0.0, help="normal scheme mean")
    gen.add_argument("--sigma", type=float, default=0.3, help="normal scheme std deviation")
    gen.add_argument("--quiet", action="store_true", help="print only the determinism hash")
    gen.add_argument("--json", action="store_true", help="print the report as one JSON object")
    gen.add_argument("--figures", metavar="DIR", default=None, help="render report figures here")

    ver = sub.add_parser("verify", help="run a named assertion policy against an NPY file")
    ver.add_argument("--in", dest="path", required=True)
    ver.add_argument("--policy", required=True, choices=sorted(POLICIES))
    ver.add_argument("--fan-in", type=int, default=None)
    ver.add_argument("--expect-hash", default=None, help="assert the file's determinism hash")
    ver.add_argument("--json", action="store_true")
    ver.add_argument("--figures", metavar="DIR", default=None)

    st = sub.add_parser("selftest", help="run the built-in invariant sweeps")
    st.add_argument("--seed", type=int, default=2024)
    st.add_argument("--fast", action="store_true", help="tenfold-reduced case counts")
    return parser


def _cmd_generate(args) -> int:
    spec = InitSpec(
        shape=_parse_shape(args.shape),
        scheme=args.scheme,
        seed=args.seed,
        eps_std=args.eps_std,
        fan_in=args.fan_in,
        scale=not args.no_scale,
        gain=args.gain,
        low=args.low,
        high=args.high,
        mu=args.mu,
        sigma=args.sigma,
    )
    bank = initialize(spec)
    write_array(args.out, bank, dtype="f4" if args.dtype == "f32" else "f8")
    digest = determinism_hash(bank)
    if args.quiet:
        print(digest)
        return 0
    report = analyze(bank)
    if args.json:
        print(json.dumps({**report.to_dict(), "hash": digest}, sort_keys=True))
    else:
        for line in report.to_lines():
            print(line)
        print(f"hash={digest}")
    if args.figures:
        from .figures import render_report_figures

        for path in render_report_figures(bank, report, args.figures):
            print(f"figure={path}")
    return 0


def _cmd_verify(args) -> int:
    bank = FilterBank(weights=read_array(args.path), spec=None)
    results = check(bank, args.policy, expected_hash=args.expect_hash, fan_in=args.fan_in)
    if args.json:
        print(
            json.dumps(
                [
                    {
                        "name": r.name,
                        "passed": r.passed,
                        "value": r.value,
                        "limit": r.limit,
                        "detail": r.detail,
                    }
                    for r in results
                ],
                sort_keys=True,
            )
        )
    else:
        for result in results:
            print(result.to_line())
    if args.figures:
        from .figures import render_report_figures

        for path in render_report_figures(bank, analyze(bank), args.figures):
            print(f"figure={path}")
    return _FAILURE_EXIT if any(not r.passed for r in results) else 0


def _cmd_selftest(args) -> int:
    results = run_selftest(seed=args.seed, fast=args.fast)
    for result in results:
        print(result.to_line())
    failures = sum(not r.ok for r in results)
    print(f"selftest: {len(results) - failures}/{len(results)} checks passed")
    return _FAILURE_EXIT if failures else 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "generate":
            return _cmd_generate(args)
        if args.command == "verify":
            return _cmd_verify(args)
        return _cmd_selftest(args)
    except (DomainError, ConfigError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return _USAGE_EXIT
    except (NumericError, FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _FAILURE_EXIT


if __name__ == "__main__":
    raise SystemExit(main())
