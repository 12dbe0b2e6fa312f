"""Command line for the convergence comparison.

    python3 -m convaware_demo --out-dir results

generates per-seed float32 kernel files through the convaware CLI,
trains every (scheme, seed) run, and writes comparison.csv plus
convergence.png into the output directory. The final accuracy line is
a report, not a judgment: stochastic training outcomes vary.
"""

from __future__ import annotations

import argparse
import sys

from .demo import CSV_NAME, PLOT_NAME, ConfigError, DemoConfig, generate_weight_files, run_comparison


def _seed_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad seed list {text!r}; want e.g. 0,1,2")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="convaware_demo", description=__doc__)
    parser.add_argument("--out-dir", required=True, help="directory for CSV, plot, and weights")
    parser.add_argument("--epochs", type=int, default=10)
    parser.add_argument("--batch-size", type=int, default=64)
    parser.add_argument("--seeds", type=_seed_list, default=(0, 1, 2, 3, 4))
    parser.add_argument(
        "--schemes",
        default="cai,he_normal",
        help="comma-separated scheme labels passed through to the generator",
    )
    args = parser.parse_args(argv)

    schemes = tuple(args.schemes.split(","))
    try:
        files = generate_weight_files(f"{args.out_dir}/weights", schemes, args.seeds)
        config = DemoConfig(
            weight_files=files,
            seeds=args.seeds,
            epochs=args.epochs,
            batch_size=args.batch_size,
        )
        rows = run_comparison(config, args.out_dir)
    except ConfigError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    print(f"csv={args.out_dir}/{CSV_NAME}")
    print(f"plot={args.out_dir}/{PLOT_NAME}")
    last = {row["scheme"]: row for row in rows}
    summary = " ".join(
        f"{scheme}={row['median_accuracy']:.4f}" for scheme, row in last.items()
    )
    print(f"final median accuracy: {summary}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
