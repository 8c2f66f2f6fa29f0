"""Projected success of the shipped benchmarks with canonical vs optimized Toffoli expansion.

    python3 scripts/benchmark_report.py --device configs/device_example.json --scale 10
"""

from __future__ import annotations

import argparse

from pulseforge import estimator, io, metrics


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--device", required=True)
    ap.add_argument("--scale", type=float, default=estimator.DEFAULT_SCALE)
    ap.add_argument("--convention", default=metrics.DEFAULT_CONVENTION, choices=sorted(metrics.CONVENTIONS))
    args = ap.parse_args()
    rows, gmean = estimator.benchmark_report(io.load_device(args.device), args.scale, args.convention)
    print(estimator.format_benchmark_table(rows, gmean))


if __name__ == "__main__":
    main()
