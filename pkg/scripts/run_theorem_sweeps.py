#!/usr/bin/env python3
"""Run the randomized shape-classification sweeps, one per regime and
correlation class, and print a compact summary table.

Any confirmed violation dumps the offending model/state for replay.
"""

from __future__ import annotations

import argparse
import json
import sys

from termshapes.vasicek import ScaleRegime
from termshapes.verify import SweepConfig, sweep_theorem

SWEEPS = [
    (ScaleRegime.SEPARATED, "nonnegative"),
    (ScaleRegime.SEPARATED, "negative"),
    (ScaleRegime.PROXIMAL, "nonnegative"),
    (ScaleRegime.PROXIMAL, "negative"),
    (ScaleRegime.CRITICAL, "any"),
]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=100_000)
    parser.add_argument("--seed", type=int, default=41)
    parser.add_argument("--dump", help="write violation dumps to this JSON file")
    args = parser.parse_args()

    all_ok = True
    dumps = []
    for offset, (regime, rho_class) in enumerate(SWEEPS):
        cfg = SweepConfig(
            regime=regime,
            rho_class=rho_class,
            n_samples=args.samples,
            seed=args.seed + offset,
        )
        report = sweep_theorem(cfg)
        all_ok &= report.passed
        status = "ok" if report.passed else "VIOLATIONS"
        hist = ", ".join(
            f"{name}={count}"
            for name, count in sorted(
                report.forward_histogram.items(), key=lambda kv: -kv[1]
            )
        )
        print(
            f"{regime.value:9s} rho {rho_class:11s} {report.samples:7d} samples "
            f"{report.runtime_seconds:6.1f}s  {status}  forward: {hist}"
        )
        if not report.passed:
            dumps.append(report.to_dict())

    if dumps and args.dump:
        with open(args.dump, "w", encoding="utf-8") as fh:
            json.dump(dumps, fh, indent=2, sort_keys=True)
        print(f"violation dumps written to {args.dump}", file=sys.stderr)
    return 0 if all_ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
