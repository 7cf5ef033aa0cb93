#!/usr/bin/env python3
"""Loss-threshold probability table for the historic validation events.

For each event in the validation table, treats the predicted loss as the
median of a lognormal distribution (spread zeta, default 0.6) and prints the
probability mass falling in each decade bucket of the default ladder, plus
which bucket the normalized historic loss actually landed in.

    python scripts/threshold_report.py
    python scripts/threshold_report.py --zeta 0.8
"""

import argparse
import math
from pathlib import Path

from eqloss.analytics import (
    DEFAULT_LADDER,
    LossDistribution,
    load_historic_events,
    threshold_bin,
    threshold_probability,
)

ROOT = Path(__file__).parent.parent


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--table", type=Path, default=ROOT / "data/table1_earthquakes.csv")
    parser.add_argument("--zeta", type=float, default=0.6)
    args = parser.parse_args()

    rows = [r for r in load_historic_events(args.table) if r.pct_error is not None and r.predicted]
    labels = [f"({t.lower:g},{t.upper:g}]" for t in DEFAULT_LADDER]
    print(f"zeta = {args.zeta} (configuration value, not calibrated)")
    print(f"{'event':32s} " + " ".join(f"{l:>14s}" for l in labels) + "   historic bin")
    for row in rows:
        dist = LossDistribution(mu_ln_loss=math.log(row.predicted), zeta=args.zeta)
        probs = [threshold_probability(dist, t) for t in DEFAULT_LADDER]
        hist_bin = threshold_bin(row.d_2012)
        label = f"{row.region} {row.date[-4:]}"
        cells = " ".join(f"{p:14.6f}" for p in probs)
        print(f"{label:32.32s} {cells}   {labels[hist_bin]}")


if __name__ == "__main__":
    main()
