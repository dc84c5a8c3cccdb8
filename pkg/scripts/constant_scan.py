#!/usr/bin/env python3
"""Positivity scan of the weighted-sieve constant C(delta, k) over its delta range.

Writes one CSV per order with both the printed single-integral value and the
re-derived unsimplified value, and prints the grid minima.
"""

import argparse
import sys

from nearsq.constants import weighted_sieve_constant
from nearsq.reports import csv_text


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-prefix", default="constant_scan")
    ap.add_argument("--step", type=float, default=1e-4)
    args = ap.parse_args()

    grids = {4: 0.0121, 5: 0.099}
    for k, hi in grids.items():
        rows = []
        j = 1
        while j * args.step <= hi + 1e-15:
            d = j * args.step
            rep = weighted_sieve_constant(d, k)
            rows.append([d, k, rep.value, rep.value_unsimplified, rep.discrepancy, rep.quad_error])
            j += 1
        path = f"{args.out_prefix}_k{k}.csv"
        with open(path, "w", newline="") as fh:
            fh.write(csv_text(
                ["delta", "k", "value", "value_unsimplified", "discrepancy", "quad_error"], rows
            ))
        print(f"k={k}: {len(rows)} rows -> {path}")
        print(f"  min value              = {min(r[2] for r in rows):.10f}")
        print(f"  min value_unsimplified = {min(r[3] for r in rows):.10f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
