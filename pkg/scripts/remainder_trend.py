#!/usr/bin/env python3
"""Average remainder decay of the divisibility decomposition as N grows.

For full sets with window N^(-exp), reports max over d <= d_max of
d |r(d)| / X, which should shrink as N grows.
"""

import argparse
import sys
import time

from nearsq.experiments import count_near_squares, generate_subset, sieve_decomposition
from nearsq.reports import csv_text


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, nargs="+", default=[10**3, 10**4, 10**5])
    ap.add_argument("--exp", type=float, default=0.05)
    ap.add_argument("--d-max", type=int, default=50)
    ap.add_argument("--out", default="remainder_trend.csv")
    args = ap.parse_args()

    rows = []
    for n in args.N:
        t0 = time.perf_counter()
        delta = float(n) ** -args.exp
        A = generate_subset(n, "full")
        nsc = count_near_squares(A, A, delta, max_pairs=4 * 10**10)
        dec = sieve_decomposition(nsc, len(A), len(A), args.d_max)
        stat = dec.scaled_remainder_max()
        rows.append([n, delta, nsc.H_count, float(dec.X), stat])
        print(f"N={n}: stat={stat:.6g}  ({time.perf_counter() - t0:.1f}s)")
    with open(args.out, "w", newline="") as fh:
        fh.write(csv_text(["N", "delta", "H", "X", "scaled_remainder_max"], rows))
    stats = [r[-1] for r in rows]
    print("non-increasing:", all(b <= a for a, b in zip(stats, stats[1:])))
    return 0


if __name__ == "__main__":
    sys.exit(main())
