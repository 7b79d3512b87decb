"""Resolvent magnitude and partition-trace modulus along phi for one chain.

Writes columns phi, |resolvent|, |Z(i phi)| and lists where the resolvent
peaks next to the partition zeros in the window.

    python3 scripts/pole_zero_alignment.py --sites 2 3 5 --n-cut 2 --points 10000
"""
import argparse

import numpy as np

from zetaspin.acceptance import local_maxima, resolvent_magnitudes
from zetaspin.phaseop import aggregate_period, partition_zeros_in_window, zero_trace_at
from zetaspin.spinchain import ChainConfig


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sites", type=int, nargs="+", default=[2, 3, 5])
    ap.add_argument("--n-cut", type=int, default=2)
    ap.add_argument("--points", type=int, default=10**4)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    cfg = ChainConfig(tuple(args.sites), args.n_cut)
    T = aggregate_period(cfg)
    grid = np.linspace(0, T, args.points, endpoint=False)
    res = resolvent_magnitudes(cfg, grid)
    Z = np.array([abs(zero_trace_at(cfg, x)) for x in grid])
    peaks = local_maxima(grid, res)
    zeros = partition_zeros_in_window(cfg, 0, T)
    print(f"window [0, {T:.6f}), step {grid[1]:.2e}")
    for z in zeros:
        nearest = peaks[np.argmin(np.abs(peaks - z))]
        print(f"zero {z:.9f}   nearest peak {nearest:.9f}   offset {nearest - z:+.2e}")
    if args.out:
        np.savetxt(args.out, np.column_stack([grid, res, Z]), header="phi resolvent_abs trace_abs", fmt="%.17g")


if __name__ == "__main__":
    main()
