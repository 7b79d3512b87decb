"""Spectrum statistics of the Toeplitz phase matrix as the cutoff grows.

    python3 scripts/szego_sweep.py --sizes 15 31 63 127 --out szego.csv
"""
import argparse
import csv
import time

import numpy as np

from zetaspin.toeplitz import hermitian_eigs, szego_summary, toeplitz_phase


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[15, 31, 63, 127])
    ap.add_argument("--method", default="jacobi", choices=["jacobi", "lapack"])
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    rows = []
    for n in args.sizes:
        t0 = time.perf_counter()
        eigs, _ = hermitian_eigs(toeplitz_phase(n), method=args.method)
        s = szego_summary(eigs)
        f = [s.band_fractions[a] for a in sorted(s.band_fractions)]
        rows.append([n, s.max_abs, np.pi - s.max_abs, s.symmetry_defect, *f, time.perf_counter() - t0])
        print(f"n={n:4d}  max|l|={s.max_abs:.6f}  pi-max={np.pi - s.max_abs:.2e}  "
              f"fractions={', '.join(f'{x:.3f}' for x in f)}")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n_cut", "max_abs", "gap_to_pi", "symmetry_defect", "frac_pi4", "frac_pi2", "frac_3pi4", "seconds"])
            w.writerows(rows)


if __name__ == "__main__":
    main()
