"""Refine the first few critical-line zeros with the eta-series oracle.

Seeds are rough ordinates; each root is printed with |zeta| at the root and
the truncated Euler product, which stops tracking zeta on Re s = 1/2.
"""
import argparse
import warnings

from zetaspin.errors import TruncationWarning
from zetaspin.lfunc import TruncationSpec, refine_zero, truncated_euler, zeta_reference

SEEDS = [14.0, 21.0, 25.0, 30.4, 32.9]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--series-length", type=int, default=2000)
    ap.add_argument("--prime-cutoff", type=int, default=10**4)
    args = ap.parse_args()

    def f(s):
        return zeta_reference(s, args.series_length)

    for t in SEEDS:
        root = refine_zero(f, complex(0.5, t))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            euler = truncated_euler(root, TruncationSpec(args.prime_cutoff))
        print(f"{root.real:.12f} {root.imag:+.12f}i   |zeta|={abs(f(root)):.2e}   |euler|={abs(euler):.3f}")


if __name__ == "__main__":
    main()
