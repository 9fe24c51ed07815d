"""Singular values on one Landau level, three ways.

Prints the quadrature oracle next to the printed series and the rederived
Beta sums, then fits the decay exponent of the oracle values.

    python demos/spectrum_tour.py --nu 2 --m 1 --kmax 60
"""
import argparse

import numpy as np

from logpot import SpectralParams
from logpot.spectrum import asymptotic_fit, build_table, singular_value_closed


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nu", type=float, default=2.0)
    ap.add_argument("--m", type=int, default=1)
    ap.add_argument("--kmax", type=int, default=60)
    args = ap.parse_args()

    p = SpectralParams(args.nu, args.m)
    table = build_table(p, args.kmax, closed_variant="rederived", closed_kmax=12)

    print(f"nu={p.nu:g} m={p.m}")
    print(f"{'k':>3}  {'oracle':>22}  {'rederived':>10}  {'printed':>10}")
    for row in table.rows[:13]:
        printed = singular_value_closed(p, row.k, oracle=row.lambda_oracle)
        print(f"{row.k:3d}  {row.lambda_oracle:22.15e}  {row.flag:>10}  {printed[1]:>10}")

    # the slope creeps towards its limit slowly, so show it on a few windows
    if args.kmax >= 40:
        hi = args.kmax
        for lo in (10, hi // 2, 3 * hi // 4):
            slope, c = asymptotic_fit(table, lo, hi)
            print(f"fit over [{lo}, {hi}]: slope {slope:.4f}, C {c:.4g}")
        k = table.ks[10:]
        local = np.diff(np.log(table.oracle[10:])) / np.diff(np.log(k))
        print(f"local slope at k={k[-1]}: {local[-1]:.4f}  (-2nu = {-2 * p.nu:g})")


if __name__ == "__main__":
    main()
