"""How L_nu Phi_k behaves as |z| -> 1.

For each branch the closed-form radial profile is sampled near the
boundary and a power of (1 - rho^2) is fitted; the oracle is shown
alongside.

    python demos/boundary_decay.py --nu 3.5 --m 2
"""
import argparse

import numpy as np

from logpot import SpectralParams
from logpot.transform import RadialProfile, branch_of, oracle_radial, radial_profile

Y = np.array([3e-2, 1e-2, 3e-3, 1e-3])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nu", type=float, default=3.5)
    ap.add_argument("--m", type=int, default=2)
    args = ap.parse_args()

    p = SpectralParams(args.nu, args.m)
    print(f"nu={p.nu:g} m={p.m}; 2nu-m = {2 * p.nu - p.m:g}")
    for k in range(p.m + 4):
        rho = np.sqrt(1.0 - Y)
        closed = radial_profile(p, k, rho)
        oracle = RadialProfile(rho, oracle_radial(p, k, rho))
        print(f"k={k:2d} {branch_of(p, k):>5}: closed exponent {closed.decay_exponent():7.4f}, "
              f"oracle {oracle.decay_exponent():7.4f}")


if __name__ == "__main__":
    main()
