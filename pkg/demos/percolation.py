"""Homological percolation of one color on the 3-torus.

Sweeps the probability of color 0 and reports how often its class carries
some (A_1) or all (E_1) of the first homology of the torus.

    python demos/percolation.py --n 6 --trials 40
"""
import argparse

import numpy as np

from colorclass.homology import percolation_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=6)
    ap.add_argument("--trials", type=int, default=40)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    grid = [(p, 1 - p) for p in np.linspace(0.1, 0.9, 9)]
    rows = percolation_sweep(3, args.n, 2, 0b01, 1, grid, args.trials, args.seed)
    print("%5s %7s %7s %9s %9s" % ("p", "P(A1)", "P(E1)", "rank", "EC dens"))
    for r in rows:
        p = float(r["p"].split(",")[0])
        print("%5.2f %7.2f %7.2f %9.2f %9.4f" % (p, r["P_Ai"], r["P_Ei"], r["mean_rank_image"],
                                                 r["ec_density_theory"]))


if __name__ == "__main__":
    main()
