"""Expected Euler characteristic densities against simulation.

Prints the exact density of a one-color class on the 3-torus for a few
probabilities, next to a Monte Carlo estimate on torus(3, 8).

    python demos/density.py --trials 200
"""
import argparse
from fractions import Fraction

from colorclass.ec import expected_density, monte_carlo_density
from colorclass.lattice import build


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    g = build("torus", 3, 8)
    print("%6s %12s %12s %10s" % ("p", "exact", "simulated", "stderr"))
    for p in (Fraction(1, 10), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
        exact = expected_density(3, (p, 1 - p), 0b01).value
        mean, se = monte_carlo_density(g, (float(p), float(1 - p)), 0b01, args.trials, seed=args.seed)
        print("%6s %12.6f %12.6f %10.6f" % (p, float(exact), mean, se))


if __name__ == "__main__":
    main()
