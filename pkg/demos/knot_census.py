"""Random knots from the beach-ball model.

Samples trials on ball(3, n), classifies each closed curve by determinant
and Alexander polynomial, and prints the census with the nontrivial trials.

    python demos/knot_census.py --n 5 --trials 200000
"""
import argparse
import time

from colorclass.knots import knot_census


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--trials", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    t = time.time()
    c = knot_census(args.n, args.trials, args.seed)
    print("n=%d, %d trials in %.1fs" % (args.n, args.trials, time.time() - t))
    for name, count in c.counts.most_common():
        print("  %-10s %d" % (name, count))
    for r in c.nontrivial[:10]:
        print("  trial %d: %s det %d, Alexander %s" % (r.trial, r.name, r.det, r.alexander))


if __name__ == "__main__":
    main()
