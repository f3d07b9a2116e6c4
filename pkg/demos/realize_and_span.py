"""Realize a knot on the boundary of the 4-ball and search for a spanning surface.

The tile diagram is turned into a 3-coloring of sphere(3, N) whose
3-color class is the knot; annealing then recolors the inside of
ball(4, N) to lower the genus of the surface the knot bounds.

    python demos/realize_and_span.py --knot unknot --iters 50000
"""
import argparse
import time

from colorclass import genus, tiles


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--knot", default="unknot", choices=tiles.STOCK_DIAGRAMS)
    ap.add_argument("--iters", type=int, default=50_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    td = tiles.stock_diagram(args.knot)
    inv = tiles.diagram_invariants(td)
    bc = tiles.realize(td)
    rep = tiles.verify_realization(bc, (1, inv.determinant, inv.alexander))
    print("%s: %d crossings, det %d; realized on sphere(3, %d): det %s, match %s"
          % (args.knot, inv.crossings, inv.determinant, bc.N, rep.determinant, rep.matches))

    start = genus.objective(genus.extend_boundary(bc.coloring, seed=args.seed))
    print("random interior: genus %d, %d closed components" % (start.genus, start.closed))
    t = time.time()
    cfg = genus.AnnealConfig(iterations=args.iters, seed=args.seed)
    run = genus.anneal(bc.coloring, cfg)
    cert = genus.genus_upper_bound_certificate(run.best_coloring)
    print("after %d iterations (%.0fs): genus %d, certificate genus %d, valid %s"
          % (run.iterations_run, time.time() - t, run.best_genus, cert.genus, cert.valid))


if __name__ == "__main__":
    main()
