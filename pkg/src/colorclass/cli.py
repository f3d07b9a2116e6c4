"""Command-line entry point.

Exit codes: 0 on success, 1 on a domain error (invalid input, failed
validation), 2 on a usage error.  Every output file starts with the resolved
configuration: a ``{"config": ...}`` line in JSONL, a ``# config:`` comment
in CSV, a ``config`` key in JSON.  Output paths and ``--threads`` are left out
of the embedded configuration so that the files do not depend on them.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import secrets
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__

_NOT_CONFIG = {"func", "out", "summary", "threads", "nondeterministic"}


class UsageError(Exception):
    pass


# -- helpers -----------------------------------------------------------------------

def _parse_probs(text: str) -> tuple:
    try:
        return tuple(Fraction(x.strip()) for x in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise UsageError("probabilities must be a comma-separated list of numbers") from None


def _parse_colorset(text: str, k: int) -> int:
    try:
        cols = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError("color set must be a comma-separated list of color indices") from None
    if not cols or any(c < 0 or c >= k for c in cols):
        raise UsageError("color indices must lie in 0..k-1")
    mask = 0
    for c in cols:
        mask |= 1 << c
    return mask


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in _NOT_CONFIG}
    cfg["version"] = __version__
    return cfg


def _csv_text(cfg: dict, columns, rows) -> str:
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(cfg, sort_keys=True) + "\n")
    w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def _write(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _seed(args) -> None:
    if args.seed is None:
        if not args.nondeterministic:
            args.seed = 0
        else:
            args.seed = secrets.randbits(64)
    if not 0 <= args.seed < 1 << 64:
        raise UsageError("seed must be a 64-bit unsigned integer")


# -- subcommands -------------------------------------------------------------------

def _knot_chunk(job):
    from .knots import knot_records

    n, count, seed, first = job
    return [r.as_json() for r in knot_records(n, count, seed, first)]


def cmd_sample_knots(args) -> int:
    from collections import Counter

    from .diagram import TABLE_COLUMNS

    if args.n < 2 or args.trials < 1:
        raise UsageError("need n >= 2 and trials >= 1")
    cfg = _config(args)
    step = max(1, -(-args.trials // max(1, 4 * args.threads)))
    jobs = [(args.n, min(step, args.trials - s), args.seed, args.first + s)
            for s in range(0, args.trials, step)]
    if args.threads > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(args.threads) as ex:
            chunks = list(ex.map(_knot_chunk, jobs))
    else:
        chunks = [_knot_chunk(j) for j in jobs]
    lines = [json.dumps({"config": cfg}, sort_keys=True)]
    counts: Counter = Counter()
    for chunk in chunks:
        for rec in chunk:
            counts[rec["knot_name_or_unmatched"]] += 1
            lines.append(json.dumps(rec, sort_keys=True))
    text = "\n".join(lines) + "\n"
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    if args.summary:
        row = {"n": args.n, "sample": args.trials, "unknot": counts.get("0_1", 0)}
        row.update({name: counts.get(name, 0) for name in TABLE_COLUMNS})
        _write(args.summary, _csv_text(cfg, row.keys(), [row]))
    return 0


DENSITY_COLUMNS = ("d", "k", "colorset", "probs", "theory_value", "mc_mean", "mc_stderr", "trials", "n")


def cmd_euler_density(args) -> int:
    from .ec import expected_density, monte_carlo_density
    from .lattice import build

    probs = _parse_probs(args.probs)
    if len(probs) != args.k:
        raise UsageError("expected %d probabilities" % args.k)
    mask = _parse_colorset(args.colorset, args.k)
    theory = expected_density(args.d, probs, mask).value
    row = {"d": args.d, "k": args.k, "colorset": mask, "probs": ",".join(str(p) for p in probs),
           "theory_value": repr(float(theory)), "mc_mean": "", "mc_stderr": "", "trials": 0, "n": ""}
    if args.trials > 0:
        g = build("torus", args.d, args.n)
        mean, se = monte_carlo_density(g, [float(p) for p in probs], mask, args.trials, args.seed)
        row.update(mc_mean=repr(mean), mc_stderr=repr(se), trials=args.trials, n=args.n)
    print(float(theory))
    if args.out:
        _write(args.out, _csv_text(_config(args), DENSITY_COLUMNS, [row]))
    return 0


def cmd_percolation_sweep(args) -> int:
    from .homology import SWEEP_COLUMNS, percolation_sweep

    grid = [_parse_probs(p) for p in args.probs.split(";")]
    mask = _parse_colorset(args.colorset, args.k)
    rows = percolation_sweep(args.d, args.n, args.k, mask, args.i, [tuple(map(float, p)) for p in grid],
                             args.trials, args.seed, method=args.method)
    text = _csv_text(_config(args), SWEEP_COLUMNS, rows)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_realize_link(args) -> int:
    from .tiles import parse_tile_diagram, realize, stock_diagram, verify_realization
    from .tiles import diagram_invariants

    if (args.diagram is None) == (args.stock is None):
        raise UsageError("give exactly one of --diagram and --stock")
    td = stock_diagram(args.stock) if args.stock else parse_tile_diagram(Path(args.diagram).read_text())
    inv = diagram_invariants(td)
    bc = realize(td, args.refine)
    rep = verify_realization(bc, (inv.components, inv.determinant, inv.alexander))
    result = {
        "config": _config(args),
        "N": bc.coloring.complex.n,
        "diagram": {"components": inv.components, "crossings": inv.crossings,
                    "determinant": inv.determinant,
                    "alexander": [list(inv.alexander.coeffs), inv.alexander.min_exp]},
        "realized": {"components": rep.components, "closed": rep.closed, "manifold": rep.manifold,
                     "determinant": rep.determinant,
                     "alexander": None if rep.alexander is None
                     else [list(rep.alexander.coeffs), rep.alexander.min_exp]},
        "matches": bool(rep.matches),
    }
    text = json.dumps(result, indent=2, sort_keys=True) + "\n"
    if args.out:
        bc.save(args.out)
        _write(str(args.out) + ".json", text)
    sys.stdout.write(text)
    return 0 if rep.matches else 1


def cmd_genus_search(args) -> int:
    from .genus import AnnealConfig, genus_upper_bound_certificate, run_search
    from .strata import Coloring

    boundary = Coloring.load(args.boundary)
    config = AnnealConfig(iterations=args.iters, t0=args.t0, gamma=args.gamma, w_genus=args.w_genus,
                          w_closed=args.w_closed, w_area=args.w_area, check_every=args.check_every,
                          trace_every=args.trace_every, seed=args.seed, restarts=args.restarts)
    rec = run_search(boundary, config, workers=args.threads)
    cert = genus_upper_bound_certificate(rec.best.best_coloring)
    cfg = _config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rec.best.best_coloring.save(out / "best.coloring")
    doc = json.loads(cert.to_json())
    doc["config"] = cfg
    doc["search"] = {"best_restart": rec.best.restart, "best_genus": rec.best_genus,
                     "runs": [{"restart": r.restart, "best_genus": r.best_genus,
                               "objective": r.best_objective_at_best_genus,
                               "iterations_run": r.iterations_run, "checks_agree": r.checks_agree}
                              for r in rec.runs]}
    _write(out / "certificate.json", json.dumps(doc, indent=2, sort_keys=True) + "\n")
    _write(out / "trace.csv", "# config: " + json.dumps(cfg, sort_keys=True) + "\n" + rec.trace_csv())
    print("best genus %d (certificate genus %d, valid %s)" % (rec.best_genus, cert.genus, cert.valid))
    if not cert.valid or cert.genus != rec.best_genus:
        return 1
    return 0


def cmd_validate(args) -> int:
    from .knots import beach_ball_coloring
    from .lattice import build
    from .strata import manifold_fuzz, random_coloring

    if args.beach_ball:
        if args.family != "ball" or args.d != 3 or args.k != 3:
            raise UsageError("--beach-ball needs --family ball --d 3 --k 3")
        cols = (beach_ball_coloring(args.n, args.seed, t) for t in range(args.trials))
    else:
        g = build(args.family, args.d, args.n)
        cols = (random_coloring(g, [1 / args.k] * args.k, args.seed, t) for t in range(args.trials))
    rep = manifold_fuzz(cols, args.k)
    result = {"config": _config(args), "trials": rep.trials, "checks": rep.checks,
              "failures": [{"trial": t, "colorset": c, "problems": p} for t, c, p in rep.failures]}
    text = json.dumps(result, indent=2, sort_keys=True) + "\n"
    if args.out:
        _write(args.out, text)
    print("%d colorings, %d classes checked, %d failures" % (rep.trials, rep.checks, len(rep.failures)))
    return 0 if rep.ok else 1


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="64-bit seed (default 0)")
    common.add_argument("--nondeterministic", action="store_true",
                        help="draw a fresh seed when --seed is omitted")
    common.add_argument("--threads", type=int, default=1, help="worker processes")

    p = argparse.ArgumentParser(prog="colorclass", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("sample-knots", parents=[common], help="knot census on ball(3, n)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--trials", type=int, required=True)
    s.add_argument("--first", type=int, default=0, help="index of the first trial")
    s.add_argument("--out", help="JSONL output (default stdout)")
    s.add_argument("--summary", help="census summary CSV")
    s.set_defaults(func=cmd_sample_knots)

    s = sub.add_parser("euler-density", parents=[common], help="expected Euler characteristic density")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--probs", required=True, help="comma-separated, e.g. 1/2,1/2")
    s.add_argument("--colorset", required=True, help="comma-separated color indices")
    s.add_argument("--trials", type=int, default=0, help="Monte Carlo trials on torus(d, n)")
    s.add_argument("--n", type=int, default=8)
    s.add_argument("--out", help="CSV output")
    s.set_defaults(func=cmd_euler_density)

    s = sub.add_parser("percolation-sweep", parents=[common], help="homological percolation events")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--colorset", default="0")
    s.add_argument("--i", type=int, default=1)
    s.add_argument("--probs", required=True, help="probability vectors separated by ';'")
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--method", choices=("auto", "winding", "reference"), default="auto")
    s.add_argument("--out", help="CSV output (default stdout)")
    s.set_defaults(func=cmd_percolation_sweep)

    s = sub.add_parser("realize-link", parents=[common], help="tile diagram to a colored 3-sphere")
    s.add_argument("--diagram", help="tile diagram file")
    s.add_argument("--stock", help="bundled diagram name")
    s.add_argument("--refine", type=int, default=1)
    s.add_argument("--out", help="coloring file; the report goes next to it as .json")
    s.set_defaults(func=cmd_realize_link)

    s = sub.add_parser("genus-search", parents=[common], help="annealing for a low-genus spanning surface")
    s.add_argument("--boundary", required=True, help="coloring file of sphere(3, N)")
    s.add_argument("--iters", type=int, default=100_000)
    s.add_argument("--restarts", type=int, default=1)
    s.add_argument("--t0", type=float, default=1.0)
    s.add_argument("--gamma", type=float, default=None)
    s.add_argument("--w-genus", type=float, default=1.0)
    s.add_argument("--w-closed", type=float, default=0.25)
    s.add_argument("--w-area", type=float, default=0.0)
    s.add_argument("--check-every", type=int, default=10_000)
    s.add_argument("--trace-every", type=int, default=1_000)
    s.add_argument("--out", required=True, help="output directory")
    s.set_defaults(func=cmd_genus_search)

    s = sub.add_parser("validate", parents=[common], help="manifold fuzzer over random colorings")
    s.add_argument("--family", choices=("torus", "ball", "sphere"), required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--beach-ball", action="store_true", help="beach-ball boundary on ball(3, n)")
    s.add_argument("--out", help="JSON report")
    s.set_defaults(func=cmd_validate)
    return p


def _domain_errors():
    from .diagram import DiagramError
    from .ec import DensityError
    from .genus import GenusSearchError
    from .homology import HomologyError
    from .knots import KnotModelError
    from .lattice import ComplexError
    from .strata import ColoringError
    from .tiles import TileError

    return (DiagramError, DensityError, GenusSearchError, HomologyError, KnotModelError,
            ComplexError, ColoringError, TileError, OSError)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _seed(args)
        if args.threads < 1:
            raise UsageError("--threads must be positive")
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except _domain_errors() as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
