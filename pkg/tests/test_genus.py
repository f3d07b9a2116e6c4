import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from colorclass import genus, tiles
from colorclass.genus import AnnealConfig, GenusSearchError
from colorclass.lattice import build
from colorclass.strata import Coloring, random_coloring


def _random_boundary(N, seed):
    return random_coloring(build("sphere", 3, N), (1 / 3, 1 / 3, 1 / 3), seed)


def test_ball_tables_counts():
    tb = genus.ball_tables(2)
    g = build("ball", 4, 2)
    assert tb.num_vertices == g.num_vertices
    assert len(tb.interior) == 1
    assert (tb.boundary_vertex >= 0).sum() == build("sphere", 3, 2).num_vertices
    # every tet has four triangles and every pent five tets worth of triangles
    assert tb.tet_tri.shape[1] == 4 and tb.pen_tri.shape[1] == 10


def test_monochromatic_ball_has_zero_objective():
    g = build("ball", 4, 3)
    s = genus.objective(Coloring(g, 3, np.zeros(g.num_vertices, dtype=np.int8)))
    assert (s.objective, s.genus, s.closed, s.area) == (0.0, 0, 0, 0)


@settings(max_examples=12)
@given(st.integers(0, 10 ** 6))
def test_objective_genus_matches_certificate(seed):
    g = build("ball", 4, 2)
    col = random_coloring(g, (1 / 3, 1 / 3, 1 / 3), seed)
    s = genus.objective(col)
    cert = genus.genus_upper_bound_certificate(col)
    assert cert.valid
    assert s.genus == cert.genus


def test_boundary_roundtrip():
    b = _random_boundary(3, 5)
    ball = genus.extend_boundary(b, seed=1)
    assert genus.boundary_of(ball) == b
    assert genus.extend_boundary(b, seed=1) == ball
    assert genus.extend_boundary(b, seed=2) != ball


def test_short_anneal_is_consistent():
    b = _random_boundary(3, 7)
    cfg = AnnealConfig(iterations=4000, check_every=500, trace_every=100, seed=3)
    run = genus.anneal(b, cfg)
    assert run.checks and run.checks_agree
    assert genus.boundary_of(run.best_coloring) == b
    bests = [t[3] for t in run.trace]
    assert all(x >= y for x, y in zip(bests, bests[1:]))
    again = genus.objective(run.best_coloring, cfg.w_genus, cfg.w_closed, cfg.w_area)
    assert again.objective == run.best_objective
    cert = genus.genus_upper_bound_certificate(run.best_coloring)
    assert cert.valid and cert.genus == again.genus == run.best_genus
    assert genus.anneal(b, cfg).best_objective == run.best_objective


def test_search_picks_lowest_genus():
    b = _random_boundary(3, 11)
    rec = genus.run_search(b, AnnealConfig(iterations=1500, check_every=500, restarts=3, seed=4))
    assert len(rec.runs) == 3
    key = [(r.best_genus, r.best_objective_at_best_genus, r.restart) for r in rec.runs]
    assert (rec.best.best_genus, rec.best.best_objective_at_best_genus, rec.best.restart) == min(key)
    assert rec.trace_csv().startswith("iteration,T,objective,best\n")


def test_unknot_boundary_search_makes_progress():
    b = tiles.realize(tiles.stock_diagram("unknot")).coloring
    cfg = AnnealConfig(iterations=3000, check_every=1000, seed=0)
    start = genus.objective(genus.extend_boundary(b, seed=0))
    run = genus.anneal(b, cfg)
    assert run.checks_agree
    assert run.best_objective < start.objective


def test_frozen_temperature_only_accepts_improvements():
    b = _random_boundary(3, 2)
    cfg = AnnealConfig(iterations=2000, t0=1e-12, gamma=0.5, trace_every=50, seed=8)
    run = genus.anneal(b, cfg)
    objs = [t[2] for t in run.trace]
    assert all(x >= y for x, y in zip(objs, objs[1:]))


def test_certificate_is_reproducible():
    col = random_coloring(build("ball", 4, 2), (1 / 3, 1 / 3, 1 / 3), 9)
    a = genus.genus_upper_bound_certificate(col)
    assert a == genus.genus_upper_bound_certificate(col)
    assert a.coloring_sha256 == genus.coloring_hash(col)
    assert '"valid": true' in a.to_json()


@pytest.mark.parametrize("kwargs", [
    {"iterations": 0}, {"restarts": 0}, {"t0": 0.0}, {"gamma": 1.0}, {"w_closed": -1.0},
])
def test_config_validation(kwargs):
    with pytest.raises(GenusSearchError):
        AnnealConfig(**kwargs)


def test_cooling_default():
    assert AnnealConfig(iterations=1000).cooling ** 1000 == pytest.approx(1e-3)


def test_wrong_complexes_rejected():
    g = build("torus", 3, 3)
    with pytest.raises(GenusSearchError):
        genus.extend_boundary(Coloring(g, 3, np.zeros(g.num_vertices, dtype=np.int8)))
    with pytest.raises(GenusSearchError):
        genus.genus_upper_bound_certificate(Coloring(g, 3, np.zeros(g.num_vertices, dtype=np.int8)))
