import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st

from colorclass.knots import (BLUE, GREEN, RED, KnotModelError, beach_ball_boundary,
                              beach_ball_coloring, boundary_color, classify_polygon, decay_table,
                              extract_curve, knot_census, knot_records, sample_knots)
from colorclass.lattice import build
from colorclass.strata import Coloring, stratum


@given(st.integers(2, 8), st.data())
def test_boundary_color_rule(n, data):
    x, y, z = (data.draw(st.integers(0, n)) for _ in range(3))
    c = boundary_color(x, y, z, n)
    if 0 < min(x, y, z) and max(x, y, z) < n:
        assert c == -1
        return
    cand = {BLUE for _ in [0] if x == 0 or z == n} | {GREEN for _ in [0] if z == 0 or y == n} \
        | {RED for _ in [0] if y == 0 or x == n}
    assert c in cand
    beats = {(BLUE, GREEN), (GREEN, RED), (RED, BLUE)}
    if len(cand) == 2:
        a, b = cand
        assert (c, ({a, b} - {c}).pop()) in beats


def test_boundary_layout():
    bb = beach_ball_boundary(4)
    assert len(bb.interior) == 27
    counts = Counter(bb.colors[bb.colors >= 0].tolist())
    assert set(counts) == {BLUE, GREEN, RED}
    with pytest.raises(KnotModelError):
        beach_ball_boundary(1)


def test_boundary_three_color_class_is_one_arc_pair():
    # the 3-color class of the boundary sphere alone has two endpoints of the knotted arc
    g = build("ball", 3, 5)
    col = beach_ball_coloring(5, 0, 0)
    curve = extract_curve(col)
    poly = curve.closed_polygon()
    assert len(poly) >= 4
    assert curve.num_components == stratum(g, col, 0b111).num_components


@pytest.mark.parametrize("n", [4, 5])
def test_sampler_matches_curve_extraction(n):
    for trial, poly, comps in sample_knots(n, 20, seed=3, keep_all=True):
        curve = extract_curve(beach_ball_coloring(n, 3, trial))
        assert comps == curve.num_components
        det_a = classify_polygon(poly)[0]
        det_b = classify_polygon(curve.closed_polygon())[0]
        assert det_a == det_b


def test_sampler_chunking_and_offsets():
    a = [(t, None if p is None else p.tolist(), c) for t, p, c in sample_knots(4, 300, 9)]
    b = [(t, None if p is None else p.tolist(), c) for t, p, c in sample_knots(4, 300, 9, chunk=37)]
    assert a == b
    c = [(t, None if p is None else p.tolist(), cc) for t, p, cc in sample_knots(4, 100, 9, first=200)]
    assert a[200:] == c


def test_census_is_deterministic_and_consistent():
    c1 = knot_census(5, 3000, seed=2)
    c2 = knot_census(5, 3000, seed=2)
    assert c1.counts == c2.counts
    assert sum(c1.counts.values()) == 3000
    recs = Counter(r.name for r in knot_records(5, 3000, seed=2))
    assert recs == c1.counts
    with pytest.raises(KnotModelError):
        knot_census(3, 10, 0)


def test_classify_smooth_trefoil():
    t = np.linspace(0, 2 * math.pi, 120, endpoint=False)
    pts = np.rint(300 * np.stack([(2 + np.cos(3 * t)) * np.cos(2 * t),
                                  (2 + np.cos(3 * t)) * np.sin(2 * t), np.sin(3 * t)], 1))
    det, alex, name, crossings = classify_polygon(pts.astype(int))
    assert (det, name, crossings >= 3) == (3, "3_1", True)
    assert classify_polygon([(0, 0, 0), (3, 0, 0), (0, 3, 0)])[2] == "0_1"


def test_decay_table_flags():
    t = decay_table({5: (10, 1000), 6: (100, 1000), 7: (400, 1000)})
    assert t.increasing and t.separated
    t = decay_table({5: (10, 100), 6: (11, 100)})
    assert t.increasing and not t.separated


def test_extract_requires_ball3():
    g = build("torus", 3, 3)
    with pytest.raises(KnotModelError):
        extract_curve(Coloring(g, 3, np.zeros(g.num_vertices, dtype=np.int8)))
