from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from colorclass.lattice import build
from colorclass.strata import (Coloring, ColoringError, colorset, euler_characteristic_stream,
                               manifold_fuzz, point_colors, random_coloring, stratum,
                               surface_genus, surface_summary, validate_manifold)

families = st.sampled_from([("torus", 2, 3), ("torus", 3, 3), ("ball", 2, 3), ("ball", 3, 2),
                            ("sphere", 2, 2), ("sphere", 3, 2)])


@given(families, st.integers(1, 4), st.integers(0, 2 ** 64 - 1))
def test_coloring_file_roundtrip(fam, k, seed):
    g = build(*fam)
    col = random_coloring(g, [1 / k] * k, seed)
    text = col.to_text()
    assert text.splitlines()[0] == "%s %d %d %d" % (g.family, g.d, g.n, k)
    back = Coloring.from_text(text)
    assert back == col and back.to_text() == text


def test_random_coloring_deterministic_and_degenerate():
    g = build("torus", 3, 4)
    a = random_coloring(g, [0.3, 0.7], 42)
    b = random_coloring(g, [0.3, 0.7], 42)
    assert a.to_text() == b.to_text()
    assert np.all(random_coloring(g, [1, 0, 0], 1).colors == 0)
    with pytest.raises(ColoringError):
        random_coloring(g, [0.5, 0.6], 1)


def test_color_fraction_is_binomial():
    g = build("torus", 3, 8)
    frac = np.mean([random_coloring(g, [0.5, 0.5], 3, t).colors.mean() for t in range(2000)])
    sigma = 0.5 / np.sqrt(2000 * g.num_vertices)
    assert abs(frac - 0.5) < 3 * sigma


def test_point_colors():
    g = build("ball", 2, 1)
    col = Coloring(g, 3, np.array([0, 1, 2, 0], dtype=np.int8))
    tri = g.simplex_vertices(3)[0]
    third = Fraction(1, 3)
    assert point_colors(col, tri, (third, third, third)) == colorset(*col.colors[tri])
    assert point_colors(col, tri, (1, 0, 0)) == colorset(col.colors[tri[0]])
    edge = tri[:2]
    assert point_colors(col, edge, (Fraction(1, 2), Fraction(1, 2))) == colorset(*col.colors[edge])
    with pytest.raises(ColoringError):
        point_colors(col, tri, (1, 1, 0))


def test_monochromatic_classes():
    g = build("torus", 2, 3)
    col = Coloring(g, 2, np.zeros(g.num_vertices, dtype=np.int8))
    full = stratum(g, col, 0b01)
    assert full.num_vertices == sum(g.face_count(r) for r in range(1, 4))
    assert full.euler_characteristic() == 0
    assert stratum(g, col, 0b11).is_empty
    assert euler_characteristic_stream(g, col, 0b01) == 0
    assert validate_manifold(stratum(g, col, 0b10))


def test_two_colored_triangle_gives_an_arc():
    g = build("ball", 2, 1)
    col = Coloring(g, 2, np.array([0, 0, 0, 1], dtype=np.int8))
    arc = stratum(g, col, 0b11)
    assert arc.dim == 1 and arc.euler_characteristic() == 1 and arc.num_components == 1
    assert validate_manifold(arc, g)


@given(st.integers(0, 2 ** 32), st.sampled_from([2, 3]))
def test_stream_chi_matches_stratum(seed, k):
    g = build("torus", 3, 3)
    col = random_coloring(g, [1 / k] * k, seed)
    for C in range(1, 1 << k):
        s = stratum(g, col, C)
        assert euler_characteristic_stream(g, col, C) == s.euler_characteristic()
        assert int(s.component_euler().sum()) == s.euler_characteristic()


def test_stream_chi_rejects_ball():
    g = build("ball", 2, 2)
    with pytest.raises(ColoringError):
        euler_characteristic_stream(g, random_coloring(g, [0.5, 0.5], 0), 1)


@given(st.integers(0, 2 ** 32))
def test_full_class_of_three_coloring_is_closed_curves(seed):
    g = build("torus", 3, 3)
    s = stratum(g, random_coloring(g, [1 / 3] * 3, seed), 0b111)
    if not s.is_empty:
        assert s.dim == 1
        deg = np.bincount(s.facets.reshape(-1), minlength=s.num_vertices)
        assert np.all(deg == 2)
        assert euler_characteristic_stream(g, random_coloring(g, [1 / 3] * 3, seed), 0b111) == 0


@given(st.integers(0, 2 ** 32))
def test_two_color_arcs_end_on_triple_points(seed):
    g = build("torus", 3, 3)
    s = stratum(g, random_coloring(g, [1 / 3] * 3, seed), 0b011)
    assert validate_manifold(s, g)


def test_fuzz_reports_no_failures():
    g = build("ball", 3, 3)
    rep = manifold_fuzz((random_coloring(g, [1 / 3] * 3, 5, t) for t in range(10)), 3)
    assert rep.ok and rep.trials == 10 and rep.checks > 0


@given(st.integers(0, 2 ** 32))
def test_surfaces_are_orientable(seed):
    g = build("torus", 3, 3)
    s = stratum(g, random_coloring(g, [0.5, 0.5], seed), 0b11)
    if not s.is_empty:
        summary = surface_summary(s)
        assert all(c.orientable and c.boundary_circles == 0 for c in summary.components)
        assert sum(c.chi for c in summary.components) == s.euler_characteristic()


def test_surface_genus_arithmetic():
    assert surface_genus(2, 0) == 0
    assert surface_genus(0, 0) == 1
    assert surface_genus(1, 1) == 0
    assert surface_genus(-3, 1) == 2
    with pytest.raises(ColoringError):
        surface_genus(3, 0)
