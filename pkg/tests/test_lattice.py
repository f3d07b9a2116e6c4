import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from colorclass.lattice import ComplexError, LatticeSimplex, build, stirling2_int

SMALL = [("torus", d, n) for d in (1, 2, 3) for n in (2, 3)] + \
        [(f, d, n) for f in ("ball", "sphere") for d in (1, 2, 3) for n in (1, 2, 3)]


def euler(g):
    return sum((-1) ** (r - 1) * g.face_count(r) for r in range(1, g.d + 2))


@pytest.mark.parametrize("family,d,n", SMALL)
def test_euler_characteristic_of_family(family, d, n):
    g = build(family, d, n)
    want = {"torus": 0, "ball": 1, "sphere": 1 + (-1) ** d}[family]
    assert euler(g) == want


@pytest.mark.parametrize("family,d,n", SMALL)
def test_face_ids_unique_and_decodable(family, d, n):
    g = build(family, d, n)
    for r in range(1, d + 2):
        ids = g.simplex_ids(r)
        assert len(np.unique(ids)) == len(ids) == g.face_count(r)
        for fid in ids[:: max(1, len(ids) // 25)]:
            s = g.decode(int(fid))
            assert g.contains(s)
            assert g.face_id(s) == fid
            assert s.dim == r - 1


@pytest.mark.parametrize("family,d,n", SMALL)
def test_vertex_index_roundtrip(family, d, n):
    g = build(family, d, n)
    X = g.vertex_coords()
    assert np.array_equal(g.vertex_index(X), np.arange(g.num_vertices))


def test_torus_counts_match_formula_by_enumeration():
    for d in (1, 2, 3):
        g = build("torus", d, 3)
        for r in range(1, d + 2):
            assert len(list(g.enumerate_simplices(r))) == 3 ** d * stirling2_int(d + 1, r) * math.factorial(r - 1)


def test_cube_splits_into_d_factorial_simplices():
    for d in (1, 2, 3, 4):
        assert build("ball", d, 1).face_count(d + 1) == math.factorial(d)


def test_sphere_is_boundary_of_ball():
    for d in (2, 3):
        ball = build("ball", d + 1, 2)
        sph = build("sphere", d, 2)
        for r in range(1, d + 2):
            assert int(ball.on_boundary(ball.simplex_ids(r)).sum()) == sph.face_count(r)


def test_vertex_links_are_spheres():
    g = build("torus", 3, 3)
    for v in (0, 5, 26):
        assert g.vertex_link(v).is_sphere()


def test_invalid_complexes_rejected():
    with pytest.raises(ComplexError):
        build("torus", 2, 1)
    with pytest.raises(ComplexError):
        build("klein", 2, 3)
    with pytest.raises(ComplexError):
        build("ball", 5, 2)
    with pytest.raises(ComplexError):
        build("ball", 2, 2).simplex_ids(4)


def test_simplex_vertices_follow_increments():
    s = LatticeSimplex((0, 0, 0), (frozenset({1}), frozenset({0, 2})))
    assert s.vertices() == [(0, 0, 0), (0, 1, 0), (1, 1, 1)]


@given(st.integers(0, 8), st.integers(0, 8))
def test_stirling_recurrence(a, b):
    if a == 0 or b == 0:
        assert stirling2_int(a, b) == int(a == b)
    else:
        assert stirling2_int(a, b) == b * stirling2_int(a - 1, b) + stirling2_int(a - 1, b - 1)
