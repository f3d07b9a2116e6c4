import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from colorclass.homology import (HomologyError, image_is_isotropic, induced_map_rank,
                                 intersection_pairing, percolation_sweep, z2_betti)
from colorclass.lattice import build
from colorclass.strata import Coloring, random_coloring, stratum


def _striped(n=4):
    g = build("torus", 2, n)
    x = g.vertex_coords()[:, 0]
    return g, Coloring(g, 3, np.where(x < n // 2, 0, 2).astype(np.int8))


@pytest.mark.parametrize("method", ["winding", "reference"])
def test_striped_torus_has_rank_one(method):
    g, col = _striped()
    rep = induced_map_rank(g, col, 0b001, 1, method=method)
    assert rep.rank_image == 1 and rep.A_i and not rep.E_i


@pytest.mark.parametrize("method", ["winding", "reference"])
def test_monochromatic_class_fills_homology(method):
    g = build("torus", 3, 3)
    col = Coloring(g, 2, np.zeros(g.num_vertices, dtype=np.int8))
    rep = induced_map_rank(g, col, 0b01, 1, method=method)
    assert rep.E_i and rep.rank_image == 3
    empty = induced_map_rank(g, col, 0b10, 1, method=method)
    assert empty.rank_image == 0 and not empty.A_i


def test_reference_degree_two():
    g = build("torus", 3, 3)
    col = Coloring(g, 2, np.zeros(g.num_vertices, dtype=np.int8))
    rep = induced_map_rank(g, col, 0b01, 2, method="reference")
    assert rep.rank_HN == 3 and rep.E_i


@settings(max_examples=15)
@given(st.integers(0, 10 ** 6), st.floats(0.2, 0.8))
def test_betti_numbers_match_euler(seed, p):
    g = build("torus", 2, 5)
    st_ = stratum(g, random_coloring(g, (p, 1 - p), seed), 0b01)
    b = z2_betti(st_)
    assert sum((-1) ** i * x for i, x in enumerate(b)) == st_.euler_characteristic()


@settings(max_examples=15)
@given(st.integers(0, 10 ** 6), st.floats(0.3, 0.7))
def test_winding_matches_reference(seed, p):
    g = build("torus", 3, 4)
    col = random_coloring(g, (p, 1 - p), seed)
    a = induced_map_rank(g, col, 0b01, 1, method="winding")
    b = induced_map_rank(g, col, 0b01, 1, method="reference")
    assert a.rank_image == b.rank_image
    assert a.image_classes == b.image_classes


def test_pairing_on_four_torus():
    # the plane through axes 0,1 meets its complement 2,3 once
    from colorclass.homology import subtorus_axes
    axes = subtorus_axes(4, 2)
    a = 1 << axes.index((0, 1))
    b = 1 << axes.index((2, 3))
    assert intersection_pairing(a, b, 4, 2) == 1
    assert intersection_pairing(a, a, 4, 2) == 0
    with pytest.raises(HomologyError):
        intersection_pairing(a, b, 3, 1)


def test_invalid_requests():
    g, col = _striped()
    with pytest.raises(HomologyError):
        induced_map_rank(g, col, 1, 2, method="winding")
    with pytest.raises(HomologyError):
        induced_map_rank(g, col, 1, 1, method="fastest")
    b = build("ball", 2, 4)
    with pytest.raises(HomologyError):
        induced_map_rank(b, Coloring(b, 2, np.zeros(b.num_vertices, dtype=np.int8)), 1, 1)


def test_sweep_rows():
    rows = percolation_sweep(2, 5, 2, 0b01, 1, [(0.9, 0.1), (0.1, 0.9)], 10, seed=0)
    assert rows[0]["P_Ai"] >= rows[1]["P_Ai"]
    assert all(r["P_Ai_low"] <= r["P_Ai"] <= r["P_Ai_high"] for r in rows)
    assert all(r["P_Ei"] <= r["P_Ai"] for r in rows)
