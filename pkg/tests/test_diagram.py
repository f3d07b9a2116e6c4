import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from colorclass.diagram import (DiagramError, KnotDiagram, LaurentPoly, alexander_polynomial,
                                bareiss_det, determinant, fox_coloring_determinant, knot_name,
                                normalize, project_to_diagram, reduce_kinks)

UNKNOT = ((1, -2, 2, -1), (1, 1))
TREFOIL = ((1, -2, 3, -1, 2, -3), (1, 1, 1))
FIGURE_EIGHT = ((-1, 2, -3, 1, -4, 3, -2, 4), (-1, 1, 1, -1))


def _curve(f, samples=90, scale=400):
    t = np.linspace(0, 2 * math.pi, samples, endpoint=False)
    return np.rint(scale * np.stack(f(t), axis=1)).astype(int)


def _trefoil_curve():
    return _curve(lambda t: ((2 + np.cos(3 * t)) * np.cos(2 * t),
                             (2 + np.cos(3 * t)) * np.sin(2 * t), np.sin(3 * t)))


def _figure_eight_curve():
    return _curve(lambda t: ((2 + np.cos(2 * t)) * np.cos(3 * t),
                             (2 + np.cos(2 * t)) * np.sin(3 * t), np.sin(4 * t)))


@pytest.mark.parametrize("code, det, alex, name", [
    (UNKNOT, 1, (1,), "0_1"),
    (TREFOIL, 3, (1, -1, 1), "3_1"),
    (FIGURE_EIGHT, 5, (-1, 3, -1), "4_1"),
])
def test_fixture_invariants(code, det, alex, name):
    d = KnotDiagram.from_gauss(*code)
    a = alexander_polynomial(d)
    assert a.coeffs == alex and a.is_palindromic()
    assert determinant(d) == det == fox_coloring_determinant(d) == abs(a(-1))
    assert a(1) == 1
    assert knot_name(det, a) == name


def test_reduce_kinks_removes_curls():
    d = reduce_kinks(KnotDiagram.from_gauss(*UNKNOT))
    assert d.num_crossings == 0 and determinant(d) == 1
    # a curl spliced into the trefoil leaves the trefoil
    g = (1, -2, 4, -4, 3, -1, 2, -3)
    d = reduce_kinks(KnotDiagram.from_gauss(g, (1, 1, 1, -1)))
    assert d.num_crossings == 3 and determinant(d) == 3


def test_projected_curves():
    tref = project_to_diagram(_trefoil_curve())
    assert determinant(tref) == 3 == fox_coloring_determinant(tref)
    eight = project_to_diagram(_figure_eight_curve())
    assert determinant(eight) == 5
    assert alexander_polynomial(eight).coeffs == (-1, 3, -1)


def test_projection_is_direction_independent():
    pts = _trefoil_curve()
    dets = {determinant(project_to_diagram(pts, attempt=a)) for a in range(4)}
    assert dets == {3}


def test_invalid_inputs():
    with pytest.raises(DiagramError):
        KnotDiagram.from_gauss((1, -2, 1), (1, 1))
    with pytest.raises(DiagramError):
        KnotDiagram.from_gauss((1, 1), (1,))
    with pytest.raises(DiagramError):
        normalize((0, 0))
    with pytest.raises(DiagramError):
        normalize((1, -1))
    with pytest.raises(DiagramError):
        project_to_diagram([(0, 0, 0), (1, 0, 0)])


def test_normalize_units():
    assert normalize((0, 0, -1, 1, -1)) == LaurentPoly((1, -1, 1), -1)
    assert str(LaurentPoly((1, -1, 1), -1)) == "t^-1 - 1 + t"


@given(st.lists(st.lists(st.integers(-9, 9), min_size=4, max_size=4), min_size=4, max_size=4))
def test_bareiss_matches_float_det(rows):
    assert bareiss_det([r[:] for r in rows]) == round(np.linalg.det(np.array(rows, dtype=float)))


def test_large_determinant_is_unmatched():
    assert knot_name(101, LaurentPoly((7, -13, 7), -1)) == "unmatched"
