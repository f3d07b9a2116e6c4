import numpy as np
import pytest

from colorclass import tiles
from colorclass.strata import Coloring

CODES = (".", "|", "-", "a", "b", "c", "d", "X+", "X-")


@pytest.mark.parametrize("code", CODES)
def test_glyph_contracts(code):
    g = tiles.glyph(code)
    variants = tiles.group_color_variants(g)
    assert variants
    for gc in variants:
        assert tiles.tile_contract(code, gc).ok


def test_alias_and_unknown_glyph():
    assert tiles.glyph("X|").code == "X+"
    with pytest.raises(tiles.TileError):
        tiles.glyph("Q")


@pytest.mark.parametrize("text", [
    "",
    "[face:+x]\n.\n",
    "box 0 1 1\n",
    "box 1 1 1\n.\n",
    "box 1 1 1\n[face:+x]\n. .\n",
    "box 1 1 1\n[face:+x]\n.\n[face:+x]\n.\n",
    "box 1 1 1\n[face:+x]\nZ\n",
    # a strand running off the face into an empty neighbour
    "box 1 1 1\n[face:+x]\n|\n",
])
def test_parse_errors(text):
    with pytest.raises(tiles.TileError):
        tiles.parse_tile_diagram(text)


@pytest.mark.parametrize("name, det, crossings", [
    ("unknot", 1, 0), ("trefoil", 3, 3), ("figure_eight", 5, 4), ("six_one", 9, 6),
    ("square_knot", 9, 6),
])
def test_stock_invariants(name, det, crossings):
    td = tiles.stock_diagram(name)
    inv = tiles.diagram_invariants(td)
    assert inv.components == 1 and inv.determinant == det
    assert inv.alexander(1) == 1 and inv.alexander.is_palindromic()
    # at least the crossing number of the knot type
    assert inv.crossings >= crossings
    assert tiles.parse_tile_diagram(td.to_text()).faces == td.faces


def test_square_knot_is_not_six_one():
    a = tiles.diagram_invariants(tiles.stock_diagram("square_knot")).alexander
    b = tiles.diagram_invariants(tiles.stock_diagram("six_one")).alexander
    assert a.coeffs == (1, -2, 3, -2, 1) and b.coeffs == (-2, 5, -2)


def test_checkerboard_faces_are_even():
    fc = tiles.checkerboard_faces(tiles.stock_diagram("trefoil"))
    # the two triangles of the trefoil are the odd faces and are kept off blue
    assert len(fc.odd_regions) == 2
    assert all(fc.colors[r] != tiles.BLUE for r in fc.odd_regions)
    assert set(fc.colors) == {tiles.BLUE, tiles.GREEN, tiles.RED}


def test_trefoil_realization_and_refinement(tmp_path):
    td = tiles.stock_diagram("trefoil")
    base = tiles.emit_boundary_coloring(td)
    rep = tiles.verify_realization(base, (1, 3))
    assert rep.matches and rep.closed and rep.manifold and rep.name == "3_1"
    fine = tiles.refine(base, 2)
    assert fine.N == 2 * base.N
    assert tiles.verify_realization(fine, (1, 3)).matches
    path = tmp_path / "trefoil.coloring"
    fine.save(path)
    assert Coloring.load(path) == fine.coloring


def test_realization_reports_mismatch():
    rep = tiles.verify_realization(tiles.realize(tiles.stock_diagram("unknot")), (1, 3))
    assert rep.matches is False and rep.detail


def test_refine_and_stock_errors():
    base = tiles.realize(tiles.stock_diagram("unknot"))
    with pytest.raises(tiles.TileError):
        tiles.refine(base, 0)
    with pytest.raises(tiles.TileError):
        tiles.stock_diagram("seven_four")


def test_embedding_is_injective_on_shell():
    N, scale = 4, 2
    top = scale * N
    pts = np.array([(x, y, z, w) for x in (0, top) for y in range(top + 1) for z in range(top + 1)
                    for w in range(top + 1)])
    out = tiles.embed_in_space(pts, N, scale)
    assert len({tuple(p) for p in out.tolist()}) == len(pts)
