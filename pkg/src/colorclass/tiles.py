"""Links drawn with tiles on the faces of a box, realized as 3-color classes of the 3-sphere.

A tile diagram places one glyph on every unit square of the six faces of
an ``nx x ny x nz`` box.  Each tile becomes a 3x3x3 block of the boundary
of the 4-box ``[0,3nx] x [0,3ny] x [0,3nz] x [0,3]``: the face point at
lattice height ``w`` gets a color from the checkerboard color of its
diagram face, the caps ``w = 0`` and ``w = 3`` are blue, and crossing
tiles override their central columns so that the over strand runs at a
larger ``w`` than the under strand.

Glyphs, with ``u`` to the right and ``v`` up:

``.``          empty
``|`` ``-``    straight strands
``a`` ``b``    arcs cutting off the bottom-left and bottom-right corners
``c`` ``d``    arcs cutting off the top-right and top-left corners
``X-``         crossing, horizontal strand over
``X+``         crossing, vertical strand over (``X|`` is accepted too)

Face frames: ``+x``/``-x`` use ``(u, v) = (y, z)``, ``+y``/``-y`` use
``(x, z)`` and ``+z``/``-z`` use ``(x, y)``.  Rows are listed from the
largest ``v`` down, columns from the smallest ``u``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .diagram import KnotDiagram, LaurentPoly, alexander_polynomial, fox_coloring_determinant
from .knots import BLUE, GREEN, RED, classify_polygon, reduce_polygon, tricolored_components, tet_tables
from .lattice import build
from .strata import Coloring, curve_components, stratum, validate_manifold


class TileError(ValueError):
    pass


FULL_MASK = (1 << BLUE) | (1 << GREEN) | (1 << RED)

# face -> (normal axis, on the high side, u axis, v axis)
FACES = {
    "+x": (0, True, 1, 2), "-x": (0, False, 1, 2),
    "+y": (1, True, 0, 2), "-y": (1, False, 0, 2),
    "+z": (2, True, 0, 1), "-z": (2, False, 0, 1),
}

# side midpoints in half-steps of the 3-step tile
SIDE_POINT = {"L": (0, 3), "R": (6, 3), "B": (3, 0), "T": (3, 6)}


@dataclass(frozen=True)
class Glyph:
    code: str
    strands: tuple          # pairs of sides
    over: int               # index of the over strand, -1 without a crossing
    groups: tuple           # 4x4 region label of each local vertex, indexed [u][v]
    adjacent: tuple         # pairs of labels separated by a strand

    @property
    def is_crossing(self) -> bool:
        return self.over >= 0


def _groups(fn) -> tuple:
    return tuple(tuple(fn(a, b) for b in range(4)) for a in range(4))


def _quadrant(a, b):
    if a >= 2:
        return 0 if b >= 2 else 3
    return 1 if b >= 2 else 2


_QUAD_ADJ = ((0, 1), (1, 2), (2, 3), (3, 0))

GLYPHS = {
    ".": Glyph(".", (), -1, _groups(lambda a, b: 0), ()),
    "|": Glyph("|", (("B", "T"),), -1, _groups(lambda a, b: int(a >= 2)), ((0, 1),)),
    "-": Glyph("-", (("L", "R"),), -1, _groups(lambda a, b: int(b >= 2)), ((0, 1),)),
    "a": Glyph("a", (("B", "L"),), -1, _groups(lambda a, b: int(a <= 1 and b <= 1)), ((0, 1),)),
    "b": Glyph("b", (("B", "R"),), -1, _groups(lambda a, b: int(a >= 2 and b <= 1)), ((0, 1),)),
    "c": Glyph("c", (("T", "R"),), -1, _groups(lambda a, b: int(a >= 2 and b >= 2)), ((0, 1),)),
    "d": Glyph("d", (("T", "L"),), -1, _groups(lambda a, b: int(a <= 1 and b >= 2)), ((0, 1),)),
    "X-": Glyph("X-", (("L", "R"), ("B", "T")), 0, _groups(_quadrant), _QUAD_ADJ),
    "X+": Glyph("X+", (("L", "R"), ("B", "T")), 1, _groups(_quadrant), _QUAD_ADJ),
}
ALIASES = {"X|": "X+"}


def glyph(code: str) -> Glyph:
    code = ALIASES.get(code, code)
    if code not in GLYPHS:
        raise TileError("unknown glyph %r" % code)
    return GLYPHS[code]


# -- diagrams ----------------------------------------------------------------------

@dataclass
class TileDiagram:
    """Glyph grids on the six faces of a box; ``faces[f][row][col]``, top row first."""

    box: tuple
    faces: dict

    def face_shape(self, face: str) -> tuple[int, int]:
        _, _, ua, va = FACES[face]
        return self.box[va], self.box[ua]

    def tiles(self):
        """Yield (face, i, j, glyph) with (i, j) the (u, v) cell."""
        for f in FACES:
            rows = self.faces[f]
            nv = len(rows)
            for r, row in enumerate(rows):
                for i, code in enumerate(row):
                    yield f, i, nv - 1 - r, glyph(code)

    @property
    def crossings(self) -> int:
        return sum(1 for *_, g in self.tiles() if g.is_crossing)

    def to_text(self) -> str:
        lines = ["box %d %d %d" % tuple(self.box)]
        for f in FACES:
            lines.append("[face:%s]" % f)
            lines.extend(" ".join(row) for row in self.faces[f])
        return "\n".join(lines) + "\n"


def parse_tile_diagram(text: str) -> TileDiagram:
    """Read a tile diagram; missing faces are filled with empty tiles.

    The first non-comment line is ``box nx ny nz``; each ``[face:+x]``
    section lists rows of whitespace-separated glyphs.
    """
    box = None
    faces: dict[str, list[list[str]]] = {}
    current = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if box is None:
            m = re.fullmatch(r"box\s+(\d+)\s+(\d+)\s+(\d+)", line)
            if not m:
                raise TileError("expected 'box nx ny nz' before the faces")
            box = tuple(int(v) for v in m.groups())
            if min(box) < 1:
                raise TileError("box dimensions must be positive")
            continue
        m = re.fullmatch(r"\[face:([+-][xyz])\]", line)
        if m:
            current = m.group(1)
            if current in faces:
                raise TileError("face %s given twice" % current)
            faces[current] = []
            continue
        if current is None:
            raise TileError("glyph row outside a face section")
        row = line.split()
        for code in row:
            glyph(code)
        faces[current].append([ALIASES.get(c, c) for c in row])
    if box is None:
        raise TileError("empty tile diagram")
    td = TileDiagram(box, {})
    for f in FACES:
        nv, nu = td.face_shape(f)
        rows = faces.get(f) or [["."] * nu for _ in range(nv)]
        if len(rows) != nv or any(len(r) != nu for r in rows):
            raise TileError("face %s must be %d rows of %d glyphs" % (f, nv, nu))
        td.faces[f] = rows
    strand_components(td)
    return td


def _surface_point(td: TileDiagram, face: str, i: int, j: int, a: int, b: int, scale: int):
    """Box-surface point of local tile coordinates (a, b) given in 1/scale tile units."""
    axis, high, ua, va = FACES[face]
    p = [0, 0, 0]
    p[axis] = scale * td.box[axis] if high else 0
    p[ua] = scale * i + a
    p[va] = scale * j + b
    return tuple(p)


def _endpoint_map(td: TileDiagram):
    ends: dict[tuple, list] = {}
    for f, i, j, g in td.tiles():
        for s, pair in enumerate(g.strands):
            for side in pair:
                key = _surface_point(td, f, i, j, *SIDE_POINT[side], scale=6)
                ends.setdefault(key, []).append((f, i, j, s, side))
    for key, lst in ends.items():
        if len(lst) != 2:
            raise TileError("dangling strand end at %s (half-tile units / 6)" % (key,))
    return ends


@dataclass(frozen=True)
class CrossingPass:
    tile: tuple
    over: bool
    direction: tuple


def strand_components(td: TileDiagram) -> list[list[CrossingPass]]:
    """Trace every closed strand; each component lists its crossing passes in order."""
    ends = _endpoint_map(td)
    grid = {(f, i, j): g for f, i, j, g in td.tiles()}
    seen = set()
    comps = []
    for (f, i, j), g in sorted(grid.items()):
        for s in range(len(g.strands)):
            if (f, i, j, s) in seen:
                continue
            passes = []
            tile, strand, enter = (f, i, j), s, g.strands[s][0]
            while (tile + (strand,)) not in seen:
                seen.add(tile + (strand,))
                gl = grid[tile]
                pair = gl.strands[strand]
                leave = pair[1] if pair[0] == enter else pair[0]
                p0 = _surface_point(td, *tile, *SIDE_POINT[enter], scale=6)
                p1 = _surface_point(td, *tile, *SIDE_POINT[leave], scale=6)
                if gl.is_crossing:
                    passes.append(CrossingPass(tile, strand == gl.over,
                                               tuple(b - a for a, b in zip(p0, p1))))
                nxt = [e for e in ends[p1] if e[:3] != tile or e[4] != leave]
                nf, ni, nj, ns, nside = nxt[0]
                tile, strand, enter = (nf, ni, nj), ns, nside
            comps.append(passes)
    return comps


@dataclass(frozen=True)
class DiagramInvariants:
    components: int
    crossings: int
    determinant: int | None
    alexander: LaurentPoly | None
    writhe: int = 0


def diagram_invariants(td: TileDiagram) -> DiagramInvariants:
    """Determinant and Alexander polynomial read off the tile diagram itself."""
    comps = strand_components(td)
    n_cross = td.crossings
    if len(comps) != 1:
        return DiagramInvariants(len(comps), n_cross, None, None)
    passes = comps[0]
    if not passes:
        return DiagramInvariants(1, 0, 1, LaurentPoly((1,), 0))
    label = {}
    over_dir, under_dir = {}, {}
    gauss = []
    for p in passes:
        c = label.setdefault(p.tile, len(label) + 1)
        gauss.append(c if p.over else -c)
        (over_dir if p.over else under_dir)[p.tile] = p.direction
    signs = {}
    for tile, c in label.items():
        axis, high, _, _ = FACES[tile[0]]
        normal = [0, 0, 0]
        normal[axis] = 1 if high else -1
        o, d = over_dir[tile], under_dir[tile]
        cross = (o[1] * d[2] - o[2] * d[1], o[2] * d[0] - o[0] * d[2], o[0] * d[1] - o[1] * d[0])
        signs[c] = 1 if sum(x * y for x, y in zip(cross, normal)) > 0 else -1
    kd = KnotDiagram.from_gauss(gauss, [signs[c] for c in range(1, len(label) + 1)])
    return DiagramInvariants(1, n_cross, fox_coloring_determinant(kd), alexander_polynomial(kd),
                             sum(signs.values()))


# -- faces and their colors --------------------------------------------------------

@dataclass
class FaceColoring:
    """Diagram faces (regions of the box surface) with their sides and colors."""

    region_of: dict            # surface lattice point (scale 3) -> region
    sides: list
    colors: list

    @property
    def num_regions(self) -> int:
        return len(self.colors)

    @property
    def odd_regions(self) -> list[int]:
        return [r for r, s in enumerate(self.sides) if s % 2]


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _two_color(nodes, edges):
    """Proper 2-coloring of a graph by depth-first search; None if impossible."""
    adj = {v: [] for v in nodes}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    color = {}
    for root in nodes:
        if root in color:
            continue
        color[root] = 0
        stack = [root]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in color:
                    color[w] = 1 - color[v]
                    stack.append(w)
                elif color[w] == color[v]:
                    return None
    return color


def _tile_regions(td: TileDiagram):
    uf = _UnionFind()
    tiles = list(td.tiles())
    for f, i, j, g in tiles:
        first: dict[int, tuple] = {}
        for a in range(4):
            for b in range(4):
                p = _surface_point(td, f, i, j, a, b, scale=3)
                uf.find(p)
                lab = g.groups[a][b]
                if lab in first:
                    uf.union(first[lab], p)
                else:
                    first[lab] = p
    roots = {}
    region_of = {}
    for p in sorted(uf.parent):
        r = uf.find(p)
        region_of[p] = roots.setdefault(r, len(roots))
    return region_of, len(roots), tiles


def _local_regions(td, region_of, f, i, j, g):
    out = {}
    for a in range(4):
        for b in range(4):
            out.setdefault(g.groups[a][b], region_of[_surface_point(td, f, i, j, a, b, scale=3)])
    return out


def checkerboard_faces(td: TileDiagram) -> FaceColoring:
    """Checkerboard coloring with odd-sided faces off blue and one red, one green face at each crossing."""
    region_of, R, tiles = _tile_regions(td)
    sides = [0] * R
    edges, pairs = set(), []
    for f, i, j, g in tiles:
        reg = _local_regions(td, region_of, f, i, j, g)
        for a, b in g.adjacent:
            if reg[a] == reg[b]:
                raise TileError("a strand has the same face on both sides")
            edges.add((reg[a], reg[b]))
        if g.is_crossing:
            for q in range(4):
                sides[reg[q]] += 1
            pairs.append(((reg[0], reg[2]), (reg[1], reg[3])))
    parity = _two_color(range(R), edges)
    if parity is None:
        raise TileError("faces are not checkerboard colorable")
    odd = [r for r in range(R) if sides[r] % 2]
    if len(odd) > 2:
        raise TileError("%d odd-sided faces; at most two are allowed" % len(odd))
    if odd:
        if len({parity[r] for r in odd}) != 1:
            raise TileError("the odd-sided faces lie in different checkerboard classes")
        blue = 1 - parity[odd[0]]
    else:
        blue = parity[region_of[(0, 0, 0)]]
    nonblue = [r for r in range(R) if parity[r] != blue]
    constraints = []
    for p, q in pairs:
        constraints.append(p if parity[p[0]] != blue else q)
    rg = _two_color(nonblue, constraints)
    if rg is None:
        raise TileError("no red/green assignment gives every crossing one face of each")
    colors = [BLUE if parity[r] == blue else (RED if rg[r] == 0 else GREEN) for r in range(R)]
    return FaceColoring(region_of, sides, colors)


# -- tile blocks -------------------------------------------------------------------

def _other(c: int) -> int:
    return GREEN if c == RED else RED


def column(color: int) -> tuple:
    """Colors at w = 0..3 above a face point of the given face color."""
    if color == BLUE:
        return (BLUE, BLUE, BLUE, BLUE)
    return (BLUE, color, _other(color), BLUE)


# (over strand, colors of quadrants 0..3) -> {(u, v): (color at w=1, color at w=2)} for the
# four central columns.  Found by exhaustive search against the tile contract below; each
# changes two columns.  Quadrants 0..3 are top-right, top-left, bottom-left, bottom-right.
CROSSING_OVERRIDES: dict = {
    (0, (0, 1, 0, 2)): {(1, 1): (0, 0), (1, 2): (2, 1), (2, 1): (2, 1), (2, 2): (2, 1)},
    (0, (0, 2, 0, 1)): {(1, 1): (0, 0), (1, 2): (1, 2), (2, 1): (1, 2), (2, 2): (1, 2)},
    (0, (1, 0, 2, 0)): {(1, 1): (1, 1), (1, 2): (0, 2), (2, 1): (0, 0), (2, 2): (1, 2)},
    (0, (2, 0, 1, 0)): {(1, 1): (2, 2), (1, 2): (0, 1), (2, 1): (0, 0), (2, 2): (2, 1)},
    (1, (0, 1, 0, 2)): {(1, 1): (0, 0), (1, 2): (1, 2), (2, 1): (1, 2), (2, 2): (1, 2)},
    (1, (0, 2, 0, 1)): {(1, 1): (0, 0), (1, 2): (2, 1), (2, 1): (2, 1), (2, 2): (2, 1)},
    (1, (1, 0, 2, 0)): {(1, 1): (2, 1), (1, 2): (0, 0), (2, 1): (0, 2), (2, 2): (1, 1)},
    (1, (2, 0, 1, 0)): {(1, 1): (1, 2), (1, 2): (0, 0), (2, 1): (0, 1), (2, 2): (2, 2)},
}


def tile_block(g: Glyph, group_colors) -> np.ndarray:
    """4x4x4 vertex colors of a tile, indexed [u, v, w]."""
    block = np.empty((4, 4, 4), dtype=np.int8)
    for a in range(4):
        for b in range(4):
            block[a, b] = column(group_colors[g.groups[a][b]])
    if g.is_crossing:
        key = (g.over, tuple(group_colors[q] for q in range(4)))
        if key not in CROSSING_OVERRIDES:
            raise TileError("no crossing table for %s with quadrant colors %s" % (g.code, key[1]))
        for (a, b), (c1, c2) in CROSSING_OVERRIDES[key].items():
            block[a, b, 1], block[a, b, 2] = c1, c2
    return block


def group_color_variants(g: Glyph) -> list[tuple]:
    """Every checkerboard-consistent assignment of colors to a glyph's local faces."""
    if not g.strands:
        return [(BLUE,), (RED,), (GREEN,)]
    if not g.is_crossing:
        return [(BLUE, RED), (BLUE, GREEN), (RED, BLUE), (GREEN, BLUE)]
    out = []
    for blue_even in (True, False):
        for x in (RED, GREEN):
            y = _other(x)
            out.append((BLUE, x, BLUE, y) if blue_even else (x, BLUE, y, BLUE))
    return out


@dataclass(frozen=True)
class TileContract:
    glyph: str
    group_colors: tuple
    arcs: tuple            # side pairs joined by the 3-color arcs, sorted
    closed: int            # closed curves inside the block
    self_crossings: int    # crossings of an arc with itself in the tilted top view
    over_counts: tuple     # per expected strand: crossings passed over / under in the top view

    @property
    def ok(self) -> bool:
        g = glyph(self.glyph)
        want = tuple(sorted(tuple(sorted(p)) for p in g.strands))
        if self.arcs != want or self.closed or self.self_crossings:
            return False
        if not g.is_crossing:
            return True
        over, under = self.over_counts
        return over[1] == 0 and over[0] % 2 == 1 and under == (0, over[0])


def _side_of(tri_pts: np.ndarray) -> str | None:
    for ax, lo, hi in ((0, "L", "R"), (1, "B", "T")):
        if np.all(tri_pts[:, ax] == 0):
            return lo
        if np.all(tri_pts[:, ax] == 3):
            return hi
    return None


_TILT = (Fraction(1, 97), Fraction(1, 89))


def _top_view(P):
    return [(p[0] + _TILT[0] * p[2], p[1] + _TILT[1] * p[2], p[2]) for p in P]


def _segment_cross(p, q, r, s):
    """Parameters (t, t') of a proper crossing of segments pq and rs in the plane, or None."""
    d1 = (q[0] - p[0], q[1] - p[1])
    d2 = (s[0] - r[0], s[1] - r[1])
    den = d1[0] * d2[1] - d1[1] * d2[0]
    if den == 0:
        return None
    e = (r[0] - p[0], r[1] - p[1])
    t = (e[0] * d2[1] - e[1] * d2[0]) / den
    u = (e[0] * d1[1] - e[1] * d1[0]) / den
    if 0 < t < 1 and 0 < u < 1:
        return t, u
    if 0 <= t <= 1 and 0 <= u <= 1:
        raise TileError("degenerate top view in the tile contract")
    return None


def _crossings(A, B, same: bool):
    out = []
    for i in range(len(A) - 1):
        for j in range(i + 2 if same else 0, len(B) - 1):
            hit = _segment_cross(A[i], A[i + 1], B[j], B[j + 1])
            if hit:
                t, u = hit
                za = A[i][2] + t * (A[i + 1][2] - A[i][2])
                zb = B[j][2] + u * (B[j + 1][2] - B[j][2])
                out.append(za > zb)
    return out


@lru_cache(maxsize=None)
def tile_contract(code: str, group_colors: tuple) -> TileContract:
    """Evaluate the 3-color class of a single tile block.

    Arcs are polylines through tricolored triangle centers; the top view is
    tilted slightly so that vertical steps stay visible.
    """
    g = glyph(code)
    block = tile_block(g, group_colors)
    coords, tet_v, tet_tri, tri_v, tri_tet = tet_tables(3)
    colors = block[coords[:, 0], coords[:, 1], coords[:, 2]]
    arcs, polys, closed = [], [], 0
    for path, is_closed in tricolored_components(colors, 3):
        if is_closed:
            closed += 1
            continue
        ends = tuple(sorted((_side_of(coords[tri_v[path[0]]]), _side_of(coords[tri_v[path[-1]]])),
                            key=str))
        arcs.append(ends)
        polys.append(_top_view([tuple(Fraction(int(x)) for x in coords[tri_v[f]].sum(axis=0))
                                for f in path]))
    order = sorted(range(len(arcs)), key=lambda k: arcs[k])
    arcs = tuple(arcs[k] for k in order)
    polys = [polys[k] for k in order]
    self_cross = sum(len(_crossings(P, P, True)) for P in polys)
    over_counts = ()
    if g.is_crossing and len(polys) == 2:
        want = [tuple(sorted(p)) for p in g.strands]
        if list(arcs) == sorted(want):
            o = polys[arcs.index(want[g.over])]
            u = polys[arcs.index(want[1 - g.over])]
            flags = _crossings(o, u, False)
            over_counts = ((sum(flags), len(flags) - sum(flags)),
                           (len(flags) - sum(flags), sum(flags)))
    return TileContract(g.code, tuple(group_colors), arcs, closed, self_cross, over_counts)


# -- boundary colorings of the 4-ball ----------------------------------------------

@dataclass
class BoundaryColoring4D:
    """A coloring of sphere(3, N), the boundary of the 4-box [0, N]^4."""

    coloring: Coloring
    source: dict = field(default_factory=dict)

    @property
    def N(self) -> int:
        return self.coloring.complex.n

    def save(self, path) -> None:
        self.coloring.save(path)


def _layer_map(N: int, L: int) -> np.ndarray:
    """Monotone surjection [0, N] -> [0, L] that duplicates layers; 0 -> 0 and N -> L."""
    return (np.arange(N + 1) * L) // N


def emit_boundary_coloring(td: TileDiagram, faces: FaceColoring | None = None,
                           check: bool = True) -> BoundaryColoring4D:
    """Substitute a 3x3x3 block per tile and equalize the 4-box to a cube."""
    if faces is None:
        faces = checkerboard_faces(td)
    nx, ny, nz = td.box
    ext = (3 * nx, 3 * ny, 3 * nz, 3)
    box = np.full(tuple(e + 1 for e in ext), -1, dtype=np.int8)
    box[..., 0] = BLUE
    box[..., 3] = BLUE
    for f, i, j, g in td.tiles():
        reg = _local_regions(td, faces.region_of, f, i, j, g)
        gc = tuple(faces.colors[reg[q]] for q in range(len(reg)))
        if check and not tile_contract(g.code, gc).ok:
            raise TileError("tile contract violated by %s with colors %s" % (g.code, gc))
        block = tile_block(g, gc)
        for a in range(4):
            for b in range(4):
                p = _surface_point(td, f, i, j, a, b, scale=3)
                col = block[a, b]
                prev = box[p[0], p[1], p[2]]
                if prev[1] >= 0 and (a in (0, 3) or b in (0, 3)) and not np.array_equal(prev, col):
                    raise TileError("adjacent tiles disagree at %s" % (p,))
                box[p[0], p[1], p[2]] = col
    N = max(ext)
    g4 = build("sphere", 3, N)
    X = g4.vertex_coords()
    maps = [_layer_map(N, e) for e in ext]
    src = tuple(maps[k][X[:, k]] for k in range(4))
    colors = box[src]
    if np.any(colors < 0):
        raise TileError("sphere vertex mapped off the shell")
    meta = {"box": list(td.box), "crossings": td.crossings}
    return BoundaryColoring4D(Coloring(g4, 3, colors.astype(np.int8)), meta)


def refine(bc: BoundaryColoring4D, m: int) -> BoundaryColoring4D:
    """Duplicate every layer m times: c'(X) = c(floor(X / m)) on sphere(3, mN)."""
    if m < 1:
        raise TileError("refinement factor must be at least 1")
    if m == 1:
        return bc
    g = bc.coloring.complex
    fine = build("sphere", 3, m * g.n)
    X = fine.vertex_coords() // m
    idx = g.vertex_index(X)
    meta = dict(bc.source, refined=bc.source.get("refined", 1) * m)
    return BoundaryColoring4D(Coloring(fine, bc.coloring.k, bc.coloring.colors[idx]), meta)


def embed_in_space(points4: np.ndarray, N: int, scale: int) -> np.ndarray:
    """Integer embedding of shell points (x, y, z, w) of the 4-box into R^3.

    The box face point q is pushed radially outward by w / (2N) of its
    offset from the box center, so larger w reads as nearer the viewer.
    """
    A = 2 * scale * N
    q = points4[:, :3].astype(np.int64)
    W = points4[:, 3:4].astype(np.int64)
    c = scale * N // 2 if (scale * N) % 2 == 0 else None
    if c is None:
        raise TileError("scale * N must be even")
    return A * q + (q - c) * W


@dataclass(frozen=True)
class RealizationReport:
    components: int
    closed: bool
    manifold: bool
    determinant: int | None
    alexander: LaurentPoly | None
    name: str | None
    expected: tuple | None
    matches: bool | None
    detail: str = ""


def realized_curves(bc: BoundaryColoring4D):
    """The 3-color class of a colored 3-sphere: stratum, manifold report, polygons in R^3."""
    g = bc.coloring.complex
    st = stratum(g, bc.coloring, FULL_MASK)
    report = validate_manifold(st, g)
    scale = 12
    pos = st.vertex_positions(scale=scale)
    polys = []
    all_closed = True
    for path, closed in curve_components(st):
        all_closed &= closed
        polys.append(embed_in_space(pos[path], g.n, scale))
    return st, report, polys, all_closed


def verify_realization(bc: BoundaryColoring4D, expected: tuple | None = None) -> RealizationReport:
    """Extract the realized link and compare (components, determinant[, Alexander]) to ``expected``."""
    st, report, polys, closed = realized_curves(bc)
    det = alex = name = None
    if len(polys) == 1 and closed:
        det, alex, name, _ = classify_polygon(reduce_polygon(polys[0]))
    matches = None
    detail = ""
    if expected is not None:
        comps = expected[0]
        matches = len(polys) == comps and closed and bool(report)
        if len(expected) > 1 and expected[1] is not None:
            matches &= det == expected[1]
        if len(expected) > 2 and expected[2] is not None:
            matches &= alex == expected[2]
        if not matches:
            detail = "got %d component(s), closed=%s, manifold=%s, det=%s, alexander=%s" % (
                len(polys), closed, bool(report), det, alex)
    return RealizationReport(len(polys), closed, bool(report), det, alex, name, expected, matches,
                             detail)


def realize(td: TileDiagram, m: int = 1) -> BoundaryColoring4D:
    return refine(emit_boundary_coloring(td), m)


STOCK_DIAGRAMS = ("unknot", "trefoil", "figure_eight", "six_one", "square_knot")


def stock_diagram(name: str) -> TileDiagram:
    """One of the bundled tile diagrams, all drawn on a 2x2x2 box."""
    from importlib.resources import files

    if name not in STOCK_DIAGRAMS:
        raise TileError("unknown stock diagram %r; choose from %s" % (name, ", ".join(STOCK_DIAGRAMS)))
    return parse_tile_diagram(files("colorclass").joinpath("data", name + ".tiles").read_text())
