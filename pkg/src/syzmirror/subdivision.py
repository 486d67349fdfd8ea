"""Regular subdivisions of lattice polygons and the graph Gamma_w.

For weights ``w`` on the lattice points of a polygon, the regular
subdivision projects the lower hull of ``{(m, w_m)}``.  Gamma_w joins every
cell barycenter to the midpoints of the cell's edges; it is the part of the
barycentric subdivision avoiding the lattice points, and each component of
its complement contains exactly one lattice point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Sequence

from .errors import ConvexityError, InputError, InvariantError
from .hull import lower_hull
from .lattice import affine_rank, barycenter
from .plfun import WeightFunction, convex_on_points
from .polytope import Polytope


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def counterclockwise(points: Sequence[Sequence]) -> list[int]:
    """Indices of the vertices of a convex polygon in counterclockwise order.

    Starts at the lexicographically smallest vertex; comparisons are exact.
    """
    idx = sorted(range(len(points)), key=lambda i: tuple(points[i]))
    start = idx[0]
    rest = idx[1:]
    o = points[start]

    # all other vertices lie in a half plane seen from the lexicographic minimum,
    # so the cross-product comparison is a total order
    def cmp(i, j):
        c = _cross(o, points[i], points[j])
        if c > 0:
            return -1
        if c < 0:
            return 1
        di = sum((a - b) ** 2 for a, b in zip(points[i], o))
        dj = sum((a - b) ** 2 for a, b in zip(points[j], o))
        return -1 if di < dj else (1 if di > dj else 0)

    return [start] + sorted(rest, key=cmp_to_key(cmp))


@dataclass(frozen=True)
class RegularSubdivision:
    """Cells of a regular subdivision of a lattice polygon.

    ``points`` are the polygon's lattice points; each cell lists point
    indices in counterclockwise order.
    """

    polygon: Polytope
    points: tuple[tuple[int, ...], ...]
    weights: WeightFunction
    cells: tuple[tuple[int, ...], ...]

    def cell_points(self, c: int) -> list[tuple[int, ...]]:
        return [self.points[i] for i in self.cells[c]]

    def edges(self) -> dict[tuple[int, int], list[int]]:
        """Map each subdivision edge (sorted point-index pair) to its adjacent cells."""
        out: dict[tuple[int, int], list[int]] = {}
        for c, cell in enumerate(self.cells):
            k = len(cell)
            for t in range(k):
                a, b = cell[t], cell[(t + 1) % k]
                out.setdefault((min(a, b), max(a, b)), []).append(c)
        return dict(sorted(out.items()))

    @property
    def is_triangulation(self) -> bool:
        return all(len(c) == 3 for c in self.cells)


def regular_subdivision(polygon: Polytope, w: WeightFunction, require_convex: bool = True) -> RegularSubdivision:
    """Project the lower hull of the lifted lattice points of ``polygon``.

    ``w`` must be defined on every lattice point.  With ``require_convex``
    (the default) strict convexity is checked first and a
    :class:`ConvexityError` names the first offending point.
    """
    if polygon.rank != 2:
        raise InputError("regular subdivisions are computed for polygons only")
    points = polygon.lattice_points()
    wd = dict(zip(w.points, w.w))
    missing = [p for p in points if p not in wd]
    if missing:
        raise InputError(f"weights missing at lattice points {missing[:5]}")
    ws = [wd[p] for p in points]
    if require_convex:
        report = convex_on_points(points, ws)
        if not report.convex:
            raise ConvexityError(f"weights are not convex at {report.failures[0]}", point=report.failures[0])
    cells = []
    for facet in lower_hull(points, ws):
        ids = sorted(facet.points)
        pts = [points[i] for i in ids]
        verts = set(Polytope.from_points(pts).vertices)
        vids = [i for i in ids if points[i] in verts]
        order = counterclockwise([points[i] for i in vids])
        cells.append(tuple(vids[k] for k in order))
    cells.sort()
    return RegularSubdivision(polygon, tuple(points), w.restrict(points), tuple(cells))


@dataclass(frozen=True)
class GammaVertex:
    coords: tuple[Fraction, Fraction]
    kind: str  # "cell" or "edge"
    source: tuple[int, ...]  # cell index, or the sorted point-index pair of the edge
    boundary: bool
    valence: int


@dataclass(frozen=True)
class GammaGraph:
    """Vertices are cell barycenters and edge midpoints; edges join a barycenter to its edge midpoints."""

    subdivision: RegularSubdivision
    vertices: tuple[GammaVertex, ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def betti_1(self) -> int:
        return len(self.edges) - len(self.vertices) + self.components()

    def components(self) -> int:
        parent = list(range(len(self.vertices)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.edges:
            parent[find(a)] = find(b)
        return len({find(x) for x in range(len(self.vertices))})

    def cell_vertices(self) -> list[int]:
        return [i for i, v in enumerate(self.vertices) if v.kind == "cell"]

    def leg_endpoints(self) -> list[int]:
        return [i for i, v in enumerate(self.vertices) if v.boundary]

    def segments(self) -> list[tuple[tuple[Fraction, ...], tuple[Fraction, ...]]]:
        return [(self.vertices[a].coords, self.vertices[b].coords) for a, b in self.edges]

    def to_json(self) -> dict:
        return {
            "vertices": [
                {"coords": [f"{c.numerator}/{c.denominator}" for c in v.coords], "kind": v.kind,
                 "boundary": v.boundary, "valence": v.valence}
                for v in self.vertices
            ],
            "edges": [list(e) for e in self.edges],
            "regions": [list(self.subdivision.points[m]) for m in range(len(self.subdivision.points))],
        }


def gamma_graph(sub: RegularSubdivision) -> GammaGraph:
    edge_cells = sub.edges()
    verts: list[GammaVertex] = []
    cell_vid = {}
    for c, cell in enumerate(sub.cells):
        cell_vid[c] = len(verts)
        verts.append(GammaVertex(barycenter(sub.cell_points(c)), "cell", (c,), False, len(cell)))
    edge_vid = {}
    for e, cells in edge_cells.items():
        edge_vid[e] = len(verts)
        mid = barycenter([sub.points[e[0]], sub.points[e[1]]])
        verts.append(GammaVertex(mid, "edge", e, len(cells) == 1, len(cells)))
    edges = []
    for e, cells in edge_cells.items():
        for c in cells:
            edges.append((cell_vid[c], edge_vid[e]))
    edges.sort()
    return GammaGraph(sub, tuple(verts), tuple(edges))


@dataclass(frozen=True)
class Region:
    """The component of ``polygon \\ Gamma`` around one lattice point.

    It is the union of the barycentric triangles ``(m, edge midpoint, cell
    barycenter)`` having ``m`` as their lattice-point corner.
    """

    label: tuple[int, ...]
    triangles: tuple[tuple[tuple[Fraction, ...], ...], ...]

    def area(self) -> Fraction:
        return sum((abs(Fraction(_cross(*t))) / 2 for t in self.triangles), Fraction(0))


def region_labels(g: GammaGraph) -> dict[int, Region]:
    """Bijection from complement regions (indexed like the lattice points) to lattice points.

    Verified by three exact checks: no lattice point lies on Gamma, the
    regions tile the polygon by area, and the Euler characteristic of Gamma
    plus the polygon boundary predicts exactly one bounded face per
    lattice point.
    """
    sub = g.subdivision
    edge_cells = sub.edges()
    tris: dict[int, list] = {i: [] for i in range(len(sub.points))}
    for e, cells in edge_cells.items():
        mid = barycenter([sub.points[e[0]], sub.points[e[1]]])
        for c in cells:
            bc = barycenter(sub.cell_points(c))
            for m in e:
                tris[m].append((tuple(Fraction(x) for x in sub.points[m]), mid, bc))
    regions = {i: Region(sub.points[i], tuple(t)) for i, t in tris.items()}
    for p in sub.points:
        if _on_graph(g, p):
            raise InvariantError(f"lattice point {p} lies on Gamma")
    total = sum((r.area() for r in regions.values()), Fraction(0))
    if total != _polygon_area(sub.polygon):
        raise InvariantError("regions do not tile the polygon")
    corners = len(sub.polygon.vertices)
    legs = len(g.leg_endpoints())
    v_total = len(g.vertices) + corners
    e_total = len(g.edges) + legs + corners
    faces = 1 - v_total + e_total
    if faces != len(regions) or any(not r.triangles for r in regions.values()):
        raise InvariantError(f"Euler count gives {faces} regions for {len(regions)} lattice points")
    return regions


def _polygon_area(P: Polytope) -> Fraction:
    verts = list(P.vertices)
    order = counterclockwise(verts)
    pts = [verts[i] for i in order]
    o = pts[0]
    return sum((Fraction(_cross(o, pts[k], pts[k + 1])) / 2 for k in range(1, len(pts) - 1)), Fraction(0))


def _on_segment(p, a, b) -> bool:
    if _cross(a, b, p) != 0:
        return False
    return all(min(x, y) <= z <= max(x, y) for x, y, z in zip(a, b, p))


def _on_graph(g: GammaGraph, p) -> bool:
    return any(_on_segment(p, a, b) for a, b in g.segments())


# -- named weight families ----------------------------------------------------


def standard_weights(points: Sequence[Sequence[int]]) -> WeightFunction:
    """``w(i, j) = i^2 + ij + j^2``: its regular subdivision is the standard one.

    Every unit parallelogram is split along the diagonal parallel to
    ``(1, -1)``, ``(1, 0)`` or ``(0, 1)``, as the lines ``i = c``, ``j = c``
    and ``i + j = c`` do, with a margin of exactly 1 in each flip test.
    """
    pts = [tuple(p) for p in points]
    return WeightFunction.from_w(pts, [i * i + i * j + j * j for i, j in pts])


def raised_weights(base: WeightFunction, raises: dict[tuple[int, int], Fraction]) -> WeightFunction:
    """Add ``raises[m]`` to the string-diagram weight ``w_m``."""
    return WeightFunction.from_w(base.points, [w + Fraction(raises.get(p, 0)) for p, w in zip(base.points, base.w)])


FLIP_RAISE = Fraction(7, 8)
SECOND_FLIP_RAISE = Fraction(5, 8)


def alternative_weights(points: Sequence[Sequence[int]]) -> WeightFunction:
    """Weights whose subdivision replaces edge (1,2)-(2,2) by (2,1)-(1,3).

    Raising ``w`` at (1,2) and (2,2) by ``delta`` flips that edge for
    ``1/2 < delta < 1``; the value ``7/8`` is used.
    """
    return raised_weights(standard_weights(points), {(1, 2): FLIP_RAISE, (2, 2): FLIP_RAISE})


def second_alternative_weights(points: Sequence[Sequence[int]]) -> WeightFunction:
    """The alternative subdivision with edge (1,3)-(1,4) also flipped to (0,4)-(2,3).

    On top of the first flip, raising (1,3) and (1,4) by ``delta'`` flips the
    second edge for ``1/2 < delta' < 2 delta - 1`` while keeping the first
    flip; ``delta' = 5/8`` is used.
    """
    return raised_weights(
        standard_weights(points),
        {(1, 2): FLIP_RAISE, (2, 2): FLIP_RAISE, (1, 3): SECOND_FLIP_RAISE, (1, 4): SECOND_FLIP_RAISE},
    )


def wall_weights(points: Sequence[Sequence[int]]) -> WeightFunction:
    """Weights on the wall between the standard and alternative subdivisions.

    With ``delta = 1/2`` the two triangles around edge (1,2)-(2,2) merge into
    a parallelogram cell, whose Gamma vertex is four-valent.  These weights
    are convex but not generic.
    """
    half = Fraction(1, 2)
    return raised_weights(standard_weights(points), {(1, 2): half, (2, 2): half})


def quadratic_polygon_weights(points: Sequence[Sequence[int]]) -> WeightFunction:
    """``|m|^2`` weights; strictly convex on any point set."""
    return WeightFunction.from_w(points, [sum(x * x for x in p) for p in points])


def check_polygon(P: Polytope) -> None:
    if P.rank != 2 or affine_rank(P.vertices) != 2:
        raise InputError("expected a two-dimensional polygon")
