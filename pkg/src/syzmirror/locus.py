"""The singular locus Gamma on the boundary of Delta_v and fiber-type labels.

Gamma is a one-dimensional subcomplex of the barycentric complex built in
:mod:`syzmirror.base`.  Its vertices are complex cells ``(a, b)`` of four
kinds, where ``F`` is a 2-face of ``Delta`` and ``G`` a 2-face of its dual:

``trivalent`` (stratum 2, type II fiber)
    ``a`` a 2-cell of the subdivision of ``F``, ``b`` a maximal cell of ``F*``;
``midpoint`` (stratum 1, type I)
    ``a`` an edge of the subdivision interior to ``F``, ``b`` as above;
``junction`` (stratum 3, type III)
    ``b`` a 2-cell of the subdivision of ``G``, ``a`` a maximal cell of ``G*``;
``mirror-midpoint`` (stratum 1, type I)
    ``b`` an edge of the subdivision interior to ``G``, ``a`` as above.

Edges are the comparable pairs trivalent/midpoint, trivalent/junction and
junction/mirror-midpoint.  Over each 2-face ``F`` the trivalent and midpoint
cells, together with the junctions they meet, reproduce the planar graph
``Gamma_w`` of ``F`` once for every maximal cell of ``F*``.  The kinds are
exchanged by the swap ``(a, b) <-> (b, a)``, so the locus of the mirror pair
maps onto this one under phi.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .base import BaseComplex, BasePair, build_base_complex
from .errors import ConvexityError, InputError, InvariantError, PreconditionError
from .lattice import kernel_basis, solve, sub, transpose
from .plfun import WeightFunction, convex_on_polygon
from .polytope import Face, Polytope, ReflexivePolytope
from .subdivision import GammaGraph, RegularSubdivision, gamma_graph, regular_subdivision

TRIVALENT = "trivalent"
MIDPOINT = "midpoint"
JUNCTION = "junction"
MIRROR_MIDPOINT = "mirror-midpoint"

STRATUM = {TRIVALENT: "Gamma2", MIDPOINT: "Gamma1", JUNCTION: "Gamma3", MIRROR_MIDPOINT: "Gamma1"}
FIBER_TYPE = {"Gamma1": "I", "Gamma2": "II", "Gamma3": "III"}
MIRROR_KIND = {TRIVALENT: JUNCTION, JUNCTION: TRIVALENT, MIDPOINT: MIRROR_MIDPOINT, MIRROR_MIDPOINT: MIDPOINT}


@dataclass(frozen=True)
class FaceChart:
    """Affine lattice isomorphism from ``Z^2`` onto the affine lattice of a 2-face."""

    origin: tuple[int, ...]
    basis: tuple[tuple[int, ...], tuple[int, ...]]

    def to_chart(self, p) -> tuple[int, int]:
        sol = solve(transpose(self.basis), sub(p, self.origin))
        if sol is None or any(Fraction(c).denominator != 1 for c in sol):
            raise InputError(f"{tuple(p)} is not a lattice point of the face")
        return (int(sol[0]), int(sol[1]))

    def from_chart(self, c) -> tuple:
        return tuple(o + c[0] * b0 + c[1] * b1 for o, b0, b1 in zip(self.origin, *self.basis))


def face_chart(points: Sequence[Sequence[int]]) -> FaceChart:
    """Chart of the affine lattice spanned by the lattice points of a 2-face.

    The basis is the saturated Hermite basis of the plane through the points,
    so the chart is a lattice isomorphism and lattice-intrinsic notions such
    as convexity carry over unchanged.
    """
    pts = sorted(tuple(p) for p in points)
    origin = pts[0]
    diffs = [list(sub(p, origin)) for p in pts[1:]]
    normals = kernel_basis(diffs)
    basis = kernel_basis(normals, ncols=len(origin)) if normals else kernel_basis([[0] * len(origin)])
    if len(basis) != 2:
        raise InputError("points do not span a plane")
    return FaceChart(origin, (tuple(basis[0]), tuple(basis[1])))


@dataclass
class LocusPiece:
    """The planar graph of one 2-face and its copies inside the complex.

    ``copies`` maps each maximal cell ``b`` of the dual face to the complex
    cell of every graph vertex.
    """

    face: Face
    chart: FaceChart
    subdivision: RegularSubdivision
    graph: GammaGraph
    copies: dict[int, tuple[int, ...]]

    def lattice_point(self, k: int) -> tuple[int, ...]:
        return self.chart.from_chart(self.subdivision.points[k])


@dataclass
class LocusComplex:
    """Gamma as cells of the complex on the boundary of ``Delta_v``."""

    pair: BasePair
    pieces: dict[frozenset[int], LocusPiece]
    kinds: dict[int, str]
    edges: tuple[tuple[int, int], ...]  # (lower cell, upper cell)
    _edge_set: frozenset = field(default=frozenset(), repr=False)

    def __post_init__(self):
        self._edge_set = frozenset(self.edges)

    @property
    def complex(self) -> BaseComplex:
        return self.pair.on_v

    @property
    def R(self) -> ReflexivePolytope:
        return self.pair.R

    def stratum(self, cell: int) -> str | None:
        kind = self.kinds.get(cell)
        return STRATUM[kind] if kind else None

    def vertices_of(self, kind: str) -> list[int]:
        return sorted(c for c, k in self.kinds.items() if k == kind)

    def neighbours(self, cell: int) -> list[int]:
        return sorted({b for a, b in self.edges if a == cell} | {a for a, b in self.edges if b == cell})

    def counts(self) -> dict[str, int]:
        out = {k: len(self.vertices_of(k)) for k in (TRIVALENT, MIDPOINT, JUNCTION, MIRROR_MIDPOINT)}
        out["edges"] = len(self.edges)
        return out

    def vertex_point(self, cell: int) -> tuple[Fraction, ...]:
        return self.complex.points[cell]

    def fiber_type(self, x) -> "FiberTypeLabel":
        """Classify a rational boundary point of ``Delta_v`` against Gamma exactly."""
        cells = self.complex.carrier_cells(x)
        if len(cells) == 1 and cells[0] in self.kinds:
            stratum = STRATUM[self.kinds[cells[0]]]
            return FiberTypeLabel(stratum, FIBER_TYPE[stratum])
        if len(cells) == 2 and tuple(sorted(cells, key=lambda c: self.complex.cells[c].dim)) in self._edge_set:
            return FiberTypeLabel("Gamma1", "I")
        return FiberTypeLabel("complement", "T3")

    def to_json(self) -> dict:
        cx = self.complex
        out_pieces = {}
        for key, piece in sorted(self.pieces.items(), key=lambda kv: sorted(kv[0])):
            out_pieces[",".join(str(i) for i in sorted(key))] = {
                "graph": piece.graph.to_json(),
                "chart": {"origin": list(piece.chart.origin), "basis": [list(b) for b in piece.chart.basis]},
                "copies": {str(b): list(cells) for b, cells in sorted(piece.copies.items())},
            }
        return {
            "pieces": out_pieces,
            "vertices": [
                {"cell": c, "kind": k, "stratum": STRATUM[k],
                 "point": [_fraction_text(v) for v in cx.points[c]]}
                for c, k in sorted(self.kinds.items())
            ],
            "edges": [list(e) for e in self.edges],
        }


@dataclass(frozen=True)
class FiberTypeLabel:
    stratum: str  # "complement", "Gamma1", "Gamma2" or "Gamma3"
    fiber_type: str  # "T3", "I", "II" or "III"


def _fraction_text(v) -> str:
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def classify_cells(cx: BaseComplex) -> dict[int, str]:
    """Kinds of the complex cells that are vertices of Gamma."""
    A, B = cx.A, cx.B
    P, Q = cx.R.base, cx.R.dual
    kinds: dict[int, str] = {}
    for i, c in enumerate(cx.cells):
        a, b = A.cells[c.a], B.cells[c.b]
        fa = P.face_by_vertices(a.carrier)
        fb = Q.face_by_vertices(b.carrier)
        if fa.dim == 2 and b.dim == fb.dim:
            if a.dim == 2:
                kinds[i] = TRIVALENT
            elif a.dim == 1:
                kinds[i] = MIDPOINT
        elif fb.dim == 2 and a.dim == fa.dim:
            if b.dim == 2:
                kinds[i] = JUNCTION
            elif b.dim == 1:
                kinds[i] = MIRROR_MIDPOINT
    return kinds


def locus_edges(cx: BaseComplex, kinds: dict[int, str]) -> tuple[tuple[int, int], ...]:
    allowed = {(MIDPOINT, TRIVALENT), (JUNCTION, TRIVALENT), (MIRROR_MIDPOINT, JUNCTION)}
    edges = set()
    for upper, ku in kinds.items():
        for lower, kl in kinds.items():
            if cx.cells[lower].dim < cx.cells[upper].dim and (kl, ku) in allowed and cx.leq(lower, upper):
                edges.add((lower, upper))
            elif cx.cells[lower].dim > cx.cells[upper].dim and (kl, ku) in allowed and cx.leq(upper, lower):
                edges.add((upper, lower))
    return tuple(sorted(edges))


def _edges_fast(cx: BaseComplex, kinds: dict[int, str]) -> tuple[tuple[int, int], ...]:
    """Same as :func:`locus_edges` but walking the face relations instead of all pairs."""
    allowed = {(MIDPOINT, TRIVALENT), (JUNCTION, TRIVALENT), (MIRROR_MIDPOINT, JUNCTION),
               (TRIVALENT, MIDPOINT), (TRIVALENT, JUNCTION), (JUNCTION, MIRROR_MIDPOINT)}
    A, B = cx.A, cx.B
    edges = set()
    for i, ki in kinds.items():
        c = cx.cells[i]
        # cells (a', b') with a' <= a and b <= b', i.e. below (a, b)
        for a2 in A.faces_of[c.a]:
            for b2 in B.cofaces_of[c.b]:
                j = cx.index.get((a2, b2))
                if j is None or j == i or j not in kinds:
                    continue
                if (kinds[j], ki) in allowed:
                    lo, hi = (j, i) if cx.cells[j].dim < cx.cells[i].dim else (i, j)
                    edges.add((lo, hi))
    return tuple(sorted(edges))


def build_locus(R: ReflexivePolytope, w: WeightFunction, v: WeightFunction,
                pair: BasePair | None = None) -> LocusComplex:
    """Assemble Gamma from the per-2-face graphs and their lift into the complex."""
    if R.rank < 4:
        # the graphs live on 2-faces, which the skeleton subdivision only cuts when they have codimension two
        raise PreconditionError("the singular locus needs lattice rank at least 4")
    P = R.base
    wd = dict(zip(w.points, w.w))
    faces = P.faces_of_dim(2)
    charts = {}
    for F in faces:
        pts = P.face_lattice_points(F)
        missing = [p for p in pts if p not in wd]
        if missing:
            raise InputError(f"weights missing at {missing[0]} on the 2-face {sorted(F.vertex_indices)}")
        chart = face_chart(pts)
        chart_w = WeightFunction.from_w([chart.to_chart(p) for p in pts], [wd[p] for p in pts])
        report = convex_on_polygon(chart_w)
        if not report.convex:
            bad = chart.from_chart(report.failures[0])
            raise ConvexityError(f"weights are not convex on the 2-face {sorted(F.vertex_indices)} at {bad}",
                                 point=bad, face=F)
        charts[F.vertex_indices] = (chart, chart_w)
    if pair is None:
        pair = build_base_complex(R, w, v)
    cx = pair.on_v
    kinds = classify_cells(cx)
    edges = _edges_fast(cx, kinds)
    pieces = {}
    for F in faces:
        chart, chart_w = charts[F.vertex_indices]
        polygon = Polytope.from_points(chart_w.points)
        sub_ = regular_subdivision(polygon, chart_w)
        graph = gamma_graph(sub_)
        if graph.betti_1 != len(polygon.interior_lattice_points()):
            raise InvariantError(f"graph of the 2-face {sorted(F.vertex_indices)} has the wrong first Betti number")
        pieces[F.vertex_indices] = _embed_piece(cx, F, chart, sub_, graph)
    locus = LocusComplex(pair, pieces, kinds, edges)
    _check_locus(locus)
    return locus


def _embed_piece(cx: BaseComplex, F: Face, chart: FaceChart, sub_: RegularSubdivision,
                 graph: GammaGraph) -> LocusPiece:
    A, B = cx.A, cx.B
    R = cx.R
    dual_key = R.dual_face(F).vertex_indices
    maximal = [bi for bi in B.by_carrier[dual_key] if B.cells[bi].dim == R.dual.face_by_vertices(dual_key).dim]
    lattice = [chart.from_chart(p) for p in sub_.points]

    def a_index(point_ids) -> int:
        key = frozenset(lattice[k] for k in point_ids)
        if key not in A.index:
            raise InvariantError("planar subdivision of a 2-face disagrees with the skeleton subdivision")
        return A.index[key]

    copies = {}
    for bi in maximal:
        cells = []
        for vert in graph.vertices:
            if vert.kind == "cell":
                ai = a_index(sub_.cells[vert.source[0]])
                cells.append(cx.index[(ai, bi)])
            else:
                ai = a_index(vert.source)
                if not vert.boundary:
                    cells.append(cx.index[(ai, bi)])
                else:
                    carrier_dual = cx.dual_of_carrier[A.cells[ai].carrier]
                    above = [b2 for b2 in B.cofaces_of[bi] if B.cells[b2].carrier == carrier_dual
                             and B.cells[b2].dim == R.dual.face_by_vertices(carrier_dual).dim]
                    if len(above) != 1:
                        raise InvariantError("leg end does not meet exactly one junction cell")
                    cells.append(cx.index[(ai, above[0])])
        copies[bi] = tuple(cells)
    return LocusPiece(F, chart, sub_, graph, copies)


def _check_locus(locus: LocusComplex) -> None:
    """Each piece copy must embed its planar graph as edges of the locus."""
    kinds = locus.kinds
    for piece in locus.pieces.values():
        for cells in piece.copies.values():
            for k, vert in enumerate(piece.graph.vertices):
                expected = TRIVALENT if vert.kind == "cell" else (JUNCTION if vert.boundary else MIDPOINT)
                if kinds.get(cells[k]) != expected:
                    raise InvariantError("graph vertex lifted to a cell of the wrong kind")
            for a, b in piece.graph.edges:
                e = tuple(sorted((cells[a], cells[b]), key=lambda c: locus.complex.cells[c].dim))
                if e not in locus._edge_set:
                    raise InvariantError("graph edge is not an edge of the locus")
    for c in locus.vertices_of(TRIVALENT):
        if len(locus.neighbours(c)) != len(locus.complex.A.cells[locus.complex.cells[c].a].points):
            raise InvariantError("trivalent vertex has the wrong valence")


def mirror_cells(locus: LocusComplex, mirror: LocusComplex) -> dict[int, int]:
    """phi on Gamma vertices: mirror locus cell to this locus cell, checked kind by kind.

    ``mirror`` is the locus of the swapped data, living on the boundary of
    ``Delta_w``; the result shows ``phi(Gamma') = Gamma`` as cell sets.
    """
    bij = locus.pair.cell_bijection
    out = {}
    for c, k in mirror.kinds.items():
        image = bij[c]
        if locus.kinds.get(image) != MIRROR_KIND[k]:
            raise InvariantError("phi does not map the mirror locus onto the locus")
        out[c] = image
    if sorted(out.values()) != sorted(locus.kinds):
        raise InvariantError("phi misses part of the locus")
    mapped_edges = {tuple(sorted((out[a], out[b]), key=lambda c: locus.complex.cells[c].dim)) for a, b in mirror.edges}
    if mapped_edges != set(locus.edges):
        raise InvariantError("phi does not map the mirror edges onto the locus edges")
    return out


def build_mirror_locus(locus: LocusComplex, w: WeightFunction, v: WeightFunction) -> LocusComplex:
    """Locus of the swapped data on the boundary of ``Delta_w``, sharing the complexes of ``locus``."""
    pair = locus.pair
    swapped = BasePair(pair.on_w.R, pair.v_side, pair.w_side, pair.on_w, pair.on_v)
    return build_locus(pair.on_w.R, v, w, pair=swapped)
