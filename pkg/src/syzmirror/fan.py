"""Normal fans of reflexive polytopes and their crepant simplicial refinements.

Fans live in ``N``.  The anticanonical fan of ``Delta`` has one maximal cone
over each facet of the dual polytope; the maximal crepant subdivision uses
every boundary lattice point of the dual polytope as a ray.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .errors import InputError, InvariantError, PreconditionError
from .hull import chart_coordinates, facets_of_points, lower_hull
from .lattice import (
    affine_rank, coords_of, determinant, lattice_index, matrix_rank, primitive_vector, solve, sub, transpose,
)
from .polytope import ReflexivePolytope


@dataclass(frozen=True)
class Cone:
    """A rational polyhedral cone given by primitive generators."""

    generators: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return matrix_rank(self.generators) if self.generators else 0

    @property
    def is_simplicial(self) -> bool:
        return self.dim == len(self.generators)

    def contains(self, x) -> bool:
        """Membership for simplicial cones via the unique generator combination."""
        if not self.is_simplicial:
            raise PreconditionError("membership is only implemented for simplicial cones")
        sol = solve(transpose(self.generators), coords_of(x))
        return sol is not None and all(c >= 0 for c in sol)


@dataclass(frozen=True)
class Fan:
    """A fan stored by its rays and maximal cones (ray-index tuples)."""

    rank: int
    rays: tuple[tuple[int, ...], ...]
    cones: tuple[tuple[int, ...], ...]

    def cone(self, idx: Sequence[int]) -> Cone:
        return Cone(tuple(self.rays[i] for i in idx))

    def maximal_cones(self) -> list[Cone]:
        return [self.cone(c) for c in self.cones]

    def cones_of_dim(self, k: int) -> list[tuple[int, ...]]:
        """All ``k``-dimensional faces of the (simplicial) maximal cones."""
        out = set()
        for c in self.cones:
            for sub_idx in combinations(c, k):
                out.add(sub_idx)
        return sorted(out)

    def locate(self, x) -> tuple[int, ...] | None:
        """The first maximal cone containing ``x``, or ``None``."""
        for c in self.cones:
            if self.cone(c).contains(x):
                return c
        return None

    def to_json(self) -> dict:
        return {"rank": self.rank, "rays": [list(r) for r in self.rays], "cones": [list(c) for c in self.cones]}


def normal_fan(P: ReflexivePolytope) -> Fan:
    """The anticanonical fan: cones over the facets of the dual polytope.

    Maximal cones are listed in the order of the vertices of ``Delta`` they
    are dual to.
    """
    dual = P.dual
    rays = tuple(primitive_vector([int(x) for x in v]) for v in dual.vertices)
    cones = []
    for vid in range(len(P.base.vertices)):
        facet = P.dual_face(P.base.face_by_vertices([vid]))
        cones.append(tuple(sorted(facet.vertex_indices)))
    return Fan(P.rank, rays, tuple(cones))


def cone_volume(c: Cone | Sequence[Sequence[int]]) -> int:
    """Lattice volume of a simplicial cone inside the lattice it spans.

    For full-rank cones this is ``|det|``; for lower-dimensional cones it is
    the index of the generated lattice in its saturation (Smith form).
    """
    gens = c.generators if isinstance(c, Cone) else tuple(tuple(g) for g in c)
    if not gens:
        raise InputError("cone has no generators")
    if matrix_rank(gens) != len(gens):
        raise PreconditionError("cone is not simplicial")
    if len(gens) == len(gens[0]):
        return abs(determinant(gens))
    return lattice_index(gens)


def pulling_triangulation(points: Sequence[Sequence], order: Sequence[int] | None = None) -> list[tuple[int, ...]]:
    """Pulling triangulation of ``conv(points)`` using every listed point as a vertex.

    All points must be in convex position.  ``order`` ranks the point
    indices; the earliest point of each cell is pulled first.  The result is
    a list of sorted index tuples.
    """
    n = len(points)
    rank_of = {i: k for k, i in enumerate(order if order is not None else range(n))}
    cache: dict[frozenset[int], list[tuple[int, ...]]] = {}

    def triangulate(ids: frozenset[int]) -> list[tuple[int, ...]]:
        if ids in cache:
            return cache[ids]
        idl = sorted(ids)
        pts = [points[i] for i in idl]
        k = affine_rank(pts)
        if len(idl) == k + 1:
            cache[ids] = [tuple(idl)]
            return cache[ids]
        apex = min(idl, key=lambda i: rank_of[i])
        chart = chart_coordinates(pts)
        out = []
        if k == 1:
            # a segment: only its two endpoints can be vertices of a cell
            raise PreconditionError("points are not in convex position")
        for _, tight in facets_of_points(chart):
            face = frozenset(idl[i] for i in tight)
            if apex in face:
                continue
            for simplex in triangulate(face):
                out.append(tuple(sorted(simplex + (apex,))))
        cache[ids] = sorted(out)
        return cache[ids]

    return triangulate(frozenset(range(n)))


def regular_cells(points: Sequence[Sequence], heights: Sequence) -> list[frozenset[int]]:
    """Cells of the regular subdivision of a point set spanning its affine hull."""
    chart = chart_coordinates(points)
    return [f.points for f in lower_hull(chart, heights)]


def max_crepant_subdivision(F: Fan, P: ReflexivePolytope, seed_order: Sequence[Sequence[int]] | None = None) -> Fan:
    """Simplicial refinement of ``F`` whose rays are all boundary points of the dual polytope.

    Each facet of the dual polytope is cut by the regular subdivision with
    squared-norm heights (which uses every lattice point as a vertex and
    agrees on shared faces), and non-simplex cells are refined by pulling the
    points in ``seed_order``.  Pulling with one global order is compatible on
    shared faces, so the resulting cones form a fan.
    """
    dual = P.dual
    boundary = dual.boundary_lattice_points()
    if seed_order is None:
        seed = list(boundary)
    else:
        seed = [tuple(int(x) for x in coords_of(p)) for p in seed_order]
        if sorted(seed) != sorted(boundary) or len(set(seed)) != len(seed):
            raise InputError("seed_order must be a permutation of the boundary lattice points of the dual polytope")
    ray_index = {p: i for i, p in enumerate(seed)}
    height = {p: sum(x * x for x in p) for p in boundary}
    cones: set[tuple[int, ...]] = set()
    for facet in dual.faces_of_dim(dual.rank - 1):
        pts = dual.face_lattice_points(facet)
        for cell in regular_cells(pts, [height[p] for p in pts]):
            cell_pts = sorted(pts[i] for i in cell)
            order = sorted(range(len(cell_pts)), key=lambda i: ray_index[cell_pts[i]])
            for simplex in pulling_triangulation(cell_pts, order):
                cones.add(tuple(sorted(ray_index[cell_pts[i]] for i in simplex)))
    fan = Fan(P.rank, tuple(seed), tuple(sorted(cones)))
    for c in fan.cones:
        if len(c) != P.rank or matrix_rank([fan.rays[i] for i in c]) != P.rank:
            raise InvariantError("subdivision produced a degenerate cone")
    return fan


def primitivity_report(F: Fan) -> list[tuple[tuple[int, ...], int]]:
    """Volumes of every cone of the simplicial fan, dimension by dimension."""
    out = []
    for k in range(1, F.rank + 1):
        for idx in F.cones_of_dim(k):
            out.append((idx, cone_volume([F.rays[i] for i in idx])))
    return out


def simplex_volume(points: Sequence[Sequence]) -> Fraction:
    """Normalized volume (``d!`` times Euclidean) of a full-dimensional simplex."""
    p0 = points[0]
    return abs(Fraction(determinant([sub(p, p0) for p in points[1:]])))
