"""Lattice polytopes with exact vertex and halfspace descriptions.

A :class:`Polytope` is always full dimensional.  Its facets are stored as
halfspaces ``<x, normal> >= offset`` with primitive integer normals, and its
faces are keyed by the set of vertex indices they contain.  A
:class:`ReflexivePolytope` additionally carries its polar dual together with
the inclusion-reversing face correspondence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import ceil, floor
from typing import Iterable, Sequence

from .errors import InputError, InvariantError, PreconditionError
from .hull import Halfspace, facets_of_points, vertices_of_halfspaces
from .lattice import affine_rank, barycenter, coords_of, matrix_rank


@dataclass(frozen=True)
class Face:
    """A face given by its vertex indices and the facets that cut it out."""

    dim: int
    vertex_indices: frozenset[int]
    supporting_normals: frozenset[int]

    def sort_key(self):
        return (self.dim, sorted(self.vertex_indices))


def _as_fraction_point(p) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in coords_of(p))


def _canonical(p: Sequence[Fraction]) -> tuple:
    """Integers stay integers so that vertex tuples compare and print cleanly."""
    return tuple(int(x) if Fraction(x).denominator == 1 else Fraction(x) for x in p)


class Polytope:
    """A full-dimensional convex polytope in ``Q^rank``."""

    def __init__(self, vertices: Sequence[Sequence], halfspaces: Sequence[Halfspace],
                 facet_vertices: Sequence[frozenset[int]]):
        self.vertices: tuple[tuple, ...] = tuple(_canonical(v) for v in vertices)
        self.halfspaces: tuple[Halfspace, ...] = tuple(halfspaces)
        self.facet_vertices: tuple[frozenset[int], ...] = tuple(facet_vertices)
        self.rank = len(self.vertices[0])

    # -- construction -----------------------------------------------------

    @classmethod
    def from_points(cls, points: Iterable[Sequence]) -> "Polytope":
        """Convex hull of a finite point set (redundant points are dropped)."""
        pts = sorted({_as_fraction_point(p) for p in points})
        if not pts:
            raise InputError("a polytope needs at least one point")
        d = len(pts[0])
        if any(len(p) != d for p in pts):
            raise InputError("points have inconsistent ranks")
        if affine_rank(pts) < d:
            raise PreconditionError("points do not span a full-dimensional polytope")
        facets = facets_of_points(pts)
        on_facets: dict[int, list[int]] = {}
        for j, (_, tight) in enumerate(facets):
            for i in tight:
                on_facets.setdefault(i, []).append(j)
        vertex_ids = [
            i for i in range(len(pts))
            if matrix_rank([facets[j][0].normal for j in on_facets.get(i, [])]) == d
        ]
        renumber = {old: new for new, old in enumerate(vertex_ids)}
        vertices = [pts[i] for i in vertex_ids]
        halfspaces = [hs for hs, _ in facets]
        facet_vertices = [frozenset(renumber[i] for i in tight if i in renumber) for _, tight in facets]
        return cls(vertices, halfspaces, facet_vertices)

    @classmethod
    def from_halfspaces(cls, halfspaces: Sequence[Halfspace]) -> "Polytope":
        """Bounded intersection of halfspaces; redundant inequalities are dropped."""
        verts, rays, _ = vertices_of_halfspaces(halfspaces)
        if rays:
            raise PreconditionError("halfspace intersection is unbounded")
        return cls.from_points(verts)

    # -- basic queries ----------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, Polytope) and sorted(self.vertices) == sorted(other.vertices)

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.vertices)))

    def __repr__(self) -> str:
        return f"Polytope(rank={self.rank}, vertices={list(self.vertices)})"

    @property
    def is_integral(self) -> bool:
        return all(isinstance(x, int) for v in self.vertices for x in v)

    def slack(self, x) -> list[Fraction]:
        """Values ``<x, normal> - offset`` for every facet."""
        x = coords_of(x)
        if len(x) != self.rank:
            raise InputError(f"point {tuple(x)} has rank {len(x)}, expected {self.rank}")
        return [sum(a * b for a, b in zip(x, h.normal)) - h.offset for h in self.halfspaces]

    def contains(self, x) -> bool:
        return all(s >= 0 for s in self.slack(x))

    def contains_in_interior(self, x) -> bool:
        return all(s > 0 for s in self.slack(x))

    def tight_facets(self, x) -> frozenset[int]:
        return frozenset(j for j, s in enumerate(self.slack(x)) if s == 0)

    def on_boundary(self, x) -> bool:
        s = self.slack(x)
        return all(v >= 0 for v in s) and any(v == 0 for v in s)

    def bounding_box(self) -> list[tuple[int, int]]:
        return [(floor(min(v[k] for v in self.vertices)), ceil(max(v[k] for v in self.vertices)))
                for k in range(self.rank)]

    def lattice_points(self) -> list[tuple[int, ...]]:
        """All integer points, sorted lexicographically (bounding-box scan)."""
        ranges = [range(lo, hi + 1) for lo, hi in self.bounding_box()]
        return [p for p in product(*ranges) if self.contains(p)]

    def boundary_lattice_points(self) -> list[tuple[int, ...]]:
        return [p for p in self.lattice_points() if not self.contains_in_interior(p)]

    def interior_lattice_points(self) -> list[tuple[int, ...]]:
        return [p for p in self.lattice_points() if self.contains_in_interior(p)]

    def barycenter(self) -> tuple[Fraction, ...]:
        return barycenter(self.vertices)

    # -- face lattice -----------------------------------------------------

    def _face_of_vertices(self, vids: frozenset[int]) -> Face:
        normals = frozenset(j for j, fv in enumerate(self.facet_vertices) if vids <= fv)
        pts = [self.vertices[i] for i in sorted(vids)]
        return Face(affine_rank(pts), vids, normals)

    @cached_property
    def faces(self) -> tuple[Face, ...]:
        """All non-empty faces, including the polytope itself, sorted by (dim, vertex ids)."""
        top = frozenset(range(len(self.vertices)))
        found: dict[frozenset[int], Face] = {top: Face(self.rank, top, frozenset())}
        frontier = [top]
        while frontier:
            nxt = []
            for S in frontier:
                cuts = {S & T for T in self.facet_vertices if not S <= T}
                cuts.discard(frozenset())
                maximal = [C for C in cuts if not any(C < D for D in cuts)]
                for C in maximal:
                    if C not in found:
                        found[C] = self._face_of_vertices(C)
                        nxt.append(C)
            frontier = nxt
        faces = sorted(found.values(), key=Face.sort_key)
        for f in faces:
            if f.dim < 0 or f.dim > self.rank:
                raise InvariantError("face with impossible dimension")
        return tuple(faces)

    @cached_property
    def _face_index(self) -> dict[frozenset[int], Face]:
        return {f.vertex_indices: f for f in self.faces}

    def faces_of_dim(self, d: int) -> list[Face]:
        return [f for f in self.faces if f.dim == d]

    def face_by_vertices(self, vids: Iterable[int]) -> Face:
        key = frozenset(vids)
        if key not in self._face_index:
            raise InputError(f"vertex set {sorted(key)} is not a face")
        return self._face_index[key]

    def face_vertices(self, f: Face) -> list[tuple]:
        return [self.vertices[i] for i in sorted(f.vertex_indices)]

    def carrier_face(self, x) -> Face:
        """The smallest face containing the point ``x``."""
        if not self.contains(x):
            raise PreconditionError(f"point {tuple(coords_of(x))} is outside the polytope")
        tight = self.tight_facets(x)
        vids = frozenset(range(len(self.vertices)))
        for j in tight:
            vids &= self.facet_vertices[j]
        return self._face_index[vids]

    def face_contains(self, f: Face, x) -> bool:
        s = self.slack(x)
        return all(v >= 0 for v in s) and all(s[j] == 0 for j in f.supporting_normals)

    def face_relative_interior(self, f: Face, x) -> bool:
        return self.contains(x) and self.carrier_face(x) == f

    def face_lattice_points(self, f: Face) -> list[tuple[int, ...]]:
        return [p for p in self.lattice_points() if self.face_contains(f, p)]

    def scaled(self, t) -> "Polytope":
        t = Fraction(t)
        if t <= 0:
            raise InputError("scale factor must be positive")
        return Polytope.from_points([tuple(t * x for x in v) for v in self.vertices])


def dual_polytope(P: Polytope) -> Polytope:
    """The polar ``{n : <m, n> >= -1 for all m in P}``.

    Each facet ``<x, a> >= b`` (with ``b < 0`` because the origin is interior)
    contributes the dual vertex ``a / (-b)``.
    """
    origin = (0,) * P.rank
    if not P.contains_in_interior(origin):
        raise PreconditionError("the origin must be an interior point for polar duality")
    return Polytope.from_points([tuple(Fraction(a) / -h.offset for a in h.normal) for h in P.halfspaces])


def is_reflexive(P: Polytope) -> bool:
    """True iff ``P`` and its polar are lattice polytopes with the origin as sole interior point."""
    if not P.is_integral:
        raise PreconditionError("reflexivity is only defined for lattice polytopes")
    if not P.contains_in_interior((0,) * P.rank):
        return False
    if P.interior_lattice_points() != [(0,) * P.rank]:
        return False
    return dual_polytope(P).is_integral


@dataclass
class ReflexivePolytope:
    """A reflexive polytope ``Delta`` in ``M`` together with its dual in ``N``."""

    base: Polytope
    dual: Polytope = field(init=False)

    def __post_init__(self):
        if not is_reflexive(self.base):
            raise PreconditionError("polytope is not reflexive")
        self.dual = dual_polytope(self.base)

    @classmethod
    def from_vertices(cls, vertices: Iterable[Sequence[int]]) -> "ReflexivePolytope":
        return cls(Polytope.from_points(vertices))

    @property
    def rank(self) -> int:
        return self.base.rank

    def swapped(self) -> "ReflexivePolytope":
        """The same pair with the roles of ``Delta`` and its dual exchanged."""
        return ReflexivePolytope(self.dual)

    def dual_face(self, F: Face, on_dual: bool = False) -> Face:
        """The face of the other polytope pairing to ``-1`` with all of ``F``.

        With ``on_dual`` the face ``F`` belongs to the dual polytope and the
        result is a face of the base.
        """
        src, dst = (self.dual, self.base) if on_dual else (self.base, self.dual)
        if F.dim == src.rank:
            raise PreconditionError("the whole polytope has no dual face")
        pts = src.face_vertices(F)
        vids = frozenset(
            j for j, n in enumerate(dst.vertices)
            if all(sum(a * b for a, b in zip(m, n)) == -1 for m in pts)
        )
        face = dst.face_by_vertices(vids)
        if F.dim + face.dim != src.rank - 1:
            raise InvariantError("dual faces have complementary dimensions violated")
        return face

    def skeleton_points(self, codim: int = 2) -> list[tuple[int, ...]]:
        """Lattice points on faces of dimension at most ``rank - codim``."""
        if not 1 <= codim <= self.rank:
            raise InputError(f"codim must be between 1 and {self.rank}")
        top = self.rank - codim
        return [p for p in self.base.boundary_lattice_points() if self.base.carrier_face(p).dim <= top]

    def share_proper_face(self, m1, m2) -> bool:
        return bool(self.base.tight_facets(m1) & self.base.tight_facets(m2))

    def sum_in_polytope_check(self, m1, m2) -> bool:
        """Whether ``m1 + m2`` lies in ``Delta`` for boundary lattice points ``m1, m2``."""
        for m in (m1, m2):
            if not self.base.on_boundary(m):
                raise PreconditionError(f"{tuple(coords_of(m))} is not a boundary point of the polytope")
        total = tuple(a + b for a, b in zip(coords_of(m1), coords_of(m2)))
        return self.base.contains(total)


# -- bundled corpus ----------------------------------------------------------

QUINTIC_VERTICES = [(4, -1, -1, -1), (-1, 4, -1, -1), (-1, -1, 4, -1), (-1, -1, -1, 4), (-1, -1, -1, -1)]
QUARTIC_VERTICES = [(3, -1, -1), (-1, 3, -1), (-1, -1, 3), (-1, -1, -1)]
CUBIC_VERTICES = [(2, -1), (-1, 2), (-1, -1)]
CUBIC_DUAL_VERTICES = [(1, 0), (0, 1), (-1, -1)]
SQUARE_VERTICES = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
DEGREE5_TRIANGLE = [(0, 0), (5, 0), (0, 5)]
UNIT_TRIANGLE = [(0, 0), (1, 0), (0, 1)]


def corpus() -> dict[str, ReflexivePolytope]:
    """The reflexive polytopes used throughout the tests and examples."""
    return {
        "cubic": ReflexivePolytope.from_vertices(CUBIC_VERTICES),
        "cubic-dual": ReflexivePolytope.from_vertices(CUBIC_DUAL_VERTICES),
        "square": ReflexivePolytope.from_vertices(SQUARE_VERTICES),
        "quartic": ReflexivePolytope.from_vertices(QUARTIC_VERTICES),
        "quintic": ReflexivePolytope.from_vertices(QUINTIC_VERTICES),
    }
