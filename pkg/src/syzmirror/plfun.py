"""Piecewise linear weight functions, movable-cone membership and convexity tests.

A :class:`WeightFunction` stores values ``p(e)`` on a finite set of lattice
points.  The weight polytope ``{x : <x, e> >= p(e)}`` answers every question
asked here exactly: a point ``e`` admits a supporting functional iff its
hyperplane touches the polytope, and the piecewise linear extension of ``p``
is the support function of the polytope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InfeasibleError, InputError, InvariantError, PreconditionError
from .hull import Halfspace, chart_coordinates, lower_hull, vertices_of_halfspaces
from .lattice import affine_rank, barycenter, coords_of, dot
from .polytope import Polytope


@dataclass(frozen=True)
class WeightFunction:
    """Exact rational values ``p(e)`` on distinct lattice points ``e``.

    The convention is the support-function one: the string-diagram weights
    are ``w_m = -p(m)``.
    """

    points: tuple[tuple[int, ...], ...]
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.points) != len(self.values):
            raise InputError("points and values differ in length")
        if len(set(self.points)) != len(self.points):
            raise InputError("weight function points must be distinct")
        if self.points and len({len(p) for p in self.points}) != 1:
            raise InputError("weight function points have inconsistent ranks")

    @classmethod
    def make(cls, points: Iterable[Sequence[int]], values: Iterable) -> "WeightFunction":
        return cls(tuple(tuple(int(x) for x in coords_of(p)) for p in points),
                   tuple(Fraction(v) for v in values))

    @classmethod
    def from_w(cls, points: Iterable[Sequence[int]], w: Iterable) -> "WeightFunction":
        """Build from string-diagram weights ``w_m`` (stored as ``p = -w``)."""
        return cls.make(points, [-Fraction(x) for x in w])

    @classmethod
    def constant(cls, points: Iterable[Sequence[int]], value) -> "WeightFunction":
        pts = list(points)
        return cls.make(pts, [value] * len(pts))

    @property
    def rank(self) -> int:
        return len(self.points[0])

    @property
    def w(self) -> tuple[Fraction, ...]:
        return tuple(-v for v in self.values)

    def value(self, point) -> Fraction:
        key = tuple(coords_of(point))
        try:
            return self.values[self.points.index(key)]
        except ValueError:
            raise InputError(f"{key} is not in the domain of the weight function") from None

    def as_dict(self) -> dict[tuple[int, ...], Fraction]:
        return dict(zip(self.points, self.values))

    def restrict(self, points: Iterable[Sequence[int]]) -> "WeightFunction":
        d = self.as_dict()
        pts = [tuple(coords_of(p)) for p in points]
        return WeightFunction(tuple(pts), tuple(d[p] for p in pts))

    def scaled(self, t) -> "WeightFunction":
        t = Fraction(t)
        return WeightFunction(self.points, tuple(t * v for v in self.values))

    def to_json(self) -> dict:
        return {"points": [list(p) for p in self.points], "values": [_fraction_text(v) for v in self.values]}


def _fraction_text(v: Fraction) -> str:
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


@dataclass(frozen=True)
class WeightPolyhedron:
    """Vertices of ``{x : <x, e> >= p(e)}`` with, per vertex, the tight domain indices."""

    weights: WeightFunction
    vertices: tuple[tuple[Fraction, ...], ...]
    tight: tuple[frozenset[int], ...]


def _halfspaces(w: WeightFunction) -> list[Halfspace]:
    out = []
    for e, v in zip(w.points, w.values):
        if not any(e):
            raise InputError("the origin cannot carry a supporting hyperplane")
        g = math.gcd(*e)
        out.append(Halfspace(tuple(x // g for x in e), Fraction(v) / g))
    return out


def weight_polyhedron(w: WeightFunction) -> WeightPolyhedron:
    if not w.points:
        raise InputError("empty weight domain")
    verts, rays, tights = vertices_of_halfspaces(_halfspaces(w))
    if rays:
        raise PreconditionError("weight polyhedron is unbounded; the domain does not span positively")
    return WeightPolyhedron(w, tuple(verts), tuple(tights))


@dataclass(frozen=True)
class WeightPolytope:
    """The polytope ``Delta_p`` together with the weights defining it."""

    polytope: Polytope
    defining_weights: WeightFunction


def weight_polytope(w: WeightFunction) -> WeightPolytope:
    """``Delta_p = {x : <x, e> >= p(e) for every domain point e}``."""
    if any(v >= 0 for v in w.values):
        raise PreconditionError("all weight values must be negative so the origin is interior")
    poly = weight_polyhedron(w)
    return WeightPolytope(Polytope.from_points(poly.vertices), w)


@dataclass(frozen=True)
class MembershipReport:
    """Outcome of a movable-cone test.

    ``witnesses`` maps each tested domain point to a functional ``m`` with
    ``m(e) = p(e)`` and ``m >= p`` on the domain, or ``None`` when none
    exists.  ``integral`` records whether every witness has integer entries.
    """

    member: bool
    witnesses: dict[tuple[int, ...], tuple[Fraction, ...] | None]
    failures: tuple[tuple[int, ...], ...]
    integral: bool

    def __bool__(self) -> bool:
        return self.member


def skeleton_domain(points: Sequence[Sequence[int]], codim: int = 2) -> list[tuple[int, ...]]:
    """Points lying on faces of codimension at least ``codim`` of ``conv(points)``."""
    poly = Polytope.from_points(points)
    top = poly.rank - codim
    return [tuple(p) for p in points if poly.carrier_face(p).dim <= top]


def movable_cone_member(w: WeightFunction, skeleton_only: bool = False, strict: bool = False) -> MembershipReport:
    """Decide whether every domain point admits a supporting linear functional.

    With ``skeleton_only`` only points on the codimension-two skeleton of the
    domain's convex hull need a witness.  With ``strict`` the witness must
    touch at that point alone, which is the convexity notion used for
    large-limit weights.  Decided exactly from the vertices of the weight
    polyhedron; an empty polyhedron means no point is supported.
    """
    if not w.points:
        raise InputError("empty weight domain")
    tested = set(skeleton_domain(w.points)) if skeleton_only else set(w.points)
    try:
        poly = weight_polyhedron(w)
    except InfeasibleError:
        fails = tuple(p for p in w.points if p in tested)
        return MembershipReport(False, {p: None for p in fails}, fails, False)
    witnesses: dict[tuple[int, ...], tuple[Fraction, ...] | None] = {}
    failures = []
    for idx, e in enumerate(w.points):
        if e not in tested:
            continue
        touching = [k for k, t in enumerate(poly.tight) if idx in t]
        if not touching:
            witnesses[e] = None
            failures.append(e)
            continue
        if not strict:
            witnesses[e] = min(poly.vertices[k] for k in touching)
            continue
        face_pts = [poly.vertices[k] for k in touching]
        common = frozenset.intersection(*(poly.tight[k] for k in touching))
        if affine_rank(face_pts) == w.rank - 1 and common == {idx}:
            witnesses[e] = barycenter(face_pts)
        else:
            witnesses[e] = None
            failures.append(e)
    for e, m in witnesses.items():
        if m is not None:
            _check_witness(w, e, m, strict)
    integral = all(m is not None and all(Fraction(x).denominator == 1 for x in m) for m in witnesses.values())
    return MembershipReport(not failures, witnesses, tuple(failures), integral)


def _check_witness(w: WeightFunction, e, m, strict: bool) -> None:
    for f, v in zip(w.points, w.values):
        s = dot(m, f) - v
        if s < 0 or (f == e and s != 0) or (strict and f != e and s == 0):
            raise InvariantError(f"witness for {e} fails at {f}")


def extend_pl(w: WeightFunction, n) -> Fraction:
    """Support-function extension ``p(n) = min <m, n>`` over the weight polytope."""
    report = movable_cone_member(w)
    if not report.member:
        raise PreconditionError(f"weights are not in the movable cone; unsupported points {list(report.failures)}")
    poly = weight_polyhedron(w)
    n = [Fraction(x) for x in coords_of(n)]
    if len(n) != w.rank:
        raise InputError("evaluation point has the wrong rank")
    return min(dot(v, n) for v in poly.vertices)


def linearity_domains(w: WeightFunction) -> list[frozenset[tuple[int, ...]]]:
    """Domain points spanning each maximal cone on which the extension is linear."""
    poly = weight_polyhedron(w)
    return [frozenset(w.points[i] for i in t) for t in poly.tight]


def refines_normal_fan(w: WeightFunction, facets: Sequence[Iterable[Sequence[int]]]) -> bool:
    """True iff each linearity domain of ``w`` lies inside one of the given cones.

    ``facets`` lists, for every maximal cone of the reference fan, the domain
    points it contains (for the anticanonical fan: the lattice points of each
    facet of the dual polytope).
    """
    cones = [frozenset(tuple(p) for p in f) for f in facets]
    return all(any(dom <= c for c in cones) for dom in linearity_domains(w))


@dataclass(frozen=True)
class ConvexityReport:
    """Result of the strict convexity test on a point configuration.

    ``witnesses`` maps each point to an affine function ``(slope, intercept)``
    equal to ``w`` there and strictly below ``w`` at every other point.
    """

    convex: bool
    witnesses: dict[tuple[int, ...], tuple[tuple[Fraction, ...], Fraction] | None]
    failures: tuple[tuple[int, ...], ...]

    def __bool__(self) -> bool:
        return self.convex


def convex_on_points(points: Sequence[Sequence[int]], w_values: Sequence) -> ConvexityReport:
    """Strict convexity of string-diagram weights ``w`` on a point configuration.

    A point passes when some affine function equals ``w`` there and is
    strictly smaller at every other point, i.e. when the lifted point is a
    vertex of the lower hull.  Affine functions are expressed in the
    coordinates returned by the chart of the points' affine hull.
    """
    pts = [tuple(coords_of(p)) for p in points]
    ws = [Fraction(x) for x in w_values]
    chart = chart_coordinates(pts)
    facets = lower_hull(chart, ws)
    witnesses: dict[tuple[int, ...], tuple[tuple[Fraction, ...], Fraction] | None] = {p: None for p in pts}
    for f in facets:
        cell = sorted(f.points)
        cell_chart = [chart[i] for i in cell]
        if len(cell) == len(chart[0]) + 1:
            cell_poly = None
        else:
            cell_poly = Polytope.from_points(cell_chart)
        for i in cell:
            if witnesses[pts[i]] is not None:
                continue
            if cell_poly is None:
                normals = _simplex_normals_at(cell_chart, cell.index(i))
            else:
                vid = next((k for k, v in enumerate(cell_poly.vertices) if v == tuple(chart[i])), None)
                if vid is None:
                    continue
                normals = [cell_poly.halfspaces[j].normal for j, fv in enumerate(cell_poly.facet_vertices) if vid in fv]
            witnesses[pts[i]] = _strict_witness(chart, ws, f, i, normals)
    failures = tuple(p for p in pts if witnesses[p] is None)
    return ConvexityReport(not failures, witnesses, failures)


def _simplex_normals_at(simplex: Sequence[Sequence], k: int) -> list[tuple]:
    """Inward normals of the facets of a full-dimensional simplex through vertex ``k``."""
    poly = Polytope.from_points(simplex)
    vid = poly.vertices.index(tuple(simplex[k]))
    return [poly.halfspaces[j].normal for j, fv in enumerate(poly.facet_vertices) if vid in fv]


def _strict_witness(chart, ws, facet, i, normals):
    """Tilt the facet's affine function so that it touches the lift at point ``i`` only."""
    direction = [sum(n[k] for n in normals) for k in range(len(chart[0]))]
    m = chart[i]

    def h(q):
        return -sum(d * (a - b) for d, a, b in zip(direction, q, m))

    def f(q):
        return sum(s * x for s, x in zip(facet.slope, q)) + facet.intercept

    eps = Fraction(1)
    for q, wq in zip(chart, ws):
        hq = h(q)
        if hq > 0:
            gap = wq - f(q)
            if gap <= 0:
                return None
            eps = min(eps, gap / (2 * hq))
    slope = tuple(s - eps * d for s, d in zip(facet.slope, direction))
    intercept = facet.intercept + eps * sum(d * x for d, x in zip(direction, m))
    for k, (q, wq) in enumerate(zip(chart, ws)):
        val = sum(s * x for s, x in zip(slope, q)) + intercept
        if (k == i and val != wq) or (k != i and val >= wq):
            return None
    return slope, intercept


def convex_on_polygon(w: WeightFunction) -> ConvexityReport:
    """Strict convexity of ``w`` over all lattice points of a two-dimensional polygon."""
    if affine_rank(w.points) != 2:
        raise InputError("convex_on_polygon needs points spanning a plane")
    return convex_on_points(w.points, w.w)


def snap_log_weight(value: float, max_denominator: int = 10**6) -> Fraction:
    return Fraction(value).limit_denominator(max_denominator)


def convex_on_skeleton_faces(w: WeightFunction, codim: int = 2) -> ConvexityReport:
    """Strict convexity of ``w`` restricted to every face of dimension ``rank - codim``.

    The faces are those of the convex hull of the domain; a point passes
    when it passes on every such face containing it.
    """
    poly = Polytope.from_points(w.points)
    wd = dict(zip(w.points, w.w))
    witnesses: dict = {p: None for p in w.points}
    failed: set = set()
    for face in poly.faces_of_dim(poly.rank - codim):
        pts = [p for p in w.points if poly.face_contains(face, p)]
        report = convex_on_points(pts, [wd[p] for p in pts])
        failed.update(report.failures)
        for p, wit in report.witnesses.items():
            if wit is not None and witnesses[p] is None:
                witnesses[p] = wit
    failures = tuple(p for p in w.points if p in failed or witnesses[p] is None)
    return ConvexityReport(not failures, witnesses, failures)


def near_large_limit_check(coefficients: Sequence[tuple[Sequence[int], complex]], threshold,
                           origin_coefficient: complex | None = None) -> bool:
    """Whether a section is near the large complex limit.

    ``w_m = -log|a_m|`` is snapped to a rational with denominator at most
    ``10**6`` and ``min w_m`` must reach ``threshold``.  When the origin
    coefficient ``psi`` is given, the shifted weights ``w_m - w_0`` must be
    strictly convex with respect to linear functions on the given points.
    Without it the test asks for convexity once ``|psi|`` is large enough,
    which is equivalent to strict convexity of ``w`` on every face of
    codimension two of the points' convex hull.
    """
    if not coefficients:
        raise InputError("no coefficients given")
    pts, ws = [], []
    for m, a in coefficients:
        if a == 0:
            raise PreconditionError(f"coefficient at {tuple(m)} is zero")
        pts.append(tuple(int(x) for x in m))
        ws.append(snap_log_weight(-math.log(abs(a))))
    if min(ws) < Fraction(threshold):
        return False
    if origin_coefficient is None:
        return convex_on_skeleton_faces(WeightFunction.from_w(pts, ws)).convex
    if origin_coefficient == 0:
        raise PreconditionError("the origin coefficient must be non-zero")
    w0 = snap_log_weight(-math.log(abs(origin_coefficient)))
    shifted = WeightFunction.from_w(pts, [x - w0 for x in ws])
    return movable_cone_member(shifted, strict=True).member
