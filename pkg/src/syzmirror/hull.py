"""Exact polyhedral conversions by the double description method.

The core routine :func:`extreme_rays` enumerates the extreme rays of a
pointed cone ``{y : a . y >= 0}`` with integer rows.  Facet enumeration of a
point set, vertex enumeration of an intersection of halfspaces, and lower
hulls of lifted point sets are all thin wrappers around it.  Everything is
integer arithmetic; rational inputs are cleared of denominators row by row.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import InfeasibleError, InputError, PreconditionError
from .lattice import inverse, matrix_rank, primitive_vector, row_reduce, sub


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def integer_row(row: Sequence) -> list[int]:
    """Positive rescaling of a rational row to a primitive integer row."""
    den = 1
    for x in row:
        den = _lcm(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in row]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [x // g for x in ints] if g > 1 else ints


def _independent_rows(A: Sequence[Sequence[int]], d: int) -> list[int]:
    chosen: list[int] = []
    basis: list[list[Fraction]] = []
    for i, row in enumerate(A):
        cand = basis + [[Fraction(x) for x in row]]
        if len(row_reduce(cand)[1]) == len(cand):
            basis = cand
            chosen.append(i)
            if len(chosen) == d:
                break
    return chosen


def chart_pivots(points: Sequence[Sequence]) -> list[int]:
    """Ambient coordinates whose projection is injective on the affine hull of ``points``.

    They are the pivot columns of the matrix of differences to the first point.
    """
    p0 = points[0]
    diffs = [sub(p, p0) for p in points[1:]]
    return row_reduce(diffs)[1] if diffs else []


def chart_coordinates(points: Sequence[Sequence]) -> list[tuple]:
    """Project points onto coordinates that are independent on their affine hull."""
    pivots = chart_pivots(points)
    return [tuple(p[k] for k in pivots) for p in points]


@dataclass(frozen=True)
class Ray:
    """An extreme ray: primitive integer direction plus the rows tight on it."""

    direction: tuple[int, ...]
    tight: frozenset[int]


def extreme_rays(A: Sequence[Sequence[int]]) -> list[Ray]:
    """Extreme rays of the pointed cone ``{y : A y >= 0}``.

    ``A`` must have full column rank, otherwise the cone contains a line and
    :class:`PreconditionError` is raised.
    """
    A = [list(map(int, row)) for row in A]
    if not A:
        raise InputError("empty constraint matrix")
    d = len(A[0])
    start = _independent_rows(A, d)
    if len(start) < d:
        raise PreconditionError("cone is not pointed (constraints do not have full rank)")
    A0 = [A[i] for i in start]
    inv = inverse(A0)
    rays: list[list[int]] = []
    masks: list[int] = []
    all_start = 0
    for i in start:
        all_start |= 1 << i
    for j in range(d):
        col = [inv[k][j] for k in range(d)]
        rays.append(integer_row(col))
        masks.append(all_start & ~(1 << start[j]))

    in_start = set(start)
    for i, a in enumerate(A):
        if i in in_start:
            continue
        bit = 1 << i
        values = [sum(x * y for x, y in zip(a, r)) for r in rays]
        pos = [k for k, s in enumerate(values) if s > 0]
        neg = [k for k, s in enumerate(values) if s < 0]
        zero = [k for k, s in enumerate(values) if s == 0]
        if not neg:
            for k in zero:
                masks[k] |= bit
            continue
        new_rays = [rays[k] for k in pos] + [rays[k] for k in zero]
        new_masks = [masks[k] for k in pos] + [masks[k] | bit for k in zero]
        for p in pos:
            for q in neg:
                common = masks[p] & masks[q]
                if bin(common).count("1") < d - 2:
                    continue
                adjacent = True
                for t in range(len(rays)):
                    if t != p and t != q and (masks[t] & common) == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                sp, sq = values[p], values[q]
                comb = [sp * y - sq * x for x, y in zip(rays[p], rays[q])]
                new_rays.append(list(primitive_vector(comb)))
                new_masks.append(common | bit)
        rays, masks = new_rays, new_masks

    out = []
    for r, mask in zip(rays, masks):
        tight = frozenset(i for i in range(len(A)) if mask >> i & 1)
        out.append(Ray(tuple(r), tight))
    out.sort(key=lambda ray: ray.direction)
    return out


@dataclass(frozen=True)
class Halfspace:
    """The inequality ``normal . x >= offset`` with a primitive integer normal."""

    normal: tuple[int, ...]
    offset: Fraction


def facets_of_points(points: Sequence[Sequence], rays: Sequence[Sequence] = ()) -> list[tuple[Halfspace, frozenset[int]]]:
    """Facets of ``conv(points) + cone(rays)``, which must be full dimensional.

    Returns ``(halfspace, tight point indices)`` pairs sorted by normal.
    """
    if not points:
        raise InputError("no points given")
    d = len(points[0])
    rows = [integer_row(list(p) + [1]) for p in points]
    rows += [integer_row(list(r) + [0]) for r in rays]
    if matrix_rank(rows) < d + 1:
        raise PreconditionError("point set is not full dimensional")
    result = []
    npts = len(points)
    for ray in extreme_rays(rows):
        a = ray.direction[:d]
        if not any(a):
            continue
        c = ray.direction[d]
        g = 0
        for x in a:
            g = gcd(g, x)
        normal = tuple(x // g for x in a)
        hs = Halfspace(normal, Fraction(-c, g))
        result.append((hs, frozenset(i for i in ray.tight if i < npts)))
    result.sort(key=lambda item: (item[0].normal, item[0].offset))
    return result


def vertices_of_halfspaces(halfspaces: Sequence[Halfspace]) -> tuple[list[tuple[Fraction, ...]], list[tuple[int, ...]], list[frozenset[int]]]:
    """Vertices and recession rays of ``{x : normal . x >= offset}``.

    Returns ``(vertices, rays, vertex_tight_sets)``; the tight sets index the
    input halfspaces.  The polyhedron must be pointed and non-empty.
    """
    if not halfspaces:
        raise InputError("no halfspaces given")
    d = len(halfspaces[0].normal)
    rows = [integer_row(list(h.normal) + [-Fraction(h.offset)]) for h in halfspaces]
    rows.append([0] * d + [1])
    nh = len(halfspaces)
    verts, recession, tights = [], [], []
    for ray in extreme_rays(rows):
        t = ray.direction[d]
        tight = frozenset(i for i in ray.tight if i < nh)
        if t > 0:
            verts.append(tuple(Fraction(x, t) for x in ray.direction[:d]))
            tights.append(tight)
        elif any(ray.direction[:d]):
            recession.append(ray.direction[:d])
    if not verts:
        raise InfeasibleError("halfspace intersection is empty")
    order = sorted(range(len(verts)), key=lambda k: verts[k])
    return [verts[k] for k in order], recession, [tights[k] for k in order]


@dataclass(frozen=True)
class LowerFacet:
    """A lower facet of a lifted point set: ``height(x) = slope . x + intercept``."""

    points: frozenset[int]
    slope: tuple[Fraction, ...]
    intercept: Fraction


def lower_hull(points: Sequence[Sequence], heights: Sequence) -> list[LowerFacet]:
    """Lower facets of ``{(p, h(p))}``; ``points`` must span their ambient space.

    Each facet lists every input point lying on it, so non-vertex points on a
    facet are reported too (the caller decides whether that is acceptable).
    """
    if len(points) != len(heights):
        raise InputError("points and heights differ in length")
    d = len(points[0])
    lifted = [list(p) + [Fraction(h)] for p, h in zip(points, heights)]
    up = [0] * d + [1]
    out = []
    for hs, tight in facets_of_points(lifted, [up]):
        a_h = hs.normal[d]
        if a_h <= 0:
            continue
        # normal . (x, h) >= offset  =>  h >= (offset - a . x) / a_h
        slope = tuple(Fraction(-a, a_h) for a in hs.normal[:d])
        intercept = Fraction(hs.offset) / a_h
        out.append(LowerFacet(tight, slope, intercept))
    out.sort(key=lambda f: sorted(f.points))
    return out
