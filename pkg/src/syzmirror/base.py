"""The dual base complexes on the boundaries of Delta_v and Delta_w, and the map phi.

Two weight functions enter: ``w`` on the skeleton points of ``Delta`` and
``v`` on the skeleton points of its dual.  Each subdivides the boundary of
its polytope (:class:`SkeletonSubdivision`) and defines a weight polytope in
the other lattice whose faces are dual to the subdivision cells.

A cell of the complex on the boundary of ``Delta_v`` is a pair ``(a, b)``
where ``a`` is a cell of the ``w``-subdivision with carrier face ``F`` of
``Delta`` and ``b`` a cell of the ``v``-subdivision with carrier ``F*``.  It
has dimension ``dim a + dim F* - dim b`` and ``(a', b') <= (a, b)`` iff
``a' <= a`` and ``b <= b'``.  Swapping the roles gives the complex on the
boundary of ``Delta_w``; the bijection ``(a, b) <-> (b, a)`` reverses the
order and is the combinatorial form of phi.  Both complexes are realized by
their barycentric subdivisions: each cell gets a point, each chain of cells a
simplex, and phi maps simplices linearly onto the partner simplices.
"""

from __future__ import annotations

import random
from functools import cached_property, lru_cache
from itertools import combinations
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InputError, InvariantError, PreconditionError
from .fan import pulling_triangulation
from .hull import chart_pivots, lower_hull
from .lattice import affine_rank, barycenter, common_denominator, determinant, dot, inverse, matvec
from .plfun import WeightFunction
from .polytope import Face, Polytope, ReflexivePolytope

Point = tuple[int, ...]
Cell = frozenset  # frozenset of lattice points


@lru_cache(maxsize=None)
def _cell_faces_cached(pts: tuple[Point, ...]) -> tuple[tuple[frozenset, frozenset], ...]:
    if affine_rank(pts) == len(pts) - 1:
        return tuple((frozenset(c), frozenset(c)) for k in range(1, len(pts) + 1) for c in combinations(pts, k))
    pivots = chart_pivots(pts)
    chart = [tuple(p[k] for k in pivots) for p in pts]
    poly = Polytope.from_points(chart)
    lookup = {c: p for c, p in zip(chart, pts)}
    out = []
    for f in poly.faces:
        verts = frozenset(lookup[tuple(poly.vertices[i])] for i in f.vertex_indices)
        members = frozenset(p for c, p in zip(chart, pts) if poly.face_contains(f, c))
        out.append((verts, members))
    return tuple(out)


def _cell_faces(points: Sequence[Point]) -> tuple[tuple[frozenset, frozenset], ...]:
    """Faces of ``conv(points)`` as (vertex set, set of listed points on the face) pairs."""
    return _cell_faces_cached(tuple(sorted(points)))


@dataclass(frozen=True)
class SubdivisionCell:
    """A cell: its vertices, every weighted point it contains, its dimension and carrier face."""

    points: tuple[Point, ...]
    members: frozenset
    dim: int
    carrier: frozenset[int]


class SkeletonSubdivision:
    """Regular subdivision of the boundary of ``P`` by weights on its skeleton points.

    ``w`` holds string-diagram weights (``w_m = -p(m)``) on every lattice
    point of the faces of codimension at least two.  Each proper face is cut
    by the lower hull of the weighted points it contains.  The weight
    polytope ``{y : <m, y> >= -w_m}`` in the dual lattice then has one vertex
    per top-dimensional cell; the face dual to a cell ``c`` is spanned by the
    vertices of the top cells containing ``c``.
    """

    def __init__(self, P: Polytope, w: WeightFunction):
        self.polytope = P
        self.rank = P.rank
        skeleton = [p for p in P.boundary_lattice_points() if P.carrier_face(p).dim <= self.rank - 2]
        wd = dict(zip(w.points, w.w))
        missing = [p for p in skeleton if p not in wd]
        if missing:
            raise InputError(f"weights missing at skeleton points {missing[:5]}")
        self.points = tuple(skeleton)
        self.w = {p: wd[p] for p in skeleton}
        self._build_cells()
        self._build_dual_faces()

    def _build_cells(self) -> None:
        P = self.polytope
        found: dict[frozenset, frozenset] = {}
        for face in P.faces:
            if face.dim == P.rank or face.dim == 0:
                continue
            pts = [p for p in self.points if P.face_contains(face, p)]
            pivots = chart_pivots(pts)
            chart = [tuple(p[k] for k in pivots) for p in pts]
            tops = [frozenset(pts[i] for i in f.points) for f in lower_hull(chart, [self.w[p] for p in pts])]
            for top in tops:
                for verts, members in _cell_faces(sorted(top)):
                    found[verts] = members
        for v in P.vertices:
            p = tuple(int(x) for x in v)
            found.setdefault(frozenset([p]), frozenset([p]))
        cells = []
        for verts, members in found.items():
            pl = sorted(verts)
            carrier = P.carrier_face(barycenter(pl))
            cells.append(SubdivisionCell(tuple(pl), members, affine_rank(pl), carrier.vertex_indices))
        cells.sort(key=lambda c: (c.dim, c.points))
        self.cells: tuple[SubdivisionCell, ...] = tuple(cells)
        self.index: dict[frozenset, int] = {frozenset(c.points): i for i, c in enumerate(cells)}
        self.by_carrier: dict[frozenset[int], list[int]] = {}
        for i, c in enumerate(cells):
            self.by_carrier.setdefault(c.carrier, []).append(i)
        # faces and cofaces of each cell
        self.faces_of: list[list[int]] = [[] for _ in cells]
        self.cofaces_of: list[list[int]] = [[] for _ in cells]
        for i, c in enumerate(cells):
            for verts, _ in _cell_faces(c.points):
                j = self.index[verts]
                self.faces_of[i].append(j)
                self.cofaces_of[j].append(i)
        for lst in self.faces_of + self.cofaces_of:
            lst.sort()

    def _build_dual_faces(self) -> None:
        r = self.rank
        tops = [i for i, c in enumerate(self.cells) if c.dim == r - 1]
        self.top_vertex: dict[int, tuple[Fraction, ...]] = {}
        for i in tops:
            pts = self.cells[i].points
            A = [list(p) for p in pts]
            rhs = [-self.w[p] for p in pts]
            sol = _solve_exact(A, rhs)
            if sol is None:
                raise PreconditionError("weights are not convex with respect to the skeleton (inconsistent cell)")
            cell_set = self.cells[i].members
            for m in self.points:
                s = dot(m, sol) + self.w[m]
                if s < 0 or (s == 0) != (m in cell_set):
                    raise PreconditionError(
                        "weights are not convex with respect to the skeleton; "
                        f"cell {pts[:3]}... is not a face of the weight polytope (check at {m})")
            self.top_vertex[i] = sol
        self.dual_face_vertices: list[list[int]] = [[] for _ in self.cells]
        for i in tops:
            for j in self.faces_of[i]:
                self.dual_face_vertices[j].append(i)
        self.dual_face_barycenter: list[tuple[Fraction, ...]] = []
        for j, c in enumerate(self.cells):
            verts = [self.top_vertex[i] for i in self.dual_face_vertices[j]]
            if not verts or affine_rank(verts) != r - 1 - c.dim:
                raise PreconditionError(f"dual face of cell {c.points} has the wrong dimension")
            self.dual_face_barycenter.append(barycenter(verts))

    def cell_of(self, points) -> int:
        key = frozenset(tuple(p) for p in points)
        if key not in self.index:
            raise InputError(f"{sorted(key)} is not a cell")
        return self.index[key]

    def weight_polytope_vertices(self) -> list[tuple[Fraction, ...]]:
        return [self.top_vertex[i] for i in sorted(self.top_vertex)]

    def halfspace_slack(self, y) -> dict[Point, Fraction]:
        return {m: dot(m, y) + self.w[m] for m in self.points}


def _point_text(x) -> str:
    return ", ".join(str(c) for c in x)


def _solve_exact(A, b):
    from .lattice import solve
    sol = solve(A, b)
    if sol is None:
        return None
    for row, rhs in zip(A, b):
        if dot(row, sol) != rhs:
            return None
    return sol


def flag_decomposition(P: Polytope, x) -> list[tuple[Face, Fraction]]:
    """Write ``x`` as ``sum t_i bary(F_i)`` over a chain of faces ``F_0 < ... < F_k``.

    The chain ends at the carrier face of ``x``; the coefficients are the
    barycentric coordinates of ``x`` in the barycentric subdivision of that
    face.  Computed by shooting a ray from the face barycenter through ``x``.
    """
    x = tuple(Fraction(c) for c in x)
    out: list[tuple[Face, Fraction]] = []
    mass = Fraction(1)
    face = P.carrier_face(x)
    while True:
        c = barycenter(P.face_vertices(face))
        if x == c:
            out.append((face, mass))
            break
        d = tuple(a - b for a, b in zip(x, c))
        slack_c = P.slack(c)
        s_exit = None
        for j, h in enumerate(P.halfspaces):
            rate = dot(d, h.normal)
            if rate < 0:
                s = slack_c[j] / -rate
                if s_exit is None or s < s_exit:
                    s_exit = s
        if s_exit is None or s_exit < 1:
            raise InvariantError("ray from the face barycenter does not exit through the boundary")
        exit_pt = tuple(a + s_exit * b for a, b in zip(c, d))
        out.append((face, mass * (1 - 1 / s_exit)))
        mass = mass / s_exit
        x = exit_pt
        face = P.carrier_face(x)
    out.reverse()
    return [(f, t) for f, t in out if t != 0]


@dataclass(frozen=True)
class BaseCell:
    """A cell ``(a, b)``: ``a`` indexes the primary subdivision, ``b`` the partner one."""

    a: int
    b: int
    dim: int
    carrier: frozenset[int]  # carrier face of ``a`` in the primary polytope


class BaseComplex:
    """The complex on the boundary of the partner's weight polytope.

    ``primary`` subdivides ``R.base``; ``partner`` subdivides ``R.dual``.
    The ambient polytope is ``{x : <x, n> >= -u_n}`` for the partner weights
    ``u``; its facet at ``n`` is the union of the cells ``(a, {n})``.
    """

    def __init__(self, R: ReflexivePolytope, primary: SkeletonSubdivision, partner: SkeletonSubdivision):
        if primary.polytope != R.base or partner.polytope != R.dual:
            raise InputError("subdivisions do not match the polytope pair")
        self.R = R
        self.A = primary
        self.B = partner
        self.rank = R.rank
        self._build_cells()
        self._build_points()
        self._build_simplices()

    # -- cells ------------------------------------------------------------

    def _dual_key(self, key: frozenset[int]) -> frozenset[int]:
        F = self.R.base.face_by_vertices(key)
        return self.R.dual_face(F).vertex_indices

    def _build_cells(self) -> None:
        cells = []
        dual_cache: dict[frozenset[int], frozenset[int]] = {}
        for ai, a in enumerate(self.A.cells):
            if a.carrier not in dual_cache:
                dual_cache[a.carrier] = self._dual_key(a.carrier)
            dkey = dual_cache[a.carrier]
            fdim = self.R.dual.face_by_vertices(dkey).dim
            for bi in self.B.by_carrier.get(dkey, []):
                b = self.B.cells[bi]
                cells.append(BaseCell(ai, bi, a.dim + fdim - b.dim, a.carrier))
        cells.sort(key=lambda c: (c.dim, self.A.cells[c.a].points, self.B.cells[c.b].points))
        self.cells: tuple[BaseCell, ...] = tuple(cells)
        self.index: dict[tuple[int, int], int] = {(c.a, c.b): i for i, c in enumerate(cells)}
        self.dual_of_carrier = dual_cache
        # facets (cells one dimension lower below each cell)
        self.children: list[list[int]] = []
        for c in cells:
            kids = []
            for a2 in self.A.faces_of[c.a]:
                for b2 in self.B.cofaces_of[c.b]:
                    j = self.index.get((a2, b2))
                    if j is not None and cells[j].dim == c.dim - 1:
                        kids.append(j)
            self.children.append(sorted(kids))

    def key(self, i: int) -> tuple[tuple[Point, ...], tuple[Point, ...]]:
        c = self.cells[i]
        return self.A.cells[c.a].points, self.B.cells[c.b].points

    def leq(self, i: int, j: int) -> bool:
        ci, cj = self.cells[i], self.cells[j]
        return ci.a in self.A.faces_of[cj.a] and cj.b in self.B.faces_of[ci.b]

    # -- geometry ---------------------------------------------------------

    def _gamma(self, b: int, face_key: frozenset[int]) -> int:
        """Intersection of the partner cells with carrier ``face_key*`` containing ``b``."""
        dkey = self.dual_of_carrier.get(face_key) or self._dual_key(face_key)
        cand = [j for j in self.B.cofaces_of[b] if self.B.cells[j].carrier == dkey]
        if not cand:
            raise InvariantError("no partner cell over the flag face")
        common = frozenset(self.B.cells[cand[0]].points)
        for j in cand[1:]:
            common &= frozenset(self.B.cells[j].points)
        if common not in self.B.index:
            raise InvariantError("partner cells do not meet in a cell")
        return self.B.index[common]

    def _build_points(self) -> None:
        P = self.R.base
        pts = []
        flag_cache: dict[int, list[tuple[Face, Fraction]]] = {}
        for c in self.cells:
            if c.a not in flag_cache:
                flag_cache[c.a] = flag_decomposition(P, barycenter(self.A.cells[c.a].points))
            total = [Fraction(0)] * self.rank
            for face, t in flag_cache[c.a]:
                g = self._gamma(c.b, face.vertex_indices)
                bc = self.B.dual_face_barycenter[g]
                for k in range(self.rank):
                    total[k] += t * bc[k]
            pts.append(tuple(total))
        self.points: tuple[tuple[Fraction, ...], ...] = tuple(pts)
        self.projection: tuple[tuple[Fraction, ...], ...] = tuple(
            barycenter(self.A.cells[c.a].points) for c in self.cells)

    def _build_simplices(self) -> None:
        r = self.rank
        tops = [i for i, c in enumerate(self.cells) if c.dim == r - 1]
        simplices = []
        for t in tops:
            stack = [(t,)]
            while stack:
                chain = stack.pop()
                head = chain[0]
                if self.cells[head].dim == 0:
                    simplices.append(chain)
                    continue
                for k in self.children[head]:
                    stack.append((k,) + chain)
        simplices.sort()
        self.simplices: tuple[tuple[int, ...], ...] = tuple(simplices)
        # the facet of the ambient polytope holding each simplex: its top cell is (a, {n})
        self.facet_of_simplex = tuple(self.B.cells[self.cells[s[-1]].b].points[0] for s in simplices)
        self.facets: dict[Point, list[int]] = {}
        for k, n in enumerate(self.facet_of_simplex):
            self.facets.setdefault(n, []).append(k)
        self._pivots = {}
        for n, ks in self.facets.items():
            verts = [self.points[i] for i in self.simplices[ks[0]]]
            self._pivots[n] = chart_pivots(verts)
        self._inverse_cache: dict[int, list[list[Fraction]]] = {}
        self._boxes = [self._box(s) for s in simplices]

    def _box(self, s):
        pts = [self.points[i] for i in s]
        return tuple((min(p[k] for p in pts), max(p[k] for p in pts)) for k in range(self.rank))

    def ambient_slack(self, x) -> dict[Point, Fraction]:
        """Slack of ``x`` in each facet inequality ``<x, n> >= -u_n`` of the ambient polytope."""
        return {n: dot(x, n) + self.B.w[n] for n in self.facets}

    @cached_property
    def _integer_facets(self) -> list[tuple[Point, int, int]]:
        out = []
        for n in sorted(self.facets):
            u = Fraction(self.B.w[n])
            out.append((n, u.numerator, u.denominator))
        return out

    def tight_facets(self, x) -> tuple[frozenset, bool]:
        """Facets whose inequality is tight at ``x``, and whether ``x`` satisfies all of them."""
        D, (xs,) = common_denominator([x])
        tight, inside = [], True
        for n, unum, uden in self._integer_facets:
            val = sum(a * b for a, b in zip(xs, n)) * uden + unum * D
            if val == 0:
                tight.append(n)
            elif val < 0:
                inside = False
        return frozenset(tight), inside

    def on_boundary(self, x) -> bool:
        tight, inside = self.tight_facets(x)
        return inside and bool(tight)

    def _chart_matrix(self, k: int) -> list[list[Fraction]]:
        if k not in self._inverse_cache:
            n = self.facet_of_simplex[k]
            piv = self._pivots[n]
            pts = [self.points[i] for i in self.simplices[k]]
            M = [[p[j] for p in pts] for j in piv] + [[Fraction(1)] * len(pts)]
            self._inverse_cache[k] = inverse(M)
        return self._inverse_cache[k]

    def barycentric(self, k: int, x) -> tuple[Fraction, ...]:
        n = self.facet_of_simplex[k]
        piv = self._pivots[n]
        rhs = [Fraction(x[j]) for j in piv] + [Fraction(1)]
        return tuple(matvec(self._chart_matrix(k), rhs))

    def locate(self, x) -> tuple[int, tuple[Fraction, ...]]:
        """The lowest-numbered simplex containing ``x`` with its barycentric coordinates."""
        x = tuple(Fraction(c) for c in x)
        if len(x) != self.rank:
            raise InputError("point has the wrong rank")
        tight, inside = self.tight_facets(x)
        if not inside or not tight:
            raise PreconditionError(f"point ({_point_text(x)}) is not on the boundary of the ambient polytope")
        for n in sorted(tight):
            for k in self.facets[n]:
                box = self._boxes[k]
                if any(not (lo <= c <= hi) for c, (lo, hi) in zip(x, box)):
                    continue
                lam = self.barycentric(k, x)
                if all(t >= 0 for t in lam):
                    return k, lam
        raise InvariantError(f"point ({_point_text(x)}) on the boundary is not covered by the complex")

    def carrier_cells(self, x) -> tuple[int, ...]:
        """Cells whose points span the minimal simplex containing ``x``."""
        k, lam = self.locate(x)
        return tuple(i for i, t in zip(self.simplices[k], lam) if t != 0)

    def random_point(self, rng: random.Random, max_weight: int = 20) -> tuple[Fraction, ...]:
        s = self.simplices[rng.randrange(len(self.simplices))]
        weights = [rng.randint(1, max_weight) for _ in s]
        total = sum(weights)
        return tuple(sum(Fraction(wt, total) * self.points[i][k] for wt, i in zip(weights, s)) for k in range(self.rank))

    # -- validation -------------------------------------------------------

    def validate(self) -> None:
        """Exact check that the barycentric simplices triangulate each ambient facet.

        Every simplex must be non-degenerate and lie in its facet; simplices
        sharing a ridge must lie on opposite sides of it; ridges used once
        must lie on the facet boundary; and the simplex volumes must add up
        to the facet volume.
        """
        for n, ks in self.facets.items():
            piv = self._pivots[n]
            used = sorted({i for k in ks for i in self.simplices[k]})
            scale, scaled = common_denominator([tuple(self.points[i][j] for j in piv) for i in used])
            chart = dict(zip(used, scaled))
            proj = chart.__getitem__
            total = 0
            ridges: dict[tuple[int, ...], list[tuple[int, int]]] = {}
            for k in ks:
                s = self.simplices[k]
                for i in s:
                    if n not in self.point_facets[i]:
                        raise InvariantError(f"simplex vertex off the facet at {n}")
                base = proj(s[0])
                vol = determinant([[a - b for a, b in zip(proj(i), base)] for i in s[1:]])
                if vol == 0:
                    raise InvariantError("degenerate barycentric simplex")
                total += abs(vol)
                for drop in range(len(s)):
                    ridge = s[:drop] + s[drop + 1:]
                    ridges.setdefault(ridge, []).append((k, s[drop]))
            for ridge, uses in ridges.items():
                if len(uses) > 2:
                    raise InvariantError("ridge shared by more than two simplices")
                if len(uses) == 2:
                    signs = []
                    for _, apex in uses:
                        base = proj(ridge[0])
                        signs.append(determinant([[a - b for a, b in zip(proj(i), base)] for i in ridge[1:] + (apex,)]) > 0)
                    if signs[0] == signs[1]:
                        raise InvariantError("adjacent simplices overlap")
                else:
                    if not all(len(self.point_facets[i]) > 1 for i in ridge):
                        raise InvariantError("unmatched ridge inside a facet")
            if total != self.facet_volume(n) * scale ** len(piv):
                raise InvariantError(f"simplices do not fill the facet at {n}")

    @cached_property
    def point_facets(self) -> tuple[frozenset, ...]:
        """For each cell point, the ambient facets containing it."""
        return tuple(self.tight_facets(p)[0] for p in self.points)

    def facet_vertices(self, n) -> list[tuple[Fraction, ...]]:
        bi = self.B.cell_of([n])
        return [self.B.top_vertex[i] for i in self.B.dual_face_vertices[bi]]

    def facet_volume(self, n) -> Fraction:
        verts = sorted(set(self.facet_vertices(n)))
        piv = self._pivots[n]
        chart = [tuple(v[j] for j in piv) for v in verts]
        total = Fraction(0)
        for simplex in pulling_triangulation(chart):
            base = chart[simplex[0]]
            total += abs(determinant([[a - b for a, b in zip(chart[i], base)] for i in simplex[1:]]))
        return total

    # -- maps ---------------------------------------------------------------

    def pi_hat(self, x) -> tuple[Fraction, ...]:
        """Cellwise projection onto the boundary of the primary polytope."""
        k, lam = self.locate(x)
        s = self.simplices[k]
        return tuple(sum(t * self.projection[i][j] for t, i in zip(lam, s)) for j in range(self.rank))

    def facet_face(self, n) -> list[int]:
        """Cells of the facet ``alpha_n`` where ``<., n>`` reaches ``-u_n``."""
        if n not in self.facets:
            raise PreconditionError(f"{n} does not support a facet of the ambient polytope")
        return sorted({i for k in self.facets[n] for i in self.simplices[k]})

    def in_open_facet(self, n, x) -> bool:
        tight, inside = self.tight_facets(x)
        return inside and tight == {tuple(n)}

    def in_open_star(self, m, x) -> bool:
        """Membership in ``U_m``: the minimal simplex of ``x`` touches a cell ``({m}, b)``."""
        key = frozenset([tuple(m)])
        if key not in self.A.index:
            raise InputError(f"{tuple(m)} is not a vertex of the subdivision")
        ai = self.A.index[key]
        return any(self.cells[i].a == ai for i in self.carrier_cells(x))

    def vertex_cells(self, m) -> list[int]:
        ai = self.A.cell_of([m])
        return [i for i, c in enumerate(self.cells) if c.a == ai]


@dataclass
class BasePair:
    """The complexes on the boundaries of ``Delta_v`` and ``Delta_w`` with phi between them."""

    R: ReflexivePolytope
    w_side: SkeletonSubdivision
    v_side: SkeletonSubdivision
    on_v: BaseComplex  # cells (a, b) on the boundary of Delta_v; a from w, b from v
    on_w: BaseComplex  # cells (b, a) on the boundary of Delta_w

    @cached_property
    def cell_bijection(self) -> dict[int, int]:
        """phi on cells: index on the ``Delta_w`` side to index on the ``Delta_v`` side."""
        out = {}
        for i, c in enumerate(self.on_w.cells):
            j = self.on_v.index.get((c.b, c.a))
            if j is None:
                raise InvariantError("cell without a partner")
            out[i] = j
        if sorted(out.values()) != list(range(len(self.on_v.cells))):
            raise InvariantError("phi is not a bijection on cells")
        return out

    @cached_property
    def inverse_bijection(self) -> dict[int, int]:
        return {j: i for i, j in self.cell_bijection.items()}

    def phi(self, x) -> tuple[Fraction, ...]:
        """phi: boundary of ``Delta_w`` to boundary of ``Delta_v``."""
        return _transport(self.on_w, self.on_v, self.cell_bijection, x)

    def phi_inverse(self, y) -> tuple[Fraction, ...]:
        return _transport(self.on_v, self.on_w, self.inverse_bijection, y)

    def pi_hat_v(self, y) -> tuple[Fraction, ...]:
        return self.on_v.pi_hat(y)

    def pi_hat_w(self, x) -> tuple[Fraction, ...]:
        return self.on_w.pi_hat(x)


def _transport(src: BaseComplex, dst: BaseComplex, cell_map: dict[int, int], x) -> tuple[Fraction, ...]:
    k, lam = src.locate(x)
    s = src.simplices[k]
    return tuple(sum(t * dst.points[cell_map[i]][j] for t, i in zip(lam, s)) for j in range(dst.rank))


def build_base_complex(R: ReflexivePolytope, w: WeightFunction, v: WeightFunction, validate: bool = True) -> BasePair:
    """Both base complexes for ``w`` on the skeleton of ``Delta`` and ``v`` on that of its dual."""
    Zw = SkeletonSubdivision(R.base, w)
    Zv = SkeletonSubdivision(R.dual, v)
    swapped = ReflexivePolytope(R.dual)
    # share polytope objects so that face keys agree on both sides
    swapped.dual = R.base
    on_v = BaseComplex(R, Zw, Zv)
    on_w = BaseComplex(swapped, Zv, Zw)
    pair = BasePair(R, Zw, Zv, on_v, on_w)
    if validate:
        on_v.validate()
        on_w.validate()
        pair.cell_bijection
    return pair


def anticanonical_weights(points: Sequence[Point]) -> WeightFunction:
    """``w = 1`` everywhere: the weight polytope is the reflexive partner itself."""
    return WeightFunction.from_w(points, [1] * len(points))


def quintic_quadratic_weights(points: Sequence[Point], constant: int = 100) -> WeightFunction:
    """``w(m) = constant + sum k_i^2`` with ``k = (m_1+1, ..., m_4+1, 1 - sum m_i)``.

    The ``k`` are the exponents of the monomial attached to ``m``; on every
    2-face the weights are twice the standard quadratic form plus an affine
    function, so each 2-face gets the standard subdivision.  The constant
    makes the weights convex with respect to the whole skeleton.
    """
    out = []
    for m in points:
        k = [x + 1 for x in m] + [1 - sum(m)]
        out.append(constant + sum(x * x for x in k))
    return WeightFunction.from_w(points, out)
