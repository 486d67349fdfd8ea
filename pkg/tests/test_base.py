import itertools
import random
from fractions import Fraction

import pytest

from conftest import CORPUS_VERTICES
from syzmirror.base import anticanonical_weights, build_base_complex
from syzmirror.errors import InputError, PreconditionError
from syzmirror.plfun import WeightFunction
from syzmirror.polytope import ReflexivePolytope


def _anticanonical_pair(name):
    R = ReflexivePolytope.from_vertices(CORPUS_VERTICES[name])
    pair = build_base_complex(R, anticanonical_weights(R.skeleton_points()),
                              anticanonical_weights(R.swapped().skeleton_points()))
    return R, pair


def _quartic_quadratic_pair(constant=10):
    R = ReflexivePolytope.from_vertices(CORPUS_VERTICES["quartic"])
    sk = R.skeleton_points()
    w = WeightFunction.from_w(sk, [constant + sum(x * x for x in m) for m in sk])
    return R, build_base_complex(R, w, anticanonical_weights(R.swapped().skeleton_points()))


def _pairing(a, b):
    return sum(x * y for x, y in zip(a, b))


# -- cell counts ------------------------------------------------------------------


@pytest.mark.parametrize("name", ["cubic", "quartic", "quintic", "square"])
def test_anticanonical_complex_is_the_face_complex(name):
    """Oracle: with trivial subdivisions there is one cell per proper face and one simplex per full flag."""
    R, pair = _anticanonical_pair(name)
    proper = [f for f in R.base.faces if f.dim < R.rank]
    flags = 0
    tops = [f for f in proper if f.dim == R.rank - 1]
    for top in tops:
        # full flags below a facet: count chains F_0 < ... < F_{r-1} = top
        def chains(face):
            if face.dim == 0:
                return 1
            return sum(chains(g) for g in proper if g.dim == face.dim - 1 and g.vertex_indices < face.vertex_indices)
        flags += chains(top)
    for side in (pair.on_v, pair.on_w):
        assert len(side.cells) == len(proper)
        assert len(side.simplices) == flags


def test_known_cell_counts():
    assert len(_anticanonical_pair("quintic")[1].on_v.cells) == 30
    assert len(_anticanonical_pair("quintic")[1].on_v.simplices) == 120
    assert len(_anticanonical_pair("quartic")[1].on_v.simplices) == 24


def _product_count_check(R, pair):
    """|cells over F| = |w-cells with carrier F| * |v-cells with carrier F*| for every face F."""
    total = 0
    for F in R.base.faces:
        if F.dim == R.rank:
            continue
        Fd = R.dual_face(F)
        n_a = sum(1 for c in pair.w_side.cells if c.carrier == F.vertex_indices)
        n_b = sum(1 for c in pair.v_side.cells if c.carrier == Fd.vertex_indices)
        over = sum(1 for c in pair.on_v.cells if c.carrier == F.vertex_indices)
        assert over == n_a * n_b
        total += over
    assert total == len(pair.on_v.cells) == len(pair.on_w.cells)


def test_quintic_product_counts(quintic, quintic_pair):
    _product_count_check(quintic, quintic_pair)
    assert len(quintic_pair.on_v.cells) == 1310
    assert len(quintic_pair.on_v.simplices) == len(quintic_pair.on_w.simplices) == 7080


def test_quartic_product_counts():
    R, pair = _quartic_quadratic_pair()
    _product_count_check(R, pair)


def test_cell_dimensions(quintic_pair):
    """Cells have dimension at most rank - 1, and every top cell sits over a single dual vertex."""
    on_v = quintic_pair.on_v
    for c in on_v.cells:
        assert 0 <= c.dim <= 3
    tops = [c for c in on_v.cells if c.dim == 3]
    assert all(len(quintic_pair.v_side.cells[c.b].points) == 1 for c in tops)


# -- phi ------------------------------------------------------------------------------


def test_phi_sends_dual_vertices_to_facet_barycenters():
    R, pair = _anticanonical_pair("quartic")
    for n in R.dual.vertices:
        facet = [m for m in R.base.vertices if _pairing(m, n) == -1]
        bary = tuple(Fraction(sum(m[k] for m in facet), len(facet)) for k in range(3))
        assert pair.phi(n) == bary
    assert pair.phi((1, 0, 0)) == (-1, Fraction(1, 3), Fraction(1, 3))
    assert pair.phi_inverse((3, -1, -1)) == (Fraction(-1, 3), 0, 0)


@pytest.mark.parametrize("builder", ["anticanonical-quartic", "quadratic-quartic"])
def test_phi_maps_barycenters_to_partner_barycenters(builder):
    _, pair = _anticanonical_pair("quartic") if builder == "anticanonical-quartic" else _quartic_quadratic_pair()
    for i, j in pair.cell_bijection.items():
        assert pair.phi(pair.on_w.points[i]) == pair.on_v.points[j]


def test_phi_reverses_the_cell_order():
    _, pair = _quartic_quadratic_pair()
    bij = pair.cell_bijection
    n = len(pair.on_w.cells)
    for i, j in itertools.product(range(n), repeat=2):
        assert pair.on_w.leq(i, j) == pair.on_v.leq(bij[j], bij[i])


def test_phi_round_trips(quintic_pair):
    rng = random.Random(11)
    for _ in range(200):
        x = quintic_pair.on_w.random_point(rng)
        assert quintic_pair.phi_inverse(quintic_pair.phi(x)) == x
        y = quintic_pair.on_v.random_point(rng)
        assert quintic_pair.phi(quintic_pair.phi_inverse(y)) == y


def test_phi_lands_on_the_target_boundary(quintic_pair):
    rng = random.Random(5)
    for _ in range(100):
        y = quintic_pair.phi(quintic_pair.on_w.random_point(rng))
        assert quintic_pair.on_v.on_boundary(y)


def test_phi_is_continuous_across_shared_faces():
    """Points on a ridge get the same image from every simplex containing them."""
    _, pair = _quartic_quadratic_pair()
    src, dst = pair.on_w, pair.on_v
    for k, s in enumerate(src.simplices):
        for drop in range(len(s)):
            ridge = s[:drop] + s[drop + 1:]
            mid = tuple(sum(src.points[i][d] for i in ridge) / len(ridge) for d in range(3))
            expected = tuple(sum(dst.points[pair.cell_bijection[i]][d] for i in ridge) / len(ridge) for d in range(3))
            assert pair.phi(mid) == expected


def test_locate_errors(quintic_pair):
    with pytest.raises(PreconditionError):
        quintic_pair.phi((0, 0, 0, 0))
    with pytest.raises(PreconditionError):
        quintic_pair.phi((100, 0, 0, 0))
    with pytest.raises(InputError):
        quintic_pair.phi((0, 0, 0))


# -- projections -------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["quartic", "quintic"])
def test_pi_hat_is_identity_for_anticanonical_weights(name):
    _, pair = _anticanonical_pair(name)
    rng = random.Random(3)
    for _ in range(100):
        y = pair.on_v.random_point(rng)
        assert pair.pi_hat_v(y) == y


def test_pi_hat_collapses_vertex_charts(quintic, quintic_pair):
    on_v = quintic_pair.on_v
    for m in list(quintic.base.vertices[:2]) + [(0, 0, -1, -1)]:
        for i in on_v.vertex_cells(m):
            assert quintic_pair.pi_hat_v(on_v.points[i]) == m


def test_pi_hat_lands_on_the_skeleton_face(quintic, quintic_pair):
    """The image of a cell point lies in the carrier face of its primary cell."""
    on_v = quintic_pair.on_v
    P = quintic.base
    for i in range(0, len(on_v.cells), 37):
        c = on_v.cells[i]
        image = quintic_pair.pi_hat_v(on_v.points[i])
        face = P.face_by_vertices(c.carrier)
        assert P.face_contains(face, image)


# -- charts -----------------------------------------------------------------------------------


def test_facet_faces_are_argmin_faces(quintic_pair):
    on_v = quintic_pair.on_v
    for n in sorted(on_v.facets):
        cells = on_v.facet_face(n)
        u = quintic_pair.v_side.w[n]
        for i in cells:
            assert _pairing(on_v.points[i], n) == -u
    with pytest.raises(PreconditionError):
        on_v.facet_face((2, 0, 0, 0))


def test_anticanonical_facet_face_of_e1():
    R, pair = _anticanonical_pair("quintic")
    on_v = pair.on_v
    cells = on_v.facet_face((1, 0, 0, 0))
    pts = {on_v.points[i] for i in cells}
    assert all(p[0] == -1 for p in pts)
    assert {tuple(Fraction(x) for x in v) for v in R.base.vertices if v[0] == -1} <= pts


def test_open_star_and_open_facet_membership(quintic_pair):
    on_v = quintic_pair.on_v
    m = (4, -1, -1, -1)
    i = on_v.vertex_cells(m)[0]
    x = on_v.points[i]
    assert on_v.in_open_star(m, x)
    assert not on_v.in_open_star((-1, 4, -1, -1), x)
    rng = random.Random(2)
    hits = 0
    for _ in range(50):
        y = on_v.random_point(rng)
        tight, _ = on_v.tight_facets(y)
        assert on_v.in_open_facet(next(iter(tight)), y) == (len(tight) == 1)
        hits += len(tight) == 1
    assert hits > 0
    with pytest.raises(InputError):
        on_v.in_open_star((0, 0, 0, 0), x)


# -- preconditions ----------------------------------------------------------------------------


def test_non_convex_weights_rejected():
    with pytest.raises(PreconditionError):
        _quartic_quadratic_pair(constant=3)


def test_missing_weights_rejected():
    R = ReflexivePolytope.from_vertices(CORPUS_VERTICES["quartic"])
    sk = R.skeleton_points()
    with pytest.raises(InputError):
        build_base_complex(R, anticanonical_weights(sk[1:]), anticanonical_weights(R.swapped().skeleton_points()))
