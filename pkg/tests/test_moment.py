import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from syzmirror.errors import InputError, PreconditionError
from syzmirror.moment import (
    AmoebaSample, TorusPoint, amoeba_sample, coefficients_from_weights, distance_to_graph, fattening_distance,
    moment_eval, moment_eval_many, moment_weights, rho_argmax,
)
from syzmirror.plfun import WeightFunction
from syzmirror.polytope import DEGREE5_TRIANGLE, UNIT_TRIANGLE, Polytope
from syzmirror.subdivision import gamma_graph, quadratic_polygon_weights, regular_subdivision, standard_weights

TRIANGLE = Polytope.from_points(DEGREE5_TRIANGLE)
POINTS = TRIANGLE.lattice_points()


def _standard(t):
    w = standard_weights(POINTS).scaled(t)
    sub = regular_subdivision(TRIANGLE, w)
    return sub, gamma_graph(sub), w


def _trinomial_width(n=600):
    """Oracle: the largest distance from Gamma to the moment image of a line in a unit triangle.

    On a line ``a + b x + c y = 0`` the moduli ``r`` of the three terms obey the
    triangle inequality and ``rho = r^2 / |r|^2``.  The spider joins the
    barycenter to the three edge midpoints.
    """
    i, j = np.meshgrid(np.arange(n + 1), np.arange(n + 1), indexing="ij")
    keep = i + j <= n
    r = np.stack([i[keep], j[keep], n - i[keep] - j[keep]], axis=1) / n
    r = r[r.max(axis=1) <= 0.5]
    rho = r ** 2 / np.sum(r ** 2, axis=1, keepdims=True)
    F = rho @ np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    b = np.array([1 / 3, 1 / 3])
    best = np.full(len(F), np.inf)
    for mid in ((0.5, 0.0), (0.0, 0.5), (0.5, 0.5)):
        d = np.array(mid) - b
        t = np.clip((F - b) @ d / (d @ d), 0.0, 1.0)
        best = np.minimum(best, np.linalg.norm(F - b - t[:, None] * d, axis=1))
    return float(best.max())


# -- the moment map ------------------------------------------------------------------------


def test_single_point_is_fixed():
    w = WeightFunction.from_w([(2, 3)], [7])
    for u in ((0.0, 0.0), (5.0, -3.0)):
        assert np.array_equal(moment_eval([(2, 3)], w, TorusPoint(u, (0.1, 0.2))), np.array([2.0, 3.0]))


def test_symmetric_triangle_maps_the_origin_to_the_barycenter():
    pts = [(1, 0), (0, 1), (-1, -1)]
    F = moment_eval(pts, WeightFunction.from_w(pts, [2, 2, 2]), TorusPoint((0.0, 0.0), (0.0, 0.0)))
    assert np.allclose(F, [0.0, 0.0], atol=1e-15)


def test_weights_match_a_direct_softmax():
    rng = np.random.default_rng(0)
    w = standard_weights(POINTS)
    u = rng.normal(size=(50, 2)) * 3
    F, rho = moment_eval_many(POINTS, w, u)
    pts = np.array(POINTS, dtype=float)
    ws = np.array([float(x) for x in w.w])
    for k in range(len(u)):
        # oracle: the unstabilized formula in extended precision
        terms = [math.exp(2 * (float(np.dot(p, u[k])) - x)) for p, x in zip(pts, ws)]
        total = math.fsum(terms)
        assert np.allclose(rho[k], np.array(terms) / total, rtol=1e-12, atol=1e-15)


def test_convex_combination_containment():
    rng = np.random.default_rng(1)
    w = standard_weights(POINTS).scaled(3)
    u = rng.uniform(-60, 60, size=(10_000, 2))
    F, rho = moment_eval_many(POINTS, w, u)
    assert np.all(rho >= 0)
    assert np.max(np.abs(rho.sum(axis=1) - 1)) <= 1e-12
    for h in TRIANGLE.halfspaces:
        slack = F @ np.array(h.normal, dtype=float) - float(h.offset)
        assert np.all(slack >= -1e-9)


@settings(max_examples=60, deadline=None)
@given(st.tuples(st.floats(-40, 40), st.floats(-40, 40)), st.tuples(st.floats(-10, 10), st.floats(-10, 10)))
def test_angles_do_not_matter(u, theta):
    w = quadratic_polygon_weights(POINTS)
    a = moment_eval(POINTS, w, TorusPoint(u, theta))
    b = moment_eval(POINTS, w, TorusPoint(u, (0.0, 0.0)))
    assert np.max(np.abs(a - b)) <= 1e-12


@pytest.mark.parametrize("weights", [standard_weights, quadratic_polygon_weights])
def test_rho_argmax_lands_on_its_point(weights):
    w = weights(POINTS)
    for m in POINTS:
        _, F = rho_argmax(POINTS, w, m)
        assert np.linalg.norm(F - np.array(m)) <= 1e-3


def test_rho_argmax_is_a_maximum():
    w = standard_weights(POINTS)
    u, F = rho_argmax(POINTS, w, (1, 1))
    k = POINTS.index((1, 1))
    pts, ws = np.array(POINTS, dtype=float), np.array([float(x) for x in w.w])
    best = moment_weights(pts, ws, u[None, :])[0][k]
    rng = np.random.default_rng(2)
    nearby = u + rng.normal(scale=0.3, size=(200, 2))
    assert np.all(moment_weights(pts, ws, nearby)[:, k] <= best + 1e-15)


def test_moment_errors():
    w = WeightFunction.from_w([(0, 0), (1, 0)], [0, 0])
    with pytest.raises(InputError):
        moment_eval([], w, TorusPoint((0.0,), (0.0,)))
    with pytest.raises(InputError):
        moment_eval([(0, 0), (1, 0)], w, TorusPoint((0.0,), (0.0,)))
    with pytest.raises(InputError):
        moment_eval([(0, 0), (2, 0)], w, TorusPoint((0.0, 0.0), (0.0, 0.0)))
    with pytest.raises(InputError):
        TorusPoint((0.0, float("nan")), (0.0, 0.0))
    with pytest.raises(InputError):
        TorusPoint((0.0,), (0.0, 0.0))
    with pytest.raises(PreconditionError):
        moment_eval([(0, 0), (1, 0)], w, TorusPoint((1e308, 0.0), (0.0, 0.0)))


# -- amoebas --------------------------------------------------------------------------------------


def test_line_amoeba_has_three_tentacles():
    P = Polytope.from_points(UNIT_TRIANGLE)
    pts = P.lattice_points()
    sub = regular_subdivision(P, WeightFunction.constant(pts, 0))
    g = gamma_graph(sub)
    sample = amoeba_sample(sub, coefficients_from_weights(pts, sub.weights, seed=4), 2000, seed=1)
    F = sample.points
    assert len(F) == 2000
    assert np.all(F >= -1e-9) and np.all(F.sum(axis=1) <= 1 + 1e-9)
    # each tentacle runs out to the midpoint of one edge
    for mid in ((0.5, 0.0), (0.0, 0.5), (0.5, 0.5)):
        assert np.min(np.linalg.norm(F - np.array(mid), axis=1)) < 0.02
    top, hist = fattening_distance(sample, g)
    assert top < math.sqrt(2)
    assert sum(hist) == 2000


def test_amoeba_samples_stay_in_the_polygon():
    sub, _, w = _standard(2)
    sample = amoeba_sample(sub, coefficients_from_weights(POINTS, w, seed=5), 5000, seed=3)
    for h in TRIANGLE.halfspaces:
        slack = sample.points @ np.array(h.normal, dtype=float) - float(h.offset)
        assert np.all(slack >= -1e-9)


def test_amoeba_is_deterministic_per_seed():
    sub, _, w = _standard(1)
    c = coefficients_from_weights(POINTS, w, seed=6)
    a = amoeba_sample(sub, c, 500, seed=9)
    b = amoeba_sample(sub, c, 500, seed=9)
    assert np.array_equal(a.points, b.points)
    assert not np.array_equal(a.points, amoeba_sample(sub, c, 500, seed=10).points)


def test_line_samples_obey_the_triangle_inequality():
    """On a line a + b x + c y = 0 the moduli of the three terms bound each other."""
    P = Polytope.from_points(UNIT_TRIANGLE)
    pts = P.lattice_points()
    w = WeightFunction.from_w(pts, [0, 1, 2])
    sub = regular_subdivision(P, w)
    sample = amoeba_sample(sub, coefficients_from_weights(pts, w, seed=1), 300, seed=2)
    for F in sample.points:
        # the unit triangle has F = (rho_(1,0), rho_(0,1)) and rho_m = r_m^2 / |r|^2
        rho = np.array([1 - F[0] - F[1], F[0], F[1]])
        r = np.sqrt(np.clip(rho, 0, None))
        assert r.max() <= r.sum() - r.max() + 1e-7


def test_phases_do_not_change_the_distance_statistics():
    sub, g, w = _standard(4)
    stats = []
    for phase_seed in (None, 1, 2, 3):
        sample = amoeba_sample(sub, coefficients_from_weights(POINTS, w, seed=phase_seed), 5000, seed=11)
        d = distance_to_graph(sample.points, g)
        stats.append((d.max(), np.quantile(d, 0.99)))
    for k in range(2):
        values = [s[k] for s in stats]
        assert max(values) <= 1.1 * min(values)


def test_fattening_shrinks_from_t1_to_t4():
    results = []
    for t in (1, 4):
        sub, g, w = _standard(t)
        results.append(fattening_distance(amoeba_sample(sub, coefficients_from_weights(POINTS, w), 5000, seed=7), g)[0])
    assert results[1] < results[0]


@pytest.mark.parametrize("phase_seed", [0, 5, 13])
def test_fattening_strictly_shrinks_for_generic_phases(phase_seed):
    """With random phases the width falls through t = 1, 2, 4 towards the trinomial width from above."""
    widths = []
    for t in (1, 2, 4):
        sub, g, w = _standard(t)
        sample = amoeba_sample(sub, coefficients_from_weights(POINTS, w, seed=phase_seed), 5000, seed=1)
        widths.append(fattening_distance(sample, g)[0])
    assert widths[0] > widths[1] > widths[2] > _trinomial_width(200) - 0.01


def test_fattening_width_tends_to_the_trinomial_width():
    """For large t the cloud near each trivalent vertex is the amoeba of a line, whose width is positive."""
    limit = _trinomial_width()
    assert abs(limit - 0.2552) < 1e-3
    sub, g, w = _standard(8)
    top, _ = fattening_distance(amoeba_sample(sub, coefficients_from_weights(POINTS, w), 5000, seed=7), g)
    assert limit - 0.02 <= top <= limit + 0.005


def test_graph_vertices_have_zero_distance():
    _, g, _ = _standard(1)
    verts = np.array([[float(c) for c in v.coords] for v in g.vertices])
    top, _ = fattening_distance(verts, g)
    assert top <= 1e-12


def test_amoeba_errors():
    sub, g, w = _standard(1)
    c = coefficients_from_weights(POINTS, w)
    with pytest.raises(InputError):
        amoeba_sample(sub, c, 0, seed=1)
    missing = dict(c)
    del missing[POINTS[0]]
    with pytest.raises(InputError):
        amoeba_sample(sub, missing, 10, seed=1)
    zero = dict(c)
    zero[POINTS[0]] = 0
    with pytest.raises(PreconditionError):
        amoeba_sample(sub, zero, 10, seed=1)
    wrong = dict(c)
    wrong[POINTS[0]] *= 3
    with pytest.raises(PreconditionError):
        amoeba_sample(sub, wrong, 10, seed=1)
    with pytest.raises(InputError):
        fattening_distance(np.zeros((0, 2)), g)


def test_sample_json_uses_plain_floats():
    sub, _, w = _standard(1)
    sample = amoeba_sample(sub, coefficients_from_weights(POINTS, w), 20, seed=1)
    data = sample.to_json()
    assert isinstance(sample, AmoebaSample)
    assert len(data["points"]) == 20 and data["seed"] == 1
    assert all(type(c) is float for p in data["points"] for c in p)
