import json
import re
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from conftest import CORPUS_VERTICES
from syzmirror.errors import InputError
from syzmirror.fan import max_crepant_subdivision, normal_fan
from syzmirror.moment import amoeba_sample, coefficients_from_weights
from syzmirror.plfun import WeightFunction
from syzmirror.polytope import DEGREE5_TRIANGLE, UNIT_TRIANGLE, Polytope, ReflexivePolytope, dual_polytope
from syzmirror.serialize import (
    dumps, fraction_text, loads, parse_fraction, polytope_json, read_fan, read_gamma, read_matrix, read_points,
    read_polytope, read_sample, read_weights, weights_json,
)
from syzmirror.subdivision import alternative_weights, gamma_graph, regular_subdivision, standard_weights, wall_weights
from syzmirror.svg import SvgStyle, picture_coordinates, render_svg

GOLDEN = Path(__file__).parent / "golden"
TRIANGLE = Polytope.from_points(DEGREE5_TRIANGLE)
POINTS = TRIANGLE.lattice_points()


def _picture(weights, polygon=TRIANGLE):
    sub = regular_subdivision(polygon, weights(polygon.lattice_points()))
    return sub, gamma_graph(sub)


# -- JSON round trips ------------------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(CORPUS_VERTICES))
def test_polytope_round_trip(name):
    P = Polytope.from_points(CORPUS_VERTICES[name])
    assert read_polytope(loads(dumps(polytope_json(P)))) == P
    D = dual_polytope(P)
    assert read_polytope(loads(dumps(polytope_json(D)))) == D


def test_rational_vertices_are_strings():
    P = Polytope.from_points([(0, 0), (Fraction(1, 2), 0), (0, 1)])
    data = polytope_json(P)
    assert ["1/2", 0] in data["vertices"]
    assert read_polytope(data) == P


def test_weights_round_trip():
    w = alternative_weights(POINTS).scaled(Fraction(3, 7))
    back = read_weights(loads(dumps(weights_json(w))))
    assert back.points == w.points and back.values == w.values
    # the string-diagram convention w = -p is accepted too
    direct = read_weights({"points": [[0, 0], [1, 0]], "w": ["1/2", 3]})
    assert direct.w == (Fraction(1, 2), 3)


def test_fan_round_trip():
    R = ReflexivePolytope.from_vertices(CORPUS_VERTICES["quartic"])
    F = max_crepant_subdivision(normal_fan(R), R)
    assert read_fan(loads(dumps(F.to_json()))) == F


def test_gamma_round_trip():
    _, g = _picture(wall_weights)
    data = read_gamma(loads(dumps(g.to_json())))
    assert [v[0] for v in data["vertices"]] == [v.coords for v in g.vertices]
    assert [v[3] for v in data["vertices"]] == [v.valence for v in g.vertices]
    assert [tuple(e) for e in data["edges"]] == [tuple(e) for e in g.edges]


def test_sample_round_trip():
    sub, _ = _picture(standard_weights)
    sample = amoeba_sample(sub, coefficients_from_weights(POINTS, sub.weights, seed=2), 50, seed=4)
    data = read_sample(loads(dumps(sample.to_json())))
    assert np.array_equal(np.array(data["points"]), sample.points)
    assert data["seed"] == 4 and data["weights"].values == sub.weights.values


def test_matrix_and_points_readers():
    assert read_matrix({"matrix": [[1, 1], [0, 1]]}) == ((1, 1), (0, 1))
    assert read_points({"points": [[1, 2], [3, 4]]}) == [(1, 2), (3, 4)]


def test_canonical_text():
    text = dumps({"b": 1, "a": [Fraction(1, 2).numerator]})
    assert text == '{"a": [1], "b": 1}\n'
    assert fraction_text(Fraction(-6, 4)) == "-3/2"
    assert parse_fraction("-3/2") == Fraction(-3, 2) and parse_fraction(4) == 4


@pytest.mark.parametrize("bad", [
    lambda: loads("{"),
    lambda: parse_fraction(0.5),
    lambda: parse_fraction(True),
    lambda: parse_fraction("1/0"),
    lambda: read_polytope({"vertices": []}),
    lambda: read_polytope({"vertices": [[0, 0], [1]]}),
    lambda: read_weights({"points": [[0, 0]], "values": ["1", "2"]}),
    lambda: read_weights({"points": [[0, 0]], "values": ["1"], "w": ["1"]}),
    lambda: read_fan({"rank": 2, "rays": [[1, 0]], "cones": [[0, 1]]}),
    lambda: read_matrix([[1, 0]]),
    lambda: read_points({"points": [[1, 2], [3]]}),
    lambda: read_gamma({"vertices": [], "edges": [[0, 1]], "regions": []}),
    lambda: read_sample({"points": [["x"]], "seed": 1, "weights": {"points": [], "values": []}}),
])
def test_readers_reject_bad_input(bad):
    with pytest.raises(InputError):
        bad()


# -- SVG ------------------------------------------------------------------------------------------


def test_picture_coordinates():
    assert picture_coordinates((1, 0)) == (36, 0)
    assert picture_coordinates((0, 1)) == (18, 30)
    assert picture_coordinates((Fraction(1, 3), Fraction(1, 3))) == (18, 10)
    assert picture_coordinates((1, 1), SvgStyle(skew=False)) == (36, 36)


def test_unit_triangle_has_three_dots_and_one_spider():
    P = Polytope.from_points(UNIT_TRIANGLE)
    sub = regular_subdivision(P, WeightFunction.constant(P.lattice_points(), 0))
    svg = render_svg(sub, gamma_graph(sub))
    assert svg.count("<circle") == 3
    assert svg.count("<polyline") == 3
    assert svg.count("<line") == 3
    # the three legs meet at the barycenter, drawn at (18 + 18, 18 + 30 - 10)
    assert len(re.findall(r'points="36,38 ', svg)) == 3


def test_standard_picture_counts():
    sub, g = _picture(standard_weights)
    svg = render_svg(sub, g)
    assert svg.count("<circle") == 21
    assert svg.count("<line") == len(sub.edges()) == 45
    assert svg.count("<polyline") == 75


@pytest.mark.parametrize("name, weights, gamma", [
    ("standard", standard_weights, False),
    ("standard_gamma", standard_weights, True),
    ("alternative_gamma", alternative_weights, True),
    ("wall_gamma", wall_weights, True),
])
def test_golden_pictures(name, weights, gamma):
    sub, g = _picture(weights)
    svg = render_svg(sub, g, SvgStyle(show_gamma=gamma))
    assert svg == (GOLDEN / f"{name}.svg").read_text()


def test_golden_unit_triangle():
    P = Polytope.from_points(UNIT_TRIANGLE)
    sub, g = _picture(standard_weights, P)
    assert render_svg(sub, g) == (GOLDEN / "unit_triangle_gamma.svg").read_text()


def test_wall_picture_has_a_four_valent_vertex():
    sub, g = _picture(wall_weights)
    svg = render_svg(sub, g)
    ends = re.findall(r'<polyline points="([\d.]+,[\d.]+) ([\d.]+,[\d.]+)"', svg)
    degree = {}
    for a, b in ends:
        degree[a] = degree.get(a, 0) + 1
        degree[b] = degree.get(b, 0) + 1
    assert sorted(degree.values()).count(4) == 1
    assert svg.count("<line") == 44


def test_svg_is_deterministic():
    sub, g = _picture(alternative_weights)
    assert render_svg(sub, g) == render_svg(*_picture(alternative_weights))


def test_svg_rejects_other_ranks_and_graphs():
    sub, _ = _picture(standard_weights)
    _, other = _picture(standard_weights, Polytope.from_points(UNIT_TRIANGLE))
    with pytest.raises(InputError):
        render_svg(sub, other)


def test_svg_is_well_formed_xml():
    import xml.etree.ElementTree as ET
    sub, g = _picture(wall_weights)
    root = ET.fromstring(render_svg(sub, g))
    assert root.tag.endswith("svg")
    assert json.loads(json.dumps(root.attrib))["width"] == "216"
