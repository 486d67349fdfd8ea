"""Shared fixtures: the bundled polytopes and the quintic base complexes, built once per session."""

from __future__ import annotations

import pytest

from syzmirror.base import anticanonical_weights, build_base_complex, quintic_quadratic_weights
from syzmirror.locus import build_locus, build_mirror_locus
from syzmirror.polytope import (
    CUBIC_DUAL_VERTICES, CUBIC_VERTICES, QUARTIC_VERTICES, QUINTIC_VERTICES, SQUARE_VERTICES, ReflexivePolytope,
)


# -- corpus --------------------------------------------------------------------


CORPUS_VERTICES = {
    "cubic": CUBIC_VERTICES,
    "cubic-dual": CUBIC_DUAL_VERTICES,
    "square": SQUARE_VERTICES,
    "quartic": QUARTIC_VERTICES,
    "quintic": QUINTIC_VERTICES,
}


@pytest.fixture(scope="session")
def quintic():
    return ReflexivePolytope.from_vertices(QUINTIC_VERTICES)


@pytest.fixture(scope="session")
def quartic():
    return ReflexivePolytope.from_vertices(QUARTIC_VERTICES)


@pytest.fixture(scope="session")
def cubic():
    return ReflexivePolytope.from_vertices(CUBIC_VERTICES)


@pytest.fixture(scope="session")
def quintic_weights(quintic):
    w = quintic_quadratic_weights(quintic.skeleton_points())
    v = anticanonical_weights(quintic.swapped().skeleton_points())
    return w, v


@pytest.fixture(scope="session")
def quintic_pair(quintic, quintic_weights):
    w, v = quintic_weights
    return build_base_complex(quintic, w, v)


@pytest.fixture(scope="session")
def quintic_locus(quintic, quintic_weights, quintic_pair):
    w, v = quintic_weights
    return build_locus(quintic, w, v, quintic_pair)


@pytest.fixture(scope="session")
def quintic_mirror_locus(quintic_locus, quintic_weights):
    w, v = quintic_weights
    return build_mirror_locus(quintic_locus, w, v)
