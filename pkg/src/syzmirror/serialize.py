"""Canonical JSON text and the readers that invert it.

Every writer emits sorted keys and a trailing newline.  Exact rationals are
written as ``"p/q"`` strings and integers stay integers, so combinatorial
outputs contain no floats.  Floats appear only in numeric outputs, rounded
to 17 significant digits, which round-trips binary64 exactly.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .errors import InputError
from .fan import Fan
from .plfun import WeightFunction
from .polytope import Polytope


def fraction_text(v) -> str:
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def parse_fraction(value) -> Fraction:
    """Accept ``"p/q"``, ``"p"`` or a JSON integer; floats are rejected as inexact."""
    if isinstance(value, bool):
        raise InputError(f"expected a rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad rational {value!r}") from exc
    raise InputError(f"expected a rational as an integer or a 'p/q' string, got {value!r}")


def float17(x: float) -> float:
    return float(f"{float(x):.17g}")


def parse_integer_vector(value, rank: int | None = None) -> tuple[int, ...]:
    if not isinstance(value, (list, tuple)) or not all(isinstance(x, int) and not isinstance(x, bool) for x in value):
        raise InputError(f"expected a list of integers, got {value!r}")
    if rank is not None and len(value) != rank:
        raise InputError(f"expected {rank} coordinates, got {len(value)}")
    return tuple(value)


def parse_rational_vector(value, rank: int | None = None) -> tuple[Fraction, ...]:
    if isinstance(value, str):
        value = [part for part in value.split(",")]
    if not isinstance(value, (list, tuple)):
        raise InputError(f"expected a list of rationals, got {value!r}")
    if rank is not None and len(value) != rank:
        raise InputError(f"expected {rank} coordinates, got {len(value)}")
    return tuple(parse_fraction(x) for x in value)


def rational_vector_json(v: Sequence) -> list[str]:
    return [fraction_text(x) for x in v]


def dumps(data: Any) -> str:
    return json.dumps(data, sort_keys=True, ensure_ascii=True) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc


def load_file(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    return loads(text)


def sha256_file(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


# -- polytopes ---------------------------------------------------------------


def polytope_json(P: Polytope) -> dict:
    """``{"rank": r, "vertices": [...]}``; non-integral coordinates become ``"p/q"`` strings."""
    return {
        "rank": P.rank,
        "vertices": [[x if isinstance(x, int) else fraction_text(x) for x in v] for v in P.vertices],
    }


def read_polytope(data: Any) -> Polytope:
    if not isinstance(data, dict) or "vertices" not in data:
        raise InputError("polytope JSON needs a 'vertices' list")
    vertices = data["vertices"]
    if not isinstance(vertices, list) or not vertices:
        raise InputError("polytope JSON has no vertices")
    rank = data.get("rank", len(vertices[0]) if isinstance(vertices[0], list) else None)
    if not isinstance(rank, int) or rank <= 0:
        raise InputError(f"bad rank {rank!r}")
    points = [parse_rational_vector(v, rank) for v in vertices]
    return Polytope.from_points(points)


def points_json(points: Sequence[Sequence[int]]) -> dict:
    return {"points": [list(p) for p in points]}


def read_points(data: Any) -> list[tuple[int, ...]]:
    if not isinstance(data, dict) or not isinstance(data.get("points"), list):
        raise InputError("expected a 'points' list")
    pts = [parse_integer_vector(p) for p in data["points"]]
    if len({len(p) for p in pts}) > 1:
        raise InputError("points have inconsistent ranks")
    return pts


# -- weights and fans ----------------------------------------------------------


def weights_json(w: WeightFunction) -> dict:
    return w.to_json()


def read_weights(data: Any) -> WeightFunction:
    """Weights JSON ``{"points": [...], "values": ["p/q", ...]}``.

    The values are those of the support-function convention; a file may use
    ``"w"`` instead of ``"values"`` to give string-diagram weights directly.
    """
    if not isinstance(data, dict) or not isinstance(data.get("points"), list):
        raise InputError("weights JSON needs a 'points' list")
    points = [parse_integer_vector(p) for p in data["points"]]
    if "values" in data and "w" in data:
        raise InputError("weights JSON must give either 'values' or 'w', not both")
    if "values" in data:
        raw, negate = data["values"], False
    elif "w" in data:
        raw, negate = data["w"], True
    else:
        raise InputError("weights JSON needs a 'values' or 'w' list")
    if not isinstance(raw, list) or len(raw) != len(points):
        raise InputError("weights JSON has a different number of points and values")
    values = [parse_fraction(x) for x in raw]
    if negate:
        return WeightFunction.from_w(points, values)
    return WeightFunction.make(points, values)


def fan_json(F: Fan) -> dict:
    return F.to_json()


def read_fan(data: Any) -> Fan:
    if not isinstance(data, dict) or not {"rank", "rays", "cones"} <= set(data):
        raise InputError("fan JSON needs 'rank', 'rays' and 'cones'")
    rank = data["rank"]
    rays = tuple(parse_integer_vector(r, rank) for r in data["rays"])
    cones = tuple(parse_integer_vector(c) for c in data["cones"])
    for c in cones:
        if any(not 0 <= i < len(rays) for i in c):
            raise InputError(f"cone {list(c)} refers to a missing ray")
    return Fan(rank, rays, cones)


# -- matrices ------------------------------------------------------------------


def read_matrix(data: Any) -> tuple[tuple[int, ...], ...]:
    if isinstance(data, dict):
        data = data.get("matrix")
    if not isinstance(data, list) or not data:
        raise InputError("expected a non-empty integer matrix")
    rows = tuple(parse_integer_vector(r) for r in data)
    if len({len(r) for r in rows}) != 1 or len(rows[0]) != len(rows):
        raise InputError("expected a square integer matrix")
    return rows


# -- graphs and samples ----------------------------------------------------------


def read_gamma(data: Any) -> dict:
    """Gamma graph JSON as plain values: vertex tuples ``(coords, kind, boundary, valence)``, edges and regions."""
    if not isinstance(data, dict) or not {"vertices", "edges", "regions"} <= set(data):
        raise InputError("graph JSON needs 'vertices', 'edges' and 'regions'")
    vertices = []
    for v in data["vertices"]:
        try:
            vertices.append((parse_rational_vector(v["coords"], 2), v["kind"], bool(v["boundary"]), int(v["valence"])))
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad graph vertex {v!r}") from exc
    edges = [parse_integer_vector(e) for e in data["edges"]]
    if any(len(e) != 2 or not all(0 <= i < len(vertices) for i in e) for e in edges):
        raise InputError("graph edges must be pairs of vertex indices")
    return {"vertices": vertices, "edges": edges, "regions": [parse_integer_vector(r) for r in data["regions"]]}


def read_sample(data: Any) -> dict:
    """Amoeba sample JSON: float points, the weights used, the seed and the skipped-slice count."""
    if not isinstance(data, dict) or not {"points", "seed", "weights"} <= set(data):
        raise InputError("sample JSON needs 'points', 'seed' and 'weights'")
    try:
        points = [tuple(float(c) for c in p) for p in data["points"]]
    except (TypeError, ValueError) as exc:
        raise InputError("sample points must be lists of numbers") from exc
    return {"points": points, "seed": int(data["seed"]), "skipped": int(data.get("skipped", 0)),
            "weights": read_weights(data["weights"])}
