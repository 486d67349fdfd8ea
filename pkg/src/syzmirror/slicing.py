"""Reduce a section of the anticanonical bundle to the slice spanned by the skeleton points.

A section is ``s = psi s_0 + sum a_m s_m`` over the lattice points of
``Delta``.  For ``m`` off the codimension-two skeleton (and not the origin)
there is a unique facet normal ``e`` with ``<m, e> = -1``, and the vector
field ``v_m`` acts by

    L s_0 = s_m,    L s_{m1} = (<m1, e> + 1) s_{m + m1}.

One reduction step applies ``exp(-sum (a_m / psi) L_m)`` over the off-slice
points, which removes the off-slice coefficients to first order.  Iterating
drives them to zero while the slice coefficients and ``psi`` adjust.

Coefficients are complex binary64; the structure constants are integers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InputError, InvariantError, PreconditionError
from .lattice import dot
from .polytope import ReflexivePolytope

GUARD = 0.5
SERIES_TOLERANCE = 1e-18
SERIES_MAX_TERMS = 400


class ConvergenceError(PreconditionError):
    """The iteration did not reach the tolerance; ``trace`` holds the residuals."""

    def __init__(self, message: str, trace: Sequence[float]):
        super().__init__(message)
        self.trace = list(trace)


@dataclass(frozen=True)
class LieAction:
    """The integer matrix of ``L_{v_m}`` on the coefficient space (rows: targets, columns: sources)."""

    m: tuple[int, ...]
    sigma_ray: tuple[int, ...]
    entries: dict[tuple[int, int], int]
    size: int
    nilpotency_order: int

    def dense(self) -> np.ndarray:
        out = np.zeros((self.size, self.size))
        for (i, j), v in self.entries.items():
            out[i, j] = v
        return out


@dataclass
class SectionVector:
    """Complex coefficients indexed by the lattice points of ``Delta``."""

    points: tuple[tuple[int, ...], ...]
    values: np.ndarray

    @classmethod
    def from_mapping(cls, points: Sequence[tuple[int, ...]], coeffs: dict) -> "SectionVector":
        index = {p: i for i, p in enumerate(points)}
        values = np.zeros(len(points), dtype=complex)
        for p, c in coeffs.items():
            p = tuple(int(x) for x in p)
            if p not in index:
                raise InputError(f"{p} is not a lattice point of the polytope")
            values[index[p]] = complex(c)
        return cls(tuple(points), values)

    @property
    def psi(self) -> complex:
        return complex(self.values[self.points.index(tuple([0] * len(self.points[0])))])

    def coefficient(self, p) -> complex:
        return complex(self.values[self.points.index(tuple(p))])

    def to_json(self) -> dict:
        return {"coeffs": [{"point": list(p), "re": _float(v.real), "im": _float(v.imag)}
                           for p, v in zip(self.points, self.values)]}


def _float(x: float) -> float:
    return float(f"{x:.17g}")


def read_section(R: ReflexivePolytope, data: dict) -> SectionVector:
    if "coeffs" not in data:
        raise InputError("section JSON needs a 'coeffs' list")
    coeffs = {}
    for entry in data["coeffs"]:
        try:
            coeffs[tuple(entry["point"])] = complex(float(entry.get("re", 0.0)), float(entry.get("im", 0.0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad coefficient entry {entry!r}") from exc
    return SectionVector.from_mapping(R.base.lattice_points(), coeffs)


@dataclass
class SlicingSystem:
    """The coefficient space of ``Delta`` with its slice and Lie actions precomputed."""

    R: ReflexivePolytope
    points: tuple[tuple[int, ...], ...] = field(init=False)
    slice_points: frozenset = field(init=False)
    off_slice: tuple[tuple[int, ...], ...] = field(init=False)
    actions: dict = field(init=False)

    def __post_init__(self):
        P = self.R.base
        self.points = tuple(P.lattice_points())
        skeleton = set(self.R.skeleton_points())
        origin = tuple([0] * P.rank)
        self.slice_points = frozenset(skeleton | {origin})
        self.off_slice = tuple(p for p in self.points if p not in self.slice_points)
        self.actions = {m: lie_action_matrix(self.R, m) for m in self.off_slice}
        self._dense = {m: a.dense() for m, a in self.actions.items()}
        self._off_index = np.array([self.points.index(m) for m in self.off_slice], dtype=int)
        self._origin = self.points.index(origin)

    def residual(self, s: SectionVector) -> float:
        if not len(self._off_index):
            return 0.0
        return float(np.max(np.abs(s.values[self._off_index])))

    def exponent(self, s: SectionVector) -> np.ndarray:
        """``X = -sum (a_m / psi) L_m`` over the off-slice points, in lexicographic order of ``m``."""
        psi = s.values[self._origin]
        if psi == 0:
            raise PreconditionError("the origin coefficient psi is zero")
        X = np.zeros((len(self.points), len(self.points)), dtype=complex)
        for m, k in zip(self.off_slice, self._off_index):
            a = s.values[k]
            if a != 0:
                X -= (a / psi) * self._dense[m]
        return X

    def slice_step(self, s: SectionVector) -> tuple[SectionVector, np.ndarray]:
        X = self.exponent(s)
        return SectionVector(s.points, apply_exponential(X, s.values)), X

    def slice_reduce(self, s: SectionVector, tol: float = 1e-12, max_iter: int = 30,
                     guard: float = GUARD) -> tuple[SectionVector, list[np.ndarray], list[float]]:
        psi = s.values[self._origin]
        if psi == 0:
            raise PreconditionError("the origin coefficient psi is zero")
        start = self.residual(s)
        if start / abs(psi) >= guard:
            raise PreconditionError(
                f"max off-slice |a_m / psi| = {start / abs(psi):.3g} is not below the guard {guard}")
        trace = [start]
        record: list[np.ndarray] = []
        current = s
        while trace[-1] >= tol:
            if len(record) >= max_iter:
                raise ConvergenceError(f"no convergence to {tol} within {max_iter} iterations", trace)
            current, X = self.slice_step(current)
            record.append(X)
            trace.append(self.residual(current))
            if not np.isfinite(trace[-1]):
                raise ConvergenceError("the iteration diverged", trace)
        return current, record, trace

    def replay(self, s: SectionVector, record: Sequence[np.ndarray]) -> SectionVector:
        values = s.values
        for X in record:
            values = apply_exponential(X, values)
        return SectionVector(s.points, values)


def apply_exponential(X: np.ndarray, v: np.ndarray) -> np.ndarray:
    """``exp(X) v`` by the Taylor series, summed term by term in a fixed order."""
    total = np.array(v, dtype=complex)
    term = total.copy()
    scale = max(float(np.max(np.abs(total))), 1e-300)
    for k in range(1, SERIES_MAX_TERMS):
        term = X @ term / k
        total = total + term
        if float(np.max(np.abs(term))) <= SERIES_TOLERANCE * scale:
            return total
    raise InvariantError("exponential series did not converge")


def lie_action_matrix(R: ReflexivePolytope, m) -> LieAction:
    """The action of ``v_m`` on sections, checked to be nilpotent."""
    m = tuple(int(x) for x in m)
    P = R.base
    if len(m) != P.rank:
        raise InputError("point has the wrong rank")
    if not any(m):
        raise PreconditionError("the origin has no associated vector field")
    if not P.contains(m):
        raise PreconditionError(f"{m} is not in the polytope")
    rays = [tuple(int(x) for x in e) for e in R.dual.vertices]
    supporting = [e for e in rays if dot(m, e) == -1]
    if len(supporting) != 1:
        raise PreconditionError(f"{m} does not lie in the interior of a single facet")
    e = supporting[0]
    points = P.lattice_points()
    index = {p: i for i, p in enumerate(points)}
    entries = {}
    for j, m1 in enumerate(points):
        factor = dot(m1, e) + 1
        if factor == 0:
            continue
        target = tuple(a + b for a, b in zip(m, m1))
        if target not in index:
            raise InvariantError(f"{m} + {m1} leaves the polytope with a nonzero coefficient")
        entries[(index[target], j)] = factor
    bound = max(dot(p, e) for p in points) + 2
    order = _nilpotency_order(entries, bound)
    if order is None:
        raise InvariantError(f"the action of {m} is not nilpotent within {bound} steps")
    return LieAction(m, e, entries, len(points), order)


def _nilpotency_order(entries: dict[tuple[int, int], int], bound: int) -> int | None:
    power = dict(entries)
    for k in range(1, bound + 1):
        if not power:
            return k
        nxt: dict[tuple[int, int], int] = {}
        for (i, j), v in power.items():
            for (a, b), u in entries.items():
                if b == i:
                    nxt[(a, j)] = nxt.get((a, j), 0) + u * v
        power = {k2: v for k2, v in nxt.items() if v}
    return None if power else bound + 1


def section_json_text(s: SectionVector) -> str:
    return json.dumps(s.to_json(), sort_keys=True)
