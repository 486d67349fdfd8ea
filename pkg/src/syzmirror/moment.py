"""Floating-point moment map, the argmax property of its weights, and amoeba sampling.

For lattice points ``m`` with weights ``w_m`` and a torus point with log radii
``u`` the moment map is

    F(u) = sum rho_m(u) m,    rho_m(u) proportional to exp(2 (<m, u> - w_m)),

a convex combination of the points.  It ignores the angles of the torus
point.  The gradient of ``log rho_m`` is ``2 (m - F(u))``, so ``rho_m`` is
largest exactly where ``F(u) = m`` (at infinity for boundary points).

The curve ``sum a_m x^m = 0`` with ``|a_m| = exp(-w_m)`` is sampled by fixing
the first coordinate at random and solving for the second; its image under
``F`` fattens the graph Gamma of the weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .errors import InputError, PreconditionError
from .plfun import WeightFunction
from .subdivision import GammaGraph, RegularSubdivision

NORMALIZATION_TOLERANCE = 1e-12


@dataclass(frozen=True)
class TorusPoint:
    log_radii: tuple[float, ...]
    angles: tuple[float, ...]

    def __post_init__(self):
        if len(self.log_radii) != len(self.angles):
            raise InputError("log radii and angles have different lengths")
        if not all(np.isfinite(self.log_radii)) or not all(np.isfinite(self.angles)):
            raise InputError("torus point has non-finite coordinates")


def moment_weights(points: np.ndarray, w: np.ndarray, u: np.ndarray) -> np.ndarray:
    """``rho_m`` for every row of ``u`` (shape ``(k, r)``), stabilized by log-sum-exp."""
    with np.errstate(over="ignore", invalid="ignore"):
        logits = 2.0 * (u @ points.T - w[None, :])
        top = np.max(logits, axis=1, keepdims=True)
    if not np.all(np.isfinite(top)):
        raise PreconditionError("all moment-map terms underflow")
    e = np.exp(logits - top)
    return e / np.sum(e, axis=1, keepdims=True)


def _arrays(points, w: WeightFunction):
    pts = np.array([list(p) for p in points], dtype=float)
    wd = dict(zip(w.points, w.w))
    try:
        ws = np.array([float(wd[tuple(p)]) for p in points])
    except KeyError as exc:
        raise InputError(f"no weight at {exc.args[0]}") from exc
    if not np.all(np.isfinite(ws)):
        raise InputError("weights must be finite")
    return pts, ws


def moment_eval(points: Sequence[Sequence[int]], w: WeightFunction, x: TorusPoint) -> np.ndarray:
    """``F(x) = sum rho_m m``; only the radii of ``x`` enter."""
    if not points:
        raise InputError("at least one lattice point is needed")
    pts, ws = _arrays(points, w)
    if len(x.log_radii) != pts.shape[1]:
        raise InputError("torus point has the wrong rank")
    rho = moment_weights(pts, ws, np.array([x.log_radii], dtype=float))[0]
    if abs(rho.sum() - 1.0) > NORMALIZATION_TOLERANCE:
        raise PreconditionError("moment weights are not normalized")
    return rho @ pts


def moment_eval_many(points, w: WeightFunction, log_radii: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized evaluation: returns ``(F, rho)`` for each row of ``log_radii``."""
    pts, ws = _arrays(points, w)
    rho = moment_weights(pts, ws, np.asarray(log_radii, dtype=float))
    return rho @ pts, rho


def rho_argmax(points, w: WeightFunction, m, start=None, gtol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Maximize ``rho_m``; returns the log radii found and ``F`` there.

    The objective ``-log rho_m`` is convex with gradient ``2 (F - m)``, so the
    stopping rule on the gradient bounds ``|F - m|`` directly.
    """
    pts, ws = _arrays(points, w)
    target = np.array(list(m), dtype=float)
    k = [tuple(p) for p in points].index(tuple(m))

    def objective(u):
        rho = moment_weights(pts, ws, u[None, :])[0]
        F = rho @ pts
        return -np.log(max(rho[k], 1e-300)), 2.0 * (F - target)

    u0 = np.zeros(pts.shape[1]) if start is None else np.asarray(start, dtype=float)
    result = minimize(objective, u0, jac=True, method="L-BFGS-B",
                      options={"gtol": gtol, "ftol": 0.0, "maxiter": 10000})
    F = moment_weights(pts, ws, result.x[None, :])[0] @ pts
    return result.x, F


@dataclass
class AmoebaSample:
    points: np.ndarray  # images F(x) for sampled points x of the curve
    weights_used: WeightFunction
    seed: int
    skipped: int

    def to_json(self) -> dict:
        return {
            "points": [[float(f"{c:.17g}") for c in p] for p in self.points],
            "seed": self.seed,
            "skipped": self.skipped,
            "weights": self.weights_used.to_json(),
        }


def coefficients_from_weights(points, w: WeightFunction, seed: int | None = None) -> dict:
    """``a_m = exp(-w_m)`` times a phase; phases are random when ``seed`` is given."""
    _, ws = _arrays(points, w)
    shift = ws.min()
    phases = np.ones(len(ws), dtype=complex)
    if seed is not None:
        phases = np.exp(2j * np.pi * np.random.default_rng(seed).random(len(ws)))
    # a common factor does not change the curve; it keeps the values representable
    return {tuple(p): complex(np.exp(-(wm - shift)) * ph) for p, wm, ph in zip(points, ws, phases)}


def tropical_extent(sub_: RegularSubdivision) -> float:
    """Largest coordinate of a tropical vertex: the slopes of ``w`` on the cells."""
    pts = np.array(sub_.points, dtype=float)
    wd = dict(zip(sub_.weights.points, sub_.weights.w))
    extent = 0.0
    for cell in sub_.cells:
        a, b, c = (pts[i] for i in cell[:3])
        wa, wb, wc = (float(wd[sub_.points[i]]) for i in cell[:3])
        M = np.array([b - a, c - a])
        slope = np.linalg.solve(M, np.array([wb - wa, wc - wa]))
        extent = max(extent, float(np.max(np.abs(slope))))
    return extent


def amoeba_sample(sub_: RegularSubdivision, coefficients: dict, count: int, seed: int,
                  extent: float | None = None, max_slices: int | None = None) -> AmoebaSample:
    """Sample the curve ``sum a_m x^m = 0`` and map the samples through the moment map.

    The first coordinate is ``exp(u + i theta)`` with ``u`` uniform on
    ``[-L, L]`` and ``theta`` uniform; the roots in the second coordinate come
    from the companion matrix.  ``L`` defaults to one and a half times the
    tropical extent plus five.
    """
    if count <= 0:
        raise InputError("count must be positive")
    points = [tuple(p) for p in sub_.points]
    w = sub_.weights
    for p in points:
        if p not in coefficients:
            raise InputError(f"no coefficient at {p}")
        a = coefficients[p]
        if a == 0:
            raise PreconditionError(f"coefficient at {p} is zero")
    pts, ws = _arrays(points, w)
    logs = np.array([np.log(abs(coefficients[p])) for p in points])
    if np.max(np.abs((logs - logs.max()) + (ws - ws.min()))) > 1e-9:
        raise PreconditionError("coefficient moduli must be exp(-w) up to a common factor")
    L = 1.5 * tropical_extent(sub_) + 5.0 if extent is None else float(extent)
    rng = np.random.default_rng(seed)
    deg2 = int(max(p[1] for p in points))
    by_power: dict[int, list[tuple[int, complex]]] = {}
    for p in points:
        by_power.setdefault(p[1], []).append((p[0], coefficients[p]))
    out: list[np.ndarray] = []
    total = 0
    skipped = 0
    slices = 0
    limit = max_slices if max_slices is not None else 100 * count
    while total < count:
        if slices >= limit:
            raise PreconditionError(f"only {total} samples after {slices} slices")
        slices += 1
        u1 = rng.uniform(-L, L)
        theta = rng.uniform(0.0, 2 * np.pi)
        # coefficients of the polynomial in x2, highest power first; scaled to avoid overflow
        logx1 = u1
        poly = np.zeros(deg2 + 1, dtype=complex)
        scale = max(np.log(abs(c)) + i * logx1 for j, terms in by_power.items() for i, c in terms)
        for j, terms in by_power.items():
            poly[deg2 - j] = sum(c * np.exp(i * (logx1 + 1j * theta) - scale) for i, c in terms)
        nz = np.nonzero(np.abs(poly) > 1e-14 * np.max(np.abs(poly)))[0]
        if len(nz) == 0 or nz[0] == len(poly) - 1:
            skipped += 1
            continue
        trimmed = poly[nz[0]:]
        roots = np.roots(trimmed)
        roots = roots[np.abs(roots) > 0]
        if len(roots) == 0:
            skipped += 1
            continue
        u = np.column_stack([np.full(len(roots), u1), np.log(np.abs(roots))])
        F, _ = moment_eval_many(points, w, u)
        out.append(F)
        total += len(F)
    sample = np.concatenate(out)[:count]
    return AmoebaSample(sample, w, seed, skipped)


def fattening_distance(sample: AmoebaSample | np.ndarray, g: GammaGraph, bins: int = 10) -> tuple[float, list[int]]:
    """Largest Euclidean distance from a sample point to the segments of Gamma, with a histogram."""
    pts = sample.points if isinstance(sample, AmoebaSample) else np.asarray(sample, dtype=float)
    if len(pts) == 0:
        raise InputError("empty sample")
    d = distance_to_graph(pts, g)
    top = float(d.max())
    hist, _ = np.histogram(d, bins=bins, range=(0.0, top if top > 0 else 1.0))
    return top, [int(h) for h in hist]


def distance_to_graph(pts: np.ndarray, g: GammaGraph) -> np.ndarray:
    segs = g.segments()
    A = np.array([[float(c) for c in a] for a, _ in segs])
    B = np.array([[float(c) for c in b] for _, b in segs])
    D = B - A
    L2 = np.sum(D * D, axis=1)
    rel = pts[:, None, :] - A[None, :, :]
    t = np.clip(np.sum(rel * D[None, :, :], axis=2) / L2[None, :], 0.0, 1.0)
    closest = A[None, :, :] + t[:, :, None] * D[None, :, :]
    return np.min(np.linalg.norm(pts[:, None, :] - closest, axis=2), axis=1)
