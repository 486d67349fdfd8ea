"""Deterministic SVG pictures of planar subdivisions and their Gamma graphs.

Lattice point ``(i, j)`` is drawn at picture coordinates

    x = 36 i + 18 j,    y = 30 j,

so the degree-5 triangle is drawn as a near-equilateral triangle.  Coordinates are computed exactly and printed with three
decimals; the output has no timestamps or random identifiers, so identical
inputs give identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InputError
from .subdivision import GammaGraph, RegularSubdivision

STEP = 36
MARGIN = 18


@dataclass(frozen=True)
class SvgStyle:
    skew: bool = True  # False draws the lattice square, 36 units per step on both axes
    dot_radius: Fraction = Fraction(2)
    thin_width: Fraction = Fraction(1)
    thick_width: Fraction = Fraction(3)
    show_subdivision: bool = True
    show_gamma: bool = True


def _number(v: Fraction) -> str:
    """Exact rational rounded half-up to three decimals, without trailing zeros."""
    v = Fraction(v)
    sign = "-" if v < 0 else ""
    scaled = abs(v) * 1000
    k = int(scaled)
    if scaled - k >= Fraction(1, 2):
        k += 1
    whole, frac = divmod(k, 1000)
    if k == 0:
        return "0"
    text = f"{whole}.{frac:03d}".rstrip("0").rstrip(".")
    return sign + text


def picture_coordinates(p: Sequence, style: SvgStyle = SvgStyle()) -> tuple[Fraction, Fraction]:
    i, j = (Fraction(x) for x in p)
    if style.skew:
        return STEP * i + Fraction(STEP, 2) * j, Fraction(5 * STEP, 6) * j
    return STEP * i, STEP * j


def render_svg(sub: RegularSubdivision, g: GammaGraph | None = None, style: SvgStyle = SvgStyle()) -> str:
    """SVG text: lattice points as dots, cells as thin lines, Gamma as thick lines."""
    if sub.polygon.rank != 2:
        raise InputError("only two-dimensional subdivisions can be drawn")
    if g is not None and g.subdivision is not sub and g.subdivision.points != sub.points:
        raise InputError("the graph belongs to a different subdivision")
    pics = [picture_coordinates(p, style) for p in sub.points]
    xs = [x for x, _ in pics]
    ys = [y for _, y in pics]
    x0, x1 = min(xs) - MARGIN, max(xs) + MARGIN
    y0, y1 = min(ys) - MARGIN, max(ys) + MARGIN
    width, height = x1 - x0, y1 - y0

    def place(p) -> tuple[str, str]:
        x, y = picture_coordinates(p, style)
        # SVG's y axis points down
        return _number(x - x0), _number(y1 - y)

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_number(width)}" height="{_number(height)}" '
        f'viewBox="0 0 {_number(width)} {_number(height)}">',
        '<rect x="0" y="0" width="100%" height="100%" fill="white"/>',
    ]
    if style.show_subdivision:
        lines.append(f'<g id="subdivision" stroke="black" stroke-width="{_number(style.thin_width)}" '
                     'stroke-linecap="round">')
        for a, b in sub.edges():
            (xa, ya), (xb, yb) = place(sub.points[a]), place(sub.points[b])
            lines.append(f'<line x1="{xa}" y1="{ya}" x2="{xb}" y2="{yb}"/>')
        lines.append("</g>")
    if g is not None and style.show_gamma:
        lines.append(f'<g id="gamma" stroke="black" stroke-width="{_number(style.thick_width)}" '
                     'stroke-linecap="round" fill="none">')
        for a, b in g.edges:
            (xa, ya), (xb, yb) = place(g.vertices[a].coords), place(g.vertices[b].coords)
            lines.append(f'<polyline points="{xa},{ya} {xb},{yb}"/>')
        lines.append("</g>")
    lines.append('<g id="lattice-points" fill="black">')
    for p in sub.points:
        x, y = place(p)
        lines.append(f'<circle cx="{x}" cy="{y}" r="{_number(style.dot_radius)}"/>')
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
