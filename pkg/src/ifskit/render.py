"""Deterministic SVG export of covers and exact attractor points.

Output is byte-stable for fixed inputs: elements are emitted in
lexicographic word order, all coordinates come from exact rationals printed
as terminating decimals whenever the denominator allows (and a fixed
12-place rounding otherwise), and no timestamps or library version strings
appear anywhere. One-dimensional systems draw on a strip of height one
tenth of the hull width.
"""

from __future__ import annotations

from fractions import Fraction

from .exact import Box, Q0
from .ifs import IFS

_PLACES = 12


def _dec(q: Fraction) -> str:
    """Exact decimal when terminating, else fixed 12-place rounding."""
    sign = "-" if q < 0 else ""
    q = abs(q)
    d = q.denominator
    while d % 2 == 0:
        d //= 2
    while d % 5 == 0:
        d //= 5
    if d == 1:
        k = 0
        scaled = q
        while scaled.denominator != 1:
            scaled *= 10
            k += 1
        digits = scaled.numerator
    else:
        k = _PLACES
        digits = (q.numerator * 10**k * 2 + q.denominator) // (2 * q.denominator)
    whole, frac = divmod(digits, 10**k) if k else (digits, 0)
    if frac:
        tail = str(frac).rjust(k, "0").rstrip("0")
        return f"{sign}{whole}.{tail}"
    return f"{sign}{whole}"


def _planar(box: Box, strip: Fraction):
    """Corners of a 1D or 2D box as planar (x, y, w, h)."""
    if box.dim == 2:
        x, y = box.lower.coords
        w = box.upper.coords[0] - x
        h = box.upper.coords[1] - y
        return x, y, w, h
    x = box.lower.coords[0]
    return x, Q0, box.upper.coords[0] - x, strip


def export_figure(ifs: IFS, depth: int, style: str = "boxes") -> str:
    """SVG document showing the depth-n cover boxes or exact points of K.

    The y axis is flipped manually (SVG grows downward) so every emitted
    coordinate stays an exact rational of the scene.
    """
    if ifs.dim not in (1, 2):
        raise ValueError("figure export draws 1D and planar systems only")
    if style not in ("boxes", "points"):
        raise ValueError(f"unknown style {style!r}")
    box = ifs.invariant_box()
    strip = (box.upper.coords[0] - box.lower.coords[0]) / 10
    ox, oy, ow, oh = _planar(box, strip)
    pad = max(ow, oh) / 20
    stroke = max(ow, oh) / 300

    def rect(x, y, w, h, extra="") -> str:
        return (
            f'<rect x="{_dec(x)}" y="{_dec(-(y + h))}" width="{_dec(w)}" '
            f'height="{_dec(h)}" fill="none" stroke="black" '
            f'stroke-width="{_dec(stroke)}"{extra}/>'
        )

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        (
            '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'viewBox="{_dec(ox - pad)} {_dec(-(oy + oh + pad))} '
            f'{_dec(ow + 2 * pad)} {_dec(oh + 2 * pad)}" '
            'width="640" height="640">'
        ),
        rect(ox, oy, ow, oh, extra=f' stroke-dasharray="{_dec(4 * stroke)}"'),
    ]
    if style == "boxes":
        for _, b in ifs.cover(depth):
            lines.append(rect(*_planar(b, strip)))
    else:
        radius = max(ow, oh) / 400
        mid = strip / 2
        for _, p in ifs.attractor_points(depth):
            cy = p.coords[1] if ifs.dim == 2 else mid
            lines.append(
                f'<circle cx="{_dec(p.coords[0])}" cy="{_dec(-cy)}" '
                f'r="{_dec(radius)}" fill="black"/>'
            )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
