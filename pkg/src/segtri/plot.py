"""Static CSV and SVG renderings of the surplus triangle.

Coordinates are computed exactly and rounded to two decimals only when
written, so output bytes depend on the input alone.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .market import Instance
from .segmentation import SurplusPoint, triangle
from .synthesis import is_unit_elastic, prop3_point_set

SIZE = 440
MARGIN_LEFT, MARGIN_TOP, SIDE = 60, 20, 360


def _num(q: Fraction) -> str:
    hundredths = round(Fraction(q) * 100)
    sign = "-" if hundredths < 0 else ""
    whole, frac = divmod(abs(hundredths), 100)
    return f"{sign}{whole}.{frac:02d}"


def _marks(instance: Instance) -> list[SurplusPoint]:
    if not is_unit_elastic(instance):
        return []
    pi_star = triangle(instance).pi_star
    return [SurplusPoint(u, pi_star) for u in prop3_point_set(instance)]


def triangle_csv(instance: Instance, points: Iterable[Sequence[Fraction]] = ()) -> str:
    tri = triangle(instance)
    a, b, c = tri.vertices
    rows = ["kind,name,u,pi,u_end,pi_end"]
    for name, v in (("uniform", a), ("consumer-optimal", b), ("full-extraction", c)):
        rows.append(f"vertex,{name},{v.u},{v.pi},,")
    for name, p, q in (("bottom", a, b), ("hypotenuse", b, c), ("left", c, a)):
        rows.append(f"edge,{name},{p.u},{p.pi},{q.u},{q.pi}")
    for k, m in enumerate(_marks(instance)):
        rows.append(f"unit-elastic,k={k + 1},{m.u},{m.pi},,")
    for i, (u, pi) in enumerate(points):
        rows.append(f"point,{i + 1},{Fraction(u)},{Fraction(pi)},,")
    return "\n".join(rows) + "\n"


def triangle_svg(instance: Instance, points: Iterable[Sequence[Fraction]] = ()) -> str:
    tri = triangle(instance)
    width = tri.width

    def xy(u, pi):
        x = MARGIN_LEFT + SIDE * Fraction(u) / width
        y = MARGIN_TOP + SIDE - SIDE * (Fraction(pi) - tri.pi_star) / width
        return _num(x), _num(y)

    a, b, c = tri.vertices
    corners = " ".join(",".join(xy(*v)) for v in (a, b, c))
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE + 40}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE + 40} {SIZE}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<polygon points="{corners}" fill="#dce9f5" stroke="#1f4e79" stroke-width="2"/>',
    ]
    labels = (
        (a, "start", 0, 16),
        (b, "end", 0, 16),
        (c, "start", 6, -6),
    )
    for v, anchor, dx, dy in labels:
        x, y = xy(*v)
        out.append(
            f'<text x="{x}" y="{y}" dx="{dx}" dy="{dy}" font-size="11" font-family="sans-serif" '
            f'text-anchor="{anchor}">({v.u}, {v.pi})</text>'
        )
    for m in _marks(instance):
        x, y = xy(*m)
        out.append(f'<circle cx="{x}" cy="{y}" r="4" fill="none" stroke="#c00000" stroke-width="2"/>')
    for u, pi in points:
        x, y = xy(u, pi)
        out.append(f'<circle cx="{x}" cy="{y}" r="3" fill="#1f4e79"/>')
    bx, by = xy(width / 2, tri.pi_star)
    out.append(
        f'<text x="{bx}" y="{by}" dy="34" font-size="12" font-family="sans-serif" '
        'text-anchor="middle">consumer surplus u</text>'
    )
    _, ly = xy(0, tri.pi_star + width / 2)
    lx = _num(MARGIN_LEFT - 34)
    out.append(
        f'<text x="{lx}" y="{ly}" font-size="12" font-family="sans-serif" text-anchor="middle" '
        f'transform="rotate(-90 {lx} {ly})">producer surplus π</text>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"
