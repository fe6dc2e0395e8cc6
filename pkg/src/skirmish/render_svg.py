"""Static SVG frames for offline episode inspection.

Draws the field, zones, unit bodies with heading ticks and sight wedges,
and a health bar per living unit.  Field coordinates have y up; SVG has
y down, so everything is emitted at y' = height - y.
"""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .core import FieldConfig, UnitState, Zone

SCALE = 16  # pixels per field unit

TEAM_FILL = ("#3b7dd8", "#d84b3b")
ZONE_STYLE = {
    "lava": ("#e2572b", 0.45),
    "bush": ("#3f9e4d", 0.50),
    "swamp": ("#6b7f99", 0.40),
}


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _wedge(cx: float, cy: float, heading: float, half: float, radius: float) -> str:
    if half >= math.pi:  # full circle of vision
        return (
            f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(radius)}" '
            'class="fov"/>'
        )
    # y is already flipped, so math angles enter with negated sine
    x1 = cx + radius * math.cos(heading - half)
    y1 = cy - radius * math.sin(heading - half)
    x2 = cx + radius * math.cos(heading + half)
    y2 = cy - radius * math.sin(heading + half)
    large = 1 if half > math.pi / 2 else 0
    return (
        f'<path class="fov" d="M {_fmt(cx)} {_fmt(cy)} L {_fmt(x1)} {_fmt(y1)} '
        f'A {_fmt(radius)} {_fmt(radius)} 0 {large} 0 {_fmt(x2)} {_fmt(y2)} Z"/>'
    )


def render_frame(
    units: list[UnitState],
    zones: list[Zone],
    field: FieldConfig,
    title: str = "",
) -> str:
    """Render one frame as a standalone SVG document string."""
    w, h = field.width, field.height
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w * SCALE:.0f}" '
        f'height="{h * SCALE:.0f}" viewBox="0 0 {_fmt(w)} {_fmt(h)}">',
        "<style>"
        ".fov{fill:#888;fill-opacity:0.10;stroke:none}"
        ".head{stroke:#111;stroke-width:0.12}"
        f".lbl{{font:0.9px sans-serif;fill:#333}}"
        "</style>",
        f'<rect x="0" y="0" width="{_fmt(w)}" height="{_fmt(h)}" fill="#f4f1e8"/>',
        f'<rect x="{_fmt(field.margin)}" y="{_fmt(field.margin)}" '
        f'width="{_fmt(w - 2 * field.margin)}" height="{_fmt(h - 2 * field.margin)}" '
        'fill="none" stroke="#b5ad98" stroke-width="0.08" stroke-dasharray="0.4 0.3"/>',
    ]

    for z in zones:
        fill, opacity = ZONE_STYLE.get(z.type, ("#999999", 0.3))
        parts.append(
            f'<ellipse cx="{_fmt(z.center[0])}" cy="{_fmt(h - z.center[1])}" '
            f'rx="{_fmt(z.semi_axes[0])}" ry="{_fmt(z.semi_axes[1])}" '
            f'fill="{fill}" fill-opacity="{opacity}"/>'
        )

    for u in units:
        spec = u.spec
        cx, cy = u.position[0], h - u.position[1]
        if u.alive:
            parts.append(
                _wedge(cx, cy, u.heading, spec.sight_angle / 2.0,
                       min(spec.sight_range, max(w, h)))
            )
        fill = TEAM_FILL[u.team % 2] if u.alive else "#9a9a9a"
        parts.append(
            f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(spec.body_radius)}" '
            f'fill="{fill}" fill-opacity="{0.95 if u.alive else 0.4}" '
            'stroke="#222" stroke-width="0.08"/>'
        )
        hx = cx + spec.body_radius * math.cos(u.heading)
        hy = cy - spec.body_radius * math.sin(u.heading)
        parts.append(
            f'<line class="head" x1="{_fmt(cx)}" y1="{_fmt(cy)}" '
            f'x2="{_fmt(hx)}" y2="{_fmt(hy)}"/>'
        )
        if u.alive and spec.max_health > 0:
            frac = max(0.0, min(1.0, u.health / spec.max_health))
            bw = 2.0 * spec.body_radius
            bx = cx - spec.body_radius
            by = cy - spec.body_radius - 0.55
            parts.append(
                f'<rect x="{_fmt(bx)}" y="{_fmt(by)}" width="{_fmt(bw)}" '
                'height="0.3" fill="#ddd" stroke="#555" stroke-width="0.04"/>'
            )
            parts.append(
                f'<rect x="{_fmt(bx)}" y="{_fmt(by)}" width="{_fmt(bw * frac)}" '
                'height="0.3" fill="#47b04b"/>'
            )

    if title:
        parts.append(f'<text class="lbl" x="0.5" y="1.2">{escape(title)}</text>')
    parts.append("</svg>\n")
    return "\n".join(parts)
