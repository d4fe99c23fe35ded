"""Debug SVG rendering of a layering.

One horizontal band per layer, nodes in id order inside each band, straight
center-to-center edges with reversed edges bold and dashed.  No crossing
reduction or coordinate optimization happens here; the picture exists to
eyeball solver output, not to be a finished drawing.
"""

from __future__ import annotations

from .graph import Graph
from .layering import Layering, canonicalize, reversed_set

_DX = 90
_DY = 70
_MARGIN = 50
_RADIUS = 14


def render_svg(g: Graph, layers: Layering) -> str:
    """Deterministic standalone SVG 1.1 document for a feasible layering."""
    lay = canonicalize(layers)
    if not lay:
        return ('<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
                'width="100" height="100"></svg>\n')
    height = max(lay.values())
    rows: dict[int, list[int]] = {r: [] for r in range(1, height + 1)}
    for v in sorted(lay):
        rows[lay[v]].append(v)
    slot = {v: i for r in rows.values() for i, v in enumerate(r)}
    max_width = max(len(r) for r in rows.values())
    width_px = 2 * _MARGIN + max(1, max_width - 1) * _DX + 2 * _RADIUS
    height_px = 2 * _MARGIN + max(1, height - 1) * _DY + 2 * _RADIUS

    def x(v: int) -> int:
        return _MARGIN + _RADIUS + slot[v] * _DX

    def y(v: int) -> int:
        return _MARGIN + _RADIUS + (lay[v] - 1) * _DY

    rev = reversed_set(g, lay)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width_px}" height="{height_px}">',
        '<!-- layerforge debug render: layering only, no crossing reduction -->',
    ]
    for r in range(1, height + 1):
        band_y = _MARGIN + _RADIUS + (r - 1) * _DY
        parts.append(f'<line x1="0" y1="{band_y}" x2="{width_px}" y2="{band_y}" '
                     'stroke="#eeeeee" stroke-width="1"/>')
    for u, v in g.edges:
        style = ('stroke="#b02020" stroke-width="3" stroke-dasharray="7,4"'
                 if (u, v) in rev else 'stroke="#404040" stroke-width="1.5"')
        parts.append(f'<line x1="{x(u)}" y1="{y(u)}" x2="{x(v)}" y2="{y(v)}" {style}/>')
    for v in sorted(lay):
        parts.append(f'<circle cx="{x(v)}" cy="{y(v)}" r="{_RADIUS}" '
                     'fill="#ffffff" stroke="#202020" stroke-width="1.5"/>')
        parts.append(f'<text x="{x(v)}" y="{y(v) + 4}" font-size="11" '
                     f'text-anchor="middle" font-family="monospace">{_escape(g.labels[v])}</text>')
    parts.append('</svg>')
    return "\n".join(parts) + "\n"


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
