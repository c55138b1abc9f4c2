"""DOT and SVG drawings of traced dessins."""

from __future__ import annotations

WIDTH, HEIGHT = 1024, 768
RADIUS = 340
COLORS = {"p": "#1f4e9c", "q": "#c0392b", "r": "#2e8b57", "node": "#555555"}
_JUMP = 0.5


def _disk(z):
    """``z -> z / (1 + |z|)``: the sphere squeezed into the unit disk, oo on
    the boundary circle."""
    if z is None:
        return complex(1, 0)
    z = complex(z)
    return z / (1 + abs(z))


def _screen(w):
    return WIDTH / 2 + RADIUS * w.real, HEIGHT / 2 - RADIUS * w.imag


def _fmt(x):
    return f"{x:.2f}"


def _polylines(points, upper_half):
    """Screen polylines for a sampled path, split where the path jumps
    through oo and clipped to the closed upper half plane on request."""
    lines, cur = [], []
    prev = None
    for z in points:
        if z is None:
            continue
        w = _disk(z)
        visible = not upper_half or w.imag >= -1e-12
        if not visible or (prev is not None and abs(w - prev) > _JUMP):
            if len(cur) > 1:
                lines.append(cur)
            cur = []
        if visible:
            cur.append(_screen(w))
        prev = w
    if len(cur) > 1:
        lines.append(cur)
    return lines


def emit_dot(d):
    out = ["graph dessin {"]
    for i, v in enumerate(d.vertices):
        pos = "inf" if v.at_infinity else f"{v.position.real:.12g},{v.position.imag:.12g}"
        out.append(f'  v{i} [label="{v.label}", valency={v.valency}, pos="{pos}"];')
    for e in d.edges:
        style = ', style="dashed"' if e.partial else ""
        kind = "real" if e.is_real else "complex"
        out.append(f'  v{e.start} -- v{e.end} [orient="v{e.start}->v{e.end}", kind="{kind}"{style}];')
    if d.partial:
        out.append('  partial [shape=note, label="partial trace"];')
    out.append("}")
    return "\n".join(out) + "\n"


def emit_svg(d, upper_half=False):
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<circle cx="{WIDTH // 2}" cy="{HEIGHT // 2}" r="{RADIUS}" fill="none" stroke="#dddddd"/>',
    ]
    x0, y0 = _screen(complex(-1, 0))
    x1, y1 = _screen(complex(1, 0))
    out.append(f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x1)}" y2="{_fmt(y1)}" stroke="#999999"/>')

    def path(line, dashed):
        pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in line)
        dash = ' stroke-dasharray="6,4"' if dashed else ""
        return f'<polyline points="{pts}" fill="none" stroke="black" stroke-width="1.5"{dash}/>'

    for e in d.edges:
        for line in _polylines(e.points, upper_half):
            out.append(path(line, e.partial))
    for pts in d.partial_paths:
        for line in _polylines(pts, upper_half):
            out.append(path(line, True))
    for v in d.vertices:
        w = _disk(None if v.at_infinity else v.position)
        if upper_half and w.imag < -1e-12:
            continue
        x, y = _screen(w)
        color = COLORS[v.label]
        out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="6" fill="{color}" stroke="black"/>')
        text = v.label if v.label != "node" else ""
        if text:
            out.append(f'<text x="{_fmt(x + 8)}" y="{_fmt(y - 8)}" font-size="14" fill="{color}">{text}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_dessin(d, fmt="svg", upper_half=False):
    """Serialized drawing; identical input gives identical output."""
    if fmt == "dot":
        return emit_dot(d)
    if fmt == "svg":
        return emit_svg(d, upper_half)
    raise ValueError(f"unknown format {fmt!r}")
