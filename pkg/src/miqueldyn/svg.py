"""Deterministic SVG rendering of circle patterns.

Output is byte-stable: elements are emitted in sorted id order with a
fixed coordinate format, so rendering the same pattern twice gives the
same file.  Math coordinates map to SVG with the y axis flipped.
"""

from typing import Iterable, List, Tuple

from .circle_pattern import CirclePattern, _omega
from .errors import UsageError
from .geometry import is_infinite

DEFAULT_LAYERS = ("circles", "centers", "edges")
KNOWN_LAYERS = ("circles", "centers", "edges", "dual")


def _fmt(x: float) -> str:
    return "%.6f" % (x + 0.0)


def _pt(z: complex) -> Tuple[str, str]:
    return _fmt(z.real), _fmt(-z.imag)


def _edge_segment(p: CirclePattern, eid: int):
    e = p.graph.edges[eid]
    zm = p.vertex_points[e.minus]
    zp = p.vertex_points[e.plus]
    if is_infinite(zm) or is_infinite(zp):
        return None
    zp = zp + _omega(p.periods, e.offset)
    return complex(zm), complex(zp)


def pattern_to_svg(p: CirclePattern, layers: Iterable[str] = DEFAULT_LAYERS) -> str:
    layers = tuple(layers)
    for name in layers:
        if name not in KNOWN_LAYERS:
            raise UsageError("unknown svg layer %r (choose from %s)"
                             % (name, ", ".join(KNOWN_LAYERS)))

    face_ids = sorted(p.graph.faces)
    edge_ids = sorted(p.graph.edges)

    # bounding box over everything that could be drawn
    xs: List[float] = []
    ys: List[float] = []

    def bump(z: complex) -> None:
        xs.append(z.real)
        ys.append(z.imag)

    for f in face_ids:
        z = p.center_points.get(f)
        if z is not None and not is_infinite(z):
            bump(complex(z))
    for eid in edge_ids:
        seg = _edge_segment(p, eid)
        if seg is not None:
            bump(seg[0])
            bump(seg[1])
    circles = {}
    if "circles" in layers:
        for f in face_ids:
            circ = p.face_circle(f)
            circles[f] = circ
            if circ.is_line():
                bump(circ.p)
                bump(circ.q)
            else:
                c = complex(circ.center)
                bump(c - circ.radius - 1j * circ.radius)
                bump(c + circ.radius + 1j * circ.radius)
    if not xs:
        xs, ys = [0.0], [0.0]

    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    diag = max(x1 - x0, y1 - y0, 1.0)
    margin = 0.08 * diag
    stroke = 0.01 * diag
    dot = 0.02 * diag

    view = (x0 - margin, -(y1 + margin), (x1 - x0) + 2 * margin,
            (y1 - y0) + 2 * margin)
    out: List[str] = []
    out.append('<svg xmlns="http://www.w3.org/2000/svg" viewBox="%s %s %s %s">'
               % tuple(_fmt(v) for v in view))
    out.append('<defs><marker id="arrow" orient="auto" markerWidth="6" '
               'markerHeight="6" refX="5" refY="3">'
               '<path d="M0,0 L6,3 L0,6 z" fill="#444"/></marker></defs>')

    if "circles" in layers:
        for f in face_ids:
            circ = circles[f]
            if circ.is_line():
                # extend the anchor segment well past the window
                d = circ.q - circ.p
                d /= abs(d)
                mid = (circ.p + circ.q) / 2
                a, b = mid - 2 * diag * d, mid + 2 * diag * d
                (ax, ay), (bx, by) = _pt(a), _pt(b)
                out.append('<line class="face-line" x1="%s" y1="%s" x2="%s" '
                           'y2="%s" stroke="#1f77b4" stroke-width="%s"/>'
                           % (ax, ay, bx, by, _fmt(stroke)))
            else:
                cx, cy = _pt(complex(circ.center))
                out.append('<circle class="face-circle" cx="%s" cy="%s" r="%s" '
                           'fill="none" stroke="#1f77b4" stroke-width="%s"/>'
                           % (cx, cy, _fmt(circ.radius), _fmt(stroke)))

    if "edges" in layers:
        for eid in edge_ids:
            seg = _edge_segment(p, eid)
            if seg is None:
                continue
            (ax, ay), (bx, by) = _pt(seg[0]), _pt(seg[1])
            out.append('<line class="edge" x1="%s" y1="%s" x2="%s" y2="%s" '
                       'stroke="#222" stroke-width="%s"/>'
                       % (ax, ay, bx, by, _fmt(stroke)))

    if "dual" in layers:
        for eid in edge_ids:
            seg = _edge_segment(p, eid)
            if seg is None:
                continue
            zm, zp = seg
            chord = zp - zm
            # dual edge crosses the primal one left to right
            d = -1j * chord
            d /= abs(d)
            mid = (zm + zp) / 2
            half = 0.3 * abs(chord)
            a, b = mid - half * d, mid + half * d
            (ax, ay), (bx, by) = _pt(a), _pt(b)
            out.append('<line class="dual" x1="%s" y1="%s" x2="%s" y2="%s" '
                       'stroke="#d62728" stroke-width="%s" '
                       'marker-end="url(#arrow)"/>'
                       % (ax, ay, bx, by, _fmt(stroke)))

    if "centers" in layers:
        for f in face_ids:
            z = p.center_points.get(f)
            if z is None or is_infinite(z):
                continue
            cx, cy = _pt(complex(z))
            out.append('<circle class="center" cx="%s" cy="%s" r="%s" '
                       'fill="#d62728"/>' % (cx, cy, _fmt(dot)))

    out.append("</svg>")
    return "\n".join(out) + "\n"
