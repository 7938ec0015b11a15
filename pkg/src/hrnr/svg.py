"""Deterministic SVG figures of nested rank-k ranges.

The output is plain text assembled by hand: every coordinate goes through one
formatter with nine significant digits, so identical inputs give identical
bytes.
"""

from dataclasses import dataclass

import numpy

from .errors import InputError
from .ranges import MIN_GRID

__all__ = ['PlotSpec', 'render_svg', 'SIZE', 'POINT_RADIUS']

SIZE = 480
MARGIN = 24
POINT_RADIUS = 4
CORNER_RADIUS = 2.5
MARKER_HALF = 3.5


def _f(x):
    return '{:.9g}'.format(float(x))


@dataclass(frozen=True)
class PlotSpec:
    """What to draw: ranks, grid size and overlay switches."""

    ranks: tuple
    grid: int = 1024
    curve: bool = False
    corners: bool = True
    vsets: bool = False
    output: str = None

    def __post_init__(self):
        ranks = tuple(int(k) for k in self.ranks)
        if not ranks or min(ranks) < 1:
            raise InputError(f'ranks must be positive integers, got {self.ranks!r}')
        if self.grid < MIN_GRID:
            raise InputError(f'grid size must be at least {MIN_GRID}, got {self.grid}')
        object.__setattr__(self, 'ranks', ranks)

    def check_size(self, n):
        if max(self.ranks) > n:
            raise InputError(f'rank {max(self.ranks)} exceeds the matrix size {n}')


def _gray(i, m):
    # outermost light, innermost dark
    level = 0.9 if m <= 1 else 0.9 - 0.6 * i / (m - 1)
    v = int(round(255 * level))
    return f'#{v:02x}{v:02x}{v:02x}'


class _Frame:
    def __init__(self, pts):
        pts = numpy.concatenate([numpy.asarray(pts, dtype=complex), [0j]])
        lo = complex(pts.real.min(), pts.imag.min())
        hi = complex(pts.real.max(), pts.imag.max())
        span = max(hi.real - lo.real, hi.imag - lo.imag)
        if span <= 0:
            span = 2.0
        pad = 0.05 * span
        self.scale = (SIZE - 2 * MARGIN) / (span + 2 * pad)
        mid = 0.5 * (lo + hi)
        self.mid = mid

    def __call__(self, z):
        x = SIZE / 2 + (z.real - self.mid.real) * self.scale
        y = SIZE / 2 - (z.imag - self.mid.imag) * self.scale
        return _f(x), _f(y)


def render_svg(regions, curve=None, spec=None, markers=None):
    """SVG document for ``regions``, an optional boundary curve and point markers.

    Parameters
    ----------
    regions : list of (int, ConvexRegion)
        Drawn in increasing ``k``; full regions become filled polygons (darker
        for larger ``k``), segments lines and points circles of fixed pixel
        radius.  Empty regions are skipped.
    curve : sequence of CurveSample or complex, optional
        Drawn as a closed polyline.
    spec : PlotSpec, optional
        Its ``corners`` flag controls the corner markers.
    markers : sequence of complex, optional
        Extra points (for instance V-set points), drawn as small squares.

    Returns
    -------
    str
    """
    regions = sorted(regions, key=lambda kr: kr[0])
    curve_pts = [] if curve is None else [complex(getattr(c, 'point', c)) for c in curve]
    markers = [] if markers is None else [complex(z) for z in markers]
    if not regions and not curve_pts:
        raise InputError('nothing to draw: need at least one region or a curve')
    show_corners = True if spec is None else spec.corners

    allpts = [z for _, R in regions for z in R.vertices] + curve_pts + markers
    fr = _Frame(allpts)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
           f'viewBox="0 0 {SIZE} {SIZE}">',
           '<rect x="0" y="0" width="100%" height="100%" fill="#ffffff"/>']
    ox, oy = fr(0j)
    out.append(f'<g id="axes" stroke="#999999" stroke-width="1">'
               f'<line x1="0" y1="{oy}" x2="{SIZE}" y2="{oy}"/>'
               f'<line x1="{ox}" y1="0" x2="{ox}" y2="{SIZE}"/></g>')

    m = len(regions)
    for i, (k, R) in enumerate(regions):
        color = _gray(i, m)
        v = R.vertices
        if R.classification == 'full':
            pts = ' '.join(','.join(fr(z)) for z in v)
            out.append(f'<polygon id="rank-{k}" points="{pts}" fill="{color}" '
                       f'stroke="#000000" stroke-width="1"/>')
        elif R.classification == 'segment':
            (x1, y1), (x2, y2) = fr(v[0]), fr(v[1])
            out.append(f'<line id="rank-{k}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" '
                       f'stroke="{color}" stroke-width="3"/>')
        elif R.classification == 'point':
            x, y = fr(v[0])
            out.append(f'<circle id="rank-{k}" cx="{x}" cy="{y}" r="{POINT_RADIUS}" '
                       f'fill="{color}" stroke="#000000" stroke-width="1"/>')

    if curve_pts:
        coords = []
        for z in curve_pts + curve_pts[:1]:
            c = ','.join(fr(z))
            if not coords or c != coords[-1]:
                coords.append(c)
        pts = ' '.join(coords)
        out.append(f'<polyline id="curve" points="{pts}" fill="none" '
                   f'stroke="#1f4e9c" stroke-width="1"/>')

    if show_corners:
        dots = []
        for k, R in regions:
            if R.classification == 'point':
                continue
            for z in R.corners:
                x, y = fr(z)
                dots.append(f'<circle cx="{x}" cy="{y}" r="{CORNER_RADIUS}"/>')
        if dots:
            out.append('<g id="corners" fill="#c0392b">' + ''.join(dots) + '</g>')

    if markers:
        h = MARKER_HALF
        boxes = []
        for z in markers:
            x, y = fr(z)
            boxes.append(f'<rect x="{_f(float(x) - h)}" y="{_f(float(y) - h)}" '
                         f'width="{_f(2 * h)}" height="{_f(2 * h)}"/>')
        out.append('<g id="markers" fill="none" stroke="#000000" stroke-width="1">'
                   + ''.join(boxes) + '</g>')
    out.append('</svg>')
    return '\n'.join(out) + '\n'
