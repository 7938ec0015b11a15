"""Planar convex geometry: half-planes, Chebyshev centers, polygon intersection.

Half-planes are ``{x + iy : x cos(theta) + y sin(theta) <= d}``.  Points are
handled as complex numbers at the public surface.
"""

import math
from collections import deque
from dataclasses import dataclass

import numpy

from .errors import InputError, UnboundedLPError

__all__ = ['HalfPlane', 'chebyshev_center', 'solve_lp', 'intersect_halfplanes',
           'max_angular_gap', 'convex_hull', 'point_polygon_distance',
           'hausdorff_convex', 'golden_order']

_GOLDEN = 0.6180339887498949
PARALLEL_TOL = 1e-9


@dataclass(frozen=True)
class HalfPlane:
    theta: float
    d: float

    def contains(self, z, tol=0.0):
        return z.real * numpy.cos(self.theta) + z.imag * numpy.sin(self.theta) <= self.d + tol


def golden_order(m):
    """Deterministic low-discrepancy permutation of ``range(m)``."""
    return numpy.argsort((numpy.arange(m) * _GOLDEN) % 1.0, kind='stable')


def max_angular_gap(thetas):
    t = numpy.sort(numpy.mod(numpy.asarray(thetas, dtype=float), 2 * numpy.pi))
    if len(t) == 0:
        return 2 * numpy.pi
    gaps = numpy.diff(numpy.concatenate([t, [t[0] + 2 * numpy.pi]]))
    return float(numpy.max(gaps))


def _normalize_rows(A, b):
    norms = numpy.linalg.norm(A, axis=1)
    keep = norms > 1e-14
    return A[keep] / norms[keep, None], b[keep] / norms[keep]


def _lp_1d(c, a, b, M):
    lo, hi = -M, M
    pos, neg = a > 0, a < 0
    if numpy.any(pos):
        hi = min(hi, float(numpy.min(b[pos] / a[pos])))
    if numpy.any(neg):
        lo = max(lo, float(numpy.max(b[neg] / a[neg])))
    if lo > hi or c == 0.0:
        # lo > hi only through rounding: the caller guarantees feasibility
        return numpy.array([0.5 * (lo + hi)])
    return numpy.array([hi if c > 0 else lo])


def _seidel(c, A, b, M, tol):
    # maximize c.x over {A x <= b} intersected with the box |x_i| <= M
    d = len(c)
    if d == 1:
        return _lp_1d(c[0], A[:, 0], b, M)
    x = numpy.where(c >= 0, M, -M).astype(float)
    m = len(b)
    i = 0
    while i < m:
        viol = A[i:] @ x - b[i:] > tol
        if not numpy.any(viol):
            break
        i += int(numpy.argmax(viol))
        a, bi = A[i], b[i]
        e = int(numpy.argmax(numpy.abs(a)))
        rest = [j for j in range(d) if j != e]
        # x_e = (bi - a_rest . x_rest) / a_e
        ar = a[rest] / a[e]
        be = bi / a[e]
        G = A[:i]
        sub_A = G[:, rest] - numpy.outer(G[:, e], ar)
        sub_b = b[:i] - G[:, e] * be
        box_A = numpy.stack([-ar, ar])
        box_b = numpy.array([M - be, M + be])
        sub_A, sub_b = _normalize_rows(numpy.vstack([box_A, sub_A]),
                                       numpy.concatenate([box_b, sub_b]))
        sub_c = c[rest] - c[e] * ar
        y = _seidel(sub_c, sub_A, sub_b, M, tol)
        x = numpy.empty(d)
        x[rest] = y
        x[e] = be - ar @ y
        i += 1
    return x


def solve_lp(c, A, b, bound=None, tol=None, order=None):
    """Maximize ``c . x`` subject to ``A x <= b`` in a few dimensions.

    Seidel-style incremental algorithm: constraints are added one at a time
    in a fixed deterministic order and, when the current optimum violates
    a new constraint, the problem is re-solved on that constraint's
    hyperplane one dimension lower.  A bounding box ``|x_i| <= bound`` keeps
    every intermediate problem bounded.
    """
    c = numpy.asarray(c, dtype=float)
    A = numpy.asarray(A, dtype=float)
    b = numpy.asarray(b, dtype=float)
    if order is None:
        order = golden_order(len(b))
    A, b = A[order], b[order]
    scale = 1.0 + (float(numpy.max(numpy.abs(b))) if len(b) else 0.0)
    if bound is None:
        bound = 1e4 * scale
    if tol is None:
        tol = 1e-12 * scale
    A, b = _normalize_rows(A, b)
    return _seidel(c, A, b, float(bound), float(tol))


def chebyshev_center(planes):
    """Deepest point of a half-plane intersection.

    Solves ``max r`` subject to ``x cos(t_j) + y sin(t_j) + r <= d_j``.  A
    negative radius means the intersection is empty: ``-r`` is the smallest
    uniform outward shift making it non-empty.

    Parameters
    ----------
    planes : sequence of HalfPlane, or a pair of arrays ``(thetas, d)``

    Returns
    -------
    center : complex
    radius : float

    Raises
    ------
    UnboundedLPError
        Fewer than three planes, or an angular gap of at least pi.
    """
    thetas, d = _as_arrays(planes)
    if len(thetas) < 3 or max_angular_gap(thetas) >= numpy.pi - 1e-12:
        raise UnboundedLPError('half-planes do not enclose a bounded region '
                               '(need an angular gap below pi)')
    A = numpy.column_stack([numpy.cos(thetas), numpy.sin(thetas), numpy.ones_like(thetas)])
    x = solve_lp(numpy.array([0.0, 0.0, 1.0]), A, d)
    # recompute r from the center so row normalization cannot bias it
    r = float(numpy.min(d - A[:, 0] * x[0] - A[:, 1] * x[1]))
    return complex(x[0], x[1]), r


def _as_arrays(planes):
    if isinstance(planes, tuple) and len(planes) == 2 and not isinstance(planes[0], HalfPlane):
        thetas, d = planes
        return numpy.asarray(thetas, dtype=float), numpy.asarray(d, dtype=float)
    planes = list(planes)
    return (numpy.array([h.theta for h in planes], dtype=float),
            numpy.array([h.d for h in planes], dtype=float))


def _line_cross(c1, s1, d1, c2, s2, d2):
    det = c1 * s2 - s1 * c2
    return (d1 * s2 - d2 * s1) / det, (c1 * d2 - c2 * d1) / det


def intersect_halfplanes(thetas, d, eps=None):
    """Intersection polygon of half-planes by the sorted-angle deque method.

    Returns ``(vertices, active)``: ``vertices`` is a counter-clockwise
    complex array and ``active`` the angles of the bounding half-planes, with
    ``vertices[i]`` on the boundary lines of ``active[i]`` and
    ``active[i + 1]``.  Near-parallel planes (angle difference below 1e-9)
    are merged keeping the tighter one.  An empty result is returned as two
    empty arrays.
    """
    thetas = numpy.mod(numpy.asarray(thetas, dtype=float), 2 * numpy.pi)
    d = numpy.asarray(d, dtype=float)
    if eps is None:
        eps = 1e-12 * (1.0 + float(numpy.max(numpy.abs(d))))
    order = numpy.lexsort((d, thetas))
    ts, ds = [], []
    for j in order:
        t, v = float(thetas[j]), float(d[j])
        if ts and t - ts[-1] < PARALLEL_TOL:
            if v < ds[-1]:
                ds[-1] = v
            continue
        ts.append(t)
        ds.append(v)
    if len(ts) > 1 and ts[0] + 2 * numpy.pi - ts[-1] < PARALLEL_TOL:
        if ds[-1] < ds[0]:
            ts[0], ds[0] = ts[-1] - 2 * numpy.pi, ds[-1]
        ts.pop()
        ds.pop()
    if len(ts) < 3 or max_angular_gap(ts) >= numpy.pi:
        raise UnboundedLPError('half-plane intersection is unbounded')

    cs = [math.cos(t) for t in ts]
    sn = [math.sin(t) for t in ts]

    def cross(i, j):
        return _line_cross(cs[i], sn[i], ds[i], cs[j], sn[j], ds[j])

    def out(k, p):
        return p[0] * cs[k] + p[1] * sn[k] > ds[k] + eps

    dq = deque()
    for k in range(len(ts)):
        while len(dq) >= 2 and out(k, cross(dq[-1], dq[-2])):
            dq.pop()
        while len(dq) >= 2 and out(k, cross(dq[0], dq[1])):
            dq.popleft()
        if dq and math.sin(ts[k] - ts[dq[-1]]) <= 0.0:
            # turn of at least pi between consecutive survivors: empty
            return numpy.array([], dtype=complex), numpy.array([])
        dq.append(k)
    while len(dq) >= 3 and out(dq[0], cross(dq[-1], dq[-2])):
        dq.pop()
    while len(dq) >= 3 and out(dq[-1], cross(dq[0], dq[1])):
        dq.popleft()
    if len(dq) < 3:
        return numpy.array([], dtype=complex), numpy.array([])
    idx = list(dq)
    m = len(idx)
    verts = numpy.array([complex(*cross(idx[i], idx[(i + 1) % m])) for i in range(m)])
    return verts, numpy.array([ts[i] for i in idx])


def convex_hull(points):
    """Counter-clockwise convex hull (Andrew's monotone chain), collinear points dropped."""
    pts = sorted(set((float(z.real), float(z.imag)) for z in numpy.atleast_1d(points)))
    if len(pts) <= 2:
        return numpy.array([complex(*p) for p in pts])

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return numpy.array([complex(*p) for p in lower[:-1] + upper[:-1]])


def point_polygon_distance(z, poly, chunk=512):
    """Distance from points ``z`` to the convex set spanned by CCW vertices ``poly``.

    Degenerate polygons (one point, a segment) are allowed.
    """
    z = numpy.atleast_1d(numpy.asarray(z, dtype=complex))
    poly = numpy.asarray(poly, dtype=complex)
    if len(poly) == 0:
        raise InputError('distance to an empty set')
    if len(poly) == 1:
        return numpy.abs(z - poly[0])
    m = len(poly)
    a = poly if m >= 3 else poly[:1]
    b = numpy.roll(poly, -1)[:len(a)]
    ab = b - a
    L2 = numpy.abs(ab) ** 2
    safe = numpy.where(L2 > 0, L2, 1.0)
    out = numpy.empty(z.shape)
    for lo in range(0, len(z), chunk):
        zc = z[lo:lo + chunk, None]
        za = zc - a[None, :]
        t = numpy.clip((za * numpy.conj(ab)).real / safe, 0.0, 1.0)
        dist = numpy.min(numpy.abs(za - t * ab), axis=1)
        if m >= 3:
            inside = numpy.all((numpy.conj(ab) * za).imag >= 0.0, axis=1)
            dist = numpy.where(inside, 0.0, dist)
        out[lo:lo + chunk] = dist
    return out


def _edge_normals(V):
    # outward normal angle of edge V[i] -> V[i+1] (cyclic); vertex i+1 supports
    # the directions between normals i and i+1
    if len(V) == 1:
        return numpy.array([])
    return numpy.mod(numpy.angle(numpy.roll(V, -1) - V) - numpy.pi / 2, 2 * numpy.pi)


def _support_vertex(V, normals, thetas):
    if len(V) == 1:
        return numpy.full(len(thetas), V[0])
    order = numpy.argsort(normals, kind='stable')
    pos = numpy.searchsorted(normals[order], thetas, side='right') - 1
    edge = order[pos % len(order)]
    return V[(edge + 1) % len(V)]


def hausdorff_convex(P, Q):
    """Hausdorff distance between the convex hulls of point lists ``P`` and ``Q``.

    Uses ``d_H = max_theta |h_P(theta) - h_Q(theta)|`` for support functions.
    Between consecutive edge normals of the two hulls the difference is a
    single sinusoid, so its maximum is found exactly piece by piece.
    """
    P = convex_hull(numpy.asarray(P, dtype=complex))
    Q = convex_hull(numpy.asarray(Q, dtype=complex))
    if len(P) == 0 or len(Q) == 0:
        raise InputError('Hausdorff distance to an empty set')
    nP, nQ = _edge_normals(P), _edge_normals(Q)
    brk = numpy.unique(numpy.concatenate([nP, nQ, [0.0]]))
    lo = brk
    hi = numpy.append(brk[1:], brk[0] + 2 * numpy.pi)
    mid = 0.5 * (lo + hi)
    w = _support_vertex(P, nP, mid) - _support_vertex(Q, nQ, mid)
    # |Re(e^{-i t} w)| peaks at t = arg w (mod pi)
    peak = numpy.mod(numpy.angle(w) - lo, numpy.pi) <= hi - lo
    ends = numpy.maximum(numpy.abs((numpy.exp(-1j * lo) * w).real),
                         numpy.abs((numpy.exp(-1j * hi) * w).real))
    return float(numpy.max(numpy.where(peak, numpy.abs(w), ends)))
