"""Rank-k numerical ranges through their support-function description.

A point ``w`` lies in ``Lambda_k(A)`` exactly when
``Re(exp(-i theta) w) <= lambda_k(Re(exp(-i theta) A))`` for every angle, so
``Lambda_k(A)`` is an intersection of half-planes whose offsets are the
``k``-th largest eigenvalues of the rotated Hermitian parts.  Everything here
samples that family on a uniform angle grid and works with the resulting
polygon.

The uniform grid is augmented with the angles at which the sampled
branch of ``lambda_k`` switches between two tangency points: on each such
interval the two tangent sinusoids cross at a computable angle, and adding
that angle makes polygonal pieces exact instead of grid-limited.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy

from .errors import InputError
from .geometry import chebyshev_center, hausdorff_convex, intersect_halfplanes
from .linalg import as_matrix, eig_hermitian_batch, frobenius_norm, im_part, re_part, rotated_re_batch

__all__ = ['SupportProfile', 'ConvexRegion', 'CurveSample', 'DEFAULT_GRID',
           'tol_geo', 'grid_for_accuracy', 'uniform_grid', 'support_profile',
           'rank_k_range', 'membership', 'corners', 'boundary_curve_points',
           'region_distance', 'support_planes']

DEFAULT_GRID = 1024
MIN_GRID = 16
CORNER_MIN_STEPS = 1.5
REFINE_PASSES = 2
MAX_REFINE_PASSES = 10


def tol_geo(A):
    """Default geometric tolerance ``1e-6 * (1 + ||A||_F)``."""
    return 1e-6 * (1.0 + frobenius_norm(A))


def grid_for_accuracy(A, target):
    """Smallest grid size whose Weyl bound ``2 ||A||_F 2pi/N`` is below ``target``."""
    if target <= 0:
        raise InputError('target accuracy must be positive')
    return max(MIN_GRID, int(numpy.ceil(4 * numpy.pi * frobenius_norm(A) / target)))


def uniform_grid(N):
    return 2.0 * numpy.pi * numpy.arange(N) / N


@dataclass(frozen=True)
class SupportProfile:
    """``values[j] = lambda_k(Re(exp(-i thetas[j]) A))`` on a uniform grid."""

    k: int
    thetas: numpy.ndarray
    values: numpy.ndarray
    lipschitz: float

    def weyl_violations(self):
        """Number of neighbouring samples (wrap-around included) breaking the Weyl bound."""
        N = len(self.values)
        jumps = numpy.abs(numpy.roll(self.values, -1) - self.values)
        bound = self.lipschitz * (2 * numpy.pi / N) * (1 + 1e-9)
        # absolute slack for rounding in the eigenvalues themselves
        return int(numpy.sum(jumps > bound + 1e-13 * (1 + self.lipschitz)))


@dataclass(frozen=True)
class CurveSample:
    theta: float
    point: complex


@dataclass(frozen=True)
class ConvexRegion:
    """Polygonal approximation of a compact convex set.

    ``classification`` is one of ``'empty'``, ``'point'``, ``'segment'`` or
    ``'full'``.  ``vertices`` is counter-clockwise for full regions, the two
    endpoints for a segment, the single point for a point and empty for an
    empty region.  ``corners`` lists the vertices detected as corners.
    """

    classification: str
    vertices: numpy.ndarray
    chebyshev_center: complex
    chebyshev_radius: float
    corners: tuple = field(default=())
    tol: float = 0.0

    @property
    def is_empty(self):
        return self.classification == 'empty'

    def diameter(self):
        v = self.vertices
        if len(v) < 2:
            return 0.0
        return float(numpy.max(numpy.abs(v[:, None] - v[None, :])))

    def to_json_dict(self):
        c = self.chebyshev_center
        return {'classification': self.classification,
                'vertices': [[float(z.real), float(z.imag)] for z in self.vertices],
                'chebyshev': {'center': [float(c.real), float(c.imag)],
                              'radius': float(self.chebyshev_radius)}}

    @classmethod
    def from_json_dict(cls, data):
        try:
            cls_name = data['classification']
            verts = numpy.array([complex(x, y) for x, y in data['vertices']], dtype=complex)
            cx, cy = data['chebyshev']['center']
            r = float(data['chebyshev']['radius'])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f'malformed region document: {exc}') from exc
        if cls_name not in ('empty', 'point', 'segment', 'full'):
            raise InputError(f'unknown classification {cls_name!r}')
        return cls(cls_name, verts, complex(cx, cy), r)


def _check_rank(A, k):
    n = A.shape[0]
    if not 1 <= k <= n:
        raise InputError(f'rank k={k} outside 1..{n}')


def _check_grid(N):
    if N < MIN_GRID:
        raise InputError(f'grid size must be at least {MIN_GRID}, got {N}')


def _tangency(H, K, vecs):
    # <H v, v> + i <K v, v> for a stack of vectors (B, n)
    hv = numpy.einsum('ij,bj->bi', H, vecs)
    kv = numpy.einsum('ij,bj->bi', K, vecs)
    return (numpy.einsum('bi,bi->b', vecs.conj(), hv).real
            + 1j * numpy.einsum('bi,bi->b', vecs.conj(), kv).real)


@lru_cache(maxsize=32)
def _sweep_cached(key, n, N):
    A = numpy.frombuffer(key, dtype=complex).reshape(n, n)
    thetas = uniform_grid(N)
    values, vectors = eig_hermitian_batch(rotated_re_batch(A, thetas))
    for a in (thetas, values, vectors):
        a.flags.writeable = False
    return thetas, values, vectors


def _sweep(A, N):
    A = as_matrix(A)
    return _sweep_cached(numpy.ascontiguousarray(A).tobytes(), A.shape[0], N)


def _tangency_all(H, K, vecs):
    # tangency points of every branch, shape (B, n)
    return (numpy.einsum('bji,jl,bli->bi', vecs.conj(), H, vecs).real
            + 1j * numpy.einsum('bji,jl,bli->bi', vecs.conj(), K, vecs).real)


def _rank_crossed(t, vals, allpts, k, tol):
    # does some other branch pass through rank k inside [t_j, t_{j+1}]?  The
    # tangent sinusoid of a branch above (below) rank k at one end must still
    # be above (below) alpha_k at the other end, or it crossed it
    out = numpy.zeros(len(t), dtype=bool)
    for shift in (-1, 1):
        t2 = numpy.roll(t, shift)
        a2 = numpy.roll(vals[:, k - 1], shift)
        pred = numpy.cos(t2)[:, None] * allpts.real + numpy.sin(t2)[:, None] * allpts.imag
        bad = (numpy.any(pred[:, :k - 1] < (a2 - tol)[:, None], axis=1)
               | numpy.any(pred[:, k:] > (a2 + tol)[:, None], axis=1))
        # crossing at the right end belongs to interval j; at the left end to j-1
        out |= bad if shift == -1 else numpy.roll(bad, -1)
    return out


@lru_cache(maxsize=128)
def _planes_cached(key, n, k, N):
    A = numpy.frombuffer(key, dtype=complex).reshape(n, n)
    H, K = re_part(A), im_part(A)
    thetas, values, vectors = _sweep_cached(key, n, N)
    t = numpy.array(thetas)
    vals = numpy.array(values)
    vecs = numpy.array(vectors)
    allpts = _tangency_all(H, K, vecs)
    jump_tol = 1e-12 * (1.0 + frobenius_norm(A))
    # intervals split by bisection keep being refined after the regular passes
    hot = numpy.zeros(len(t), dtype=bool)
    for sweep in range(MAX_REFINE_PASSES):
        pts = allpts[:, k - 1]
        width = numpy.mod(numpy.roll(t, -1) - t, 2 * numpy.pi)
        dp = pts - numpy.roll(pts, -1)
        # tangent sinusoids Re(e^{-i s} p_j) and Re(e^{-i s} p_{j+1}) cross where
        # Re(e^{-i s} dp) = 0, i.e. s = arg(dp) + pi/2 (mod pi)
        off = numpy.mod(numpy.angle(dp) + numpy.pi / 2 - t, numpy.pi)
        jump = numpy.abs(dp) > jump_tol
        live = hot if sweep >= REFINE_PASSES else numpy.ones(len(t), dtype=bool)
        cross = live & jump & (off > 1e-10) & (off < width - 1e-10)
        # crossing outside the interval, or another branch passing through
        # rank k: several switches hide inside it
        hidden = (jump & (off > width + 1e-10) & (off < numpy.pi - 1e-10)) | (
            ~cross & _rank_crossed(t, vals, allpts, k, jump_tol))
        split = live & hidden & (width > 1e-9)
        if not numpy.any(cross | split):
            break
        sel = cross | split
        new_t = numpy.mod(t[sel] + numpy.where(cross, off, 0.5 * width)[sel], 2 * numpy.pi)
        # the left neighbour's eigenbasis is nearly diagonalizing
        nv, nvec = eig_hermitian_batch(rotated_re_batch(A, new_t), guess=vecs[sel])
        hot = split.copy()
        t = numpy.concatenate([t, new_t])
        vals = numpy.concatenate([vals, nv])
        vecs = numpy.concatenate([vecs, nvec])
        allpts = numpy.concatenate([allpts, _tangency_all(H, K, nvec)])
        hot = numpy.concatenate([hot, split[sel]])
        order = numpy.argsort(t, kind='stable')
        t, vals, vecs, allpts, hot = t[order], vals[order], vecs[order], allpts[order], hot[order]
    d = numpy.ascontiguousarray(vals[:, k - 1])
    pts = numpy.ascontiguousarray(allpts[:, k - 1])
    for a in (t, d, pts):
        a.flags.writeable = False
    return t, d, pts


def support_planes(A, k, N=DEFAULT_GRID):
    """Angles, offsets and tangency points of the half-planes used for ``Lambda_k(A)``.

    The uniform ``N``-grid plus the refined branch-switch angles, sorted.
    """
    A = as_matrix(A)
    _check_rank(A, k)
    _check_grid(N)
    return _planes_cached(numpy.ascontiguousarray(A).tobytes(), A.shape[0], k, N)


def support_profile(A, k, N=DEFAULT_GRID):
    """Sampled ``alpha_k(theta) = lambda_k(Re(exp(-i theta) A))`` on the uniform grid."""
    A = as_matrix(A)
    _check_rank(A, k)
    _check_grid(N)
    thetas, values, _ = _sweep(A, N)
    return SupportProfile(k, thetas, values[:, k - 1], frobenius_norm(A))


def _merge_cyclic(verts, active, merge_tol):
    # group consecutive (cyclic) vertices lying within merge_tol of each other
    m = len(verts)
    start = 0
    for i in range(m):
        if abs(verts[i] - verts[i - 1]) > merge_tol:
            start = i
            break
    groups = []
    cur = [start]
    for step in range(1, m):
        i = (start + step) % m
        if abs(verts[i] - verts[cur[0]]) <= merge_tol:
            cur.append(i)
        else:
            groups.append(cur)
            cur = [i]
    groups.append(cur)
    pts = numpy.array([verts[g[0]] if len(g) == 1 else numpy.mean(verts[g]) for g in groups])
    first = numpy.array([g[0] for g in groups])
    after = numpy.array([(g[-1] + 1) % m for g in groups])
    ext = numpy.mod(active[after] - active[first], 2 * numpy.pi)
    return pts, ext


def _region_from_planes(t, d, N, tol):
    center, r = chebyshev_center((t, d))
    merge_tol = 1e-3 * tol
    if r < -tol:
        return ConvexRegion('empty', numpy.array([], dtype=complex), center, r, (), tol)
    if r <= tol:
        eta = max(0.0, -r) + merge_tol
        verts, _ = intersect_halfplanes(t, d + eta)
        if len(verts) == 0:
            verts = numpy.array([center])
        dist = numpy.abs(verts[:, None] - verts[None, :])
        i, j = numpy.unravel_index(numpy.argmax(dist), dist.shape)
        if dist[i, j] <= tol:
            return ConvexRegion('point', numpy.array([center]), center, r, (center,), tol)
        a, b = sorted((verts[i], verts[j]), key=lambda z: (z.real, z.imag))
        return ConvexRegion('segment', numpy.array([a, b]), center, r, (a, b), tol)
    verts, active = intersect_halfplanes(t, d)
    pts, ext = _merge_cyclic(verts, active, merge_tol)
    step = 2 * numpy.pi / N
    found = tuple(complex(z) for z, e in zip(pts, ext) if e >= CORNER_MIN_STEPS * step)
    return ConvexRegion('full', pts, center, r, found, tol)


def rank_k_range(A, k, N=DEFAULT_GRID, tol=None):
    """Polygonal approximation of ``Lambda_k(A)`` with degeneracy classification.

    Classification uses the Chebyshev radius ``r`` of the sampled half-plane
    system and ``tol`` (default :func:`tol_geo`): ``r < -tol`` is empty;
    ``|r| <= tol`` is a point or a segment depending on the diameter; larger
    ``r`` is a full polygon.
    """
    A = as_matrix(A)
    if tol is None:
        tol = tol_geo(A)
    t, d, _ = support_planes(A, k, N)
    return _region_from_planes(t, d, N, tol)


def membership(A, k, lam, N=DEFAULT_GRID, tol=None):
    """Classify ``lam`` against ``Lambda_k(A)``.

    Returns ``(verdict, margin)`` with
    ``margin = min_theta(alpha_k(theta) - Re(exp(-i theta) lam))`` and
    verdict ``'inside'`` (margin > tol), ``'boundary'`` (|margin| <= tol) or
    ``'outside'``.
    """
    A = as_matrix(A)
    if tol is None:
        tol = tol_geo(A)
    t, d, _ = support_planes(A, k, N)
    lam = complex(lam)
    margin = float(numpy.min(d - (lam.real * numpy.cos(t) + lam.imag * numpy.sin(t))))
    if margin > tol:
        verdict = 'inside'
    elif margin >= -tol:
        verdict = 'boundary'
    else:
        verdict = 'outside'
    return verdict, margin


def corners(A, k, N=DEFAULT_GRID, tol=None):
    """Corners of the sampled ``Lambda_k(A)``.

    A polygon vertex is a corner when the normals of the half-planes meeting
    there span at least 1.5 grid steps (so at least two steps on the uniform
    grid); smooth boundary arcs produce vertices spanning one step at most.
    Segment endpoints are always corners.

    Raises
    ------
    InputError
        If the region is empty.
    """
    region = rank_k_range(A, k, N, tol)
    if region.is_empty:
        raise InputError(f'Lambda_{k} is empty; it has no corners')
    return list(region.corners)


def boundary_curve_points(A, k, N=DEFAULT_GRID):
    """Tangency points ``<Re(A) v, v> + i <Im(A) v, v>`` along the uniform grid.

    ``v`` is the unit eigenvector of ``lambda_k(Re(exp(-i theta) A))``.
    """
    A = as_matrix(A)
    _check_rank(A, k)
    _check_grid(N)
    thetas, _, vectors = _sweep(A, N)
    pts = _tangency(re_part(A), im_part(A), vectors[:, :, k - 1])
    return [CurveSample(float(t), complex(p)) for t, p in zip(thetas, pts)]


def region_distance(R1, R2):
    """Hausdorff distance between two regions (0 for two empty sets, inf for one)."""
    if R1.is_empty and R2.is_empty:
        return 0.0
    if R1.is_empty or R2.is_empty:
        return float('inf')
    return hausdorff_convex(R1.vertices, R2.vertices)
