"""Linear factors of the Kippenhahn polynomial and the three-way equivalence test.

For a pair ``A, B`` the following are equivalent, and :func:`theorem1_check`
evaluates each one numerically and independently:

(a) ``Lambda_k(A) == Lambda_k(B)`` for ``1 <= k <= n//2 + 1``;
(b) ``p_A == p_B``;
(c) ``Re(exp(-i theta) A)`` and ``Re(exp(-i theta) B)`` have the same
    eigenvalues for every ``theta``.
"""

from dataclasses import dataclass, field

import numpy

from .errors import InconsistentVerdictError, InputError, NumericalError
from .kippenhahn import kippenhahn_poly, poly_equal, z_root_multiplicity
from .linalg import as_matrix, commutator_norm, eig_hermitian_batch, frobenius_norm, rotated_re_batch
from .ranges import DEFAULT_GRID, _sweep, membership, rank_k_range, region_distance

__all__ = ['LinearFactor', 'VSets', 'EquivalenceReport', 'real_linear_factors',
           'v_sets', 'normality_test', 'is_companion', 'corollary2_check',
           'theorem1_check', 'MULTIPLICITY_GRID']

MULTIPLICITY_GRID = 64
MULTIPLICITY_TOL = 1e-8
_REFINE_ITERS = 4


@dataclass(frozen=True)
class LinearFactor:
    """``(a x + b y + z) ** multiplicity`` divides ``p_A``."""

    a: float
    b: float
    multiplicity: int

    @property
    def point(self):
        return complex(self.a, self.b)


@dataclass(frozen=True)
class VSets:
    """``sets[l]`` for ``l = 1..n//2`` and the content of ``Lambda_{n//2+1}``."""

    sets: dict
    top: tuple

    def all_points(self):
        pts = [z for l in sorted(self.sets) for z in self.sets[l]]
        return pts + list(self.top)


@dataclass
class EquivalenceReport:
    n: int
    grid: int
    tol: float
    poly_tol: float
    cond_a: bool
    residuals_a: list
    cond_b: bool
    residual_b: float
    cond_c: bool
    residual_c: float
    consistent: bool = field(init=False)

    def __post_init__(self):
        self.consistent = self.cond_a == self.cond_b == self.cond_c

    @property
    def verdict(self):
        return self.cond_a and self.cond_b and self.cond_c

    def to_json_dict(self, version=None):
        out = {'conditions': {
                   'a': {'holds': self.cond_a,
                         'residuals': {str(k): _finite_or_str(r)
                                       for k, r in enumerate(self.residuals_a, start=1)}},
                   'b': {'holds': self.cond_b, 'residual': _finite_or_str(self.residual_b)},
                   'c': {'holds': self.cond_c, 'residual': _finite_or_str(self.residual_c)}},
               'consistent': self.consistent,
               'parameters': {'n': self.n, 'grid': self.grid, 'tol': self.tol,
                              'poly_tol': self.poly_tol}}
        if version is not None:
            out['version'] = version
        return out


def _finite_or_str(x):
    x = float(x)
    return x if numpy.isfinite(x) else 'inf'


def _linear_candidates(A):
    # eigenvalues of A are the only possible points a+bi; defective ones come
    # out perturbed by up to eps**(1/m), so refine each candidate against the
    # eigenvalue branches: on a factor, a cos + b sin is an exact branch
    n = A.shape[0]
    thetas = 2 * numpy.pi * numpy.arange(MULTIPLICITY_GRID) / MULTIPLICITY_GRID
    alphas, _ = eig_hermitian_batch(rotated_re_batch(A, thetas))
    basis = numpy.column_stack([numpy.cos(thetas), numpy.sin(thetas)])
    out = []
    for lam in numpy.linalg.eigvals(A):
        ab = numpy.array([lam.real, lam.imag])
        for _ in range(_REFINE_ITERS):
            pred = basis @ ab
            nearest = alphas[numpy.arange(len(thetas)),
                             numpy.argmin(numpy.abs(alphas - pred[:, None]), axis=1)]
            ab, *_ = numpy.linalg.lstsq(basis, nearest, rcond=None)
        out.append(complex(ab[0], ab[1]))
    return thetas, out


def real_linear_factors(A, tol=MULTIPLICITY_TOL):
    """Real linear factors ``(a x + b y + z)^m`` of the Kippenhahn polynomial.

    Candidates ``a + bi`` are eigenvalues of ``A``; the multiplicity is the
    minimum over a 64-angle grid of the order of the root
    ``z = -(a cos + b sin)`` of ``p_A(cos, sin, z)``.  Factors are sorted by
    ``(a, b)``.
    """
    A = as_matrix(A)
    p = kippenhahn_poly(A)
    thetas, cands = _linear_candidates(A)
    merge = 1e-6 * (1.0 + frobenius_norm(A))
    uniq = []
    for z in cands:
        if all(abs(z - w) > merge for w in uniq):
            uniq.append(z)
    factors = []
    for z in uniq:
        m = min(z_root_multiplicity(p, t, -(z.real * numpy.cos(t) + z.imag * numpy.sin(t)), tol)
                for t in thetas)
        if m >= 1:
            factors.append(LinearFactor(float(z.real), float(z.imag), int(m)))
    factors.sort(key=lambda f: (f.a, f.b))
    if sum(f.multiplicity for f in factors) > A.shape[0]:
        raise NumericalError('linear-factor multiplicities exceed the degree')
    return factors


def v_sets(A, N=DEFAULT_GRID, tol=None):
    """Partition the linear-factor points into ``V_1, ..., V_{n//2}`` and the top level.

    A factor point with multiplicity ``m`` whose deepest level is
    ``k0 = max{k : point in Lambda_k}`` goes to ``V_{k0-m+1}``; points of
    ``Lambda_{n//2+1}`` go to ``top``.  Boundary membership counts as inside.
    """
    A = as_matrix(A)
    n = A.shape[0]
    half = n // 2
    factors = real_linear_factors(A)
    sets = {l: [] for l in range(1, half + 1)}
    top = []

    def inside(k, z):
        return membership(A, k, z, N, tol)[0] != 'outside'

    for f in factors:
        z = f.point
        if inside(half + 1, z):
            top.append(z)
            continue
        k0 = 0
        while k0 < half and inside(k0 + 1, z):
            k0 += 1
        l = k0 - f.multiplicity + 1
        if not 1 <= l <= half:
            raise NumericalError(f'factor point {z} with multiplicity {f.multiplicity} '
                                 f'has depth k0={k0}; no valid V-level')
        sets[l].append(z)
    top_region = rank_k_range(A, half + 1, N, tol)
    if not top_region.is_empty and not top:
        raise NumericalError('Lambda_{n//2+1} is non-empty but matches no linear factor')
    if len(top) > 1:
        raise NumericalError('more than one factor point in Lambda_{n//2+1}')
    return VSets({l: tuple(v) for l, v in sets.items()}, tuple(top))


def normality_test(A, tol=1e-10):
    """True when ``p_A`` splits into real linear factors, i.e. ``A`` is normal.

    The answer is cross-checked against ``||A*A - AA*||_F <= tol * max(1, ||A||_F)**2``.

    Raises
    ------
    NumericalError
        If the two criteria disagree.
    """
    A = as_matrix(A)
    linear = sum(f.multiplicity for f in real_linear_factors(A)) == A.shape[0]
    commuting = commutator_norm(A) <= tol * max(1.0, frobenius_norm(A)) ** 2
    if linear != commuting:
        raise NumericalError(f'factor count says normal={linear} but the commutator '
                             f'norm {commutator_norm(A):.3e} says normal={commuting}')
    return linear


def is_companion(A, tol=0.0):
    """Companion-matrix shape: ones on the subdiagonal, free last column, zeros elsewhere."""
    A = as_matrix(A)
    n = A.shape[0]
    target = numpy.zeros((n, n), dtype=complex)
    target[numpy.arange(1, n), numpy.arange(n - 1)] = 1.0
    mask = numpy.ones((n, n), dtype=bool)
    mask[:, -1] = False
    return bool(numpy.all(numpy.abs(A[mask] - target[mask]) <= tol))


def corollary2_check(A, B, tol=1e-9):
    """Unitary equivalence for the classes where it follows from equal ranges.

    Returns ``'unitarily_equivalent'``, ``'not_equivalent'`` or
    ``'not_applicable'``.  Applies to 2x2 pairs (trace, determinant and
    Frobenius norm), normal pairs (eigenvalue multisets) and companion pairs
    (equal last columns, hence equal matrices).
    """
    A, B = as_matrix(A), as_matrix(B)
    if A.shape != B.shape:
        raise InputError('matrices must have the same size')
    n = A.shape[0]
    scale = 1.0 + max(frobenius_norm(A), frobenius_norm(B))

    def close(u, v):
        return numpy.max(numpy.abs(numpy.asarray(u) - numpy.asarray(v))) <= tol * scale ** n

    if n == 2:
        same = close([numpy.trace(A), numpy.linalg.det(A), frobenius_norm(A)],
                     [numpy.trace(B), numpy.linalg.det(B), frobenius_norm(B)])
    elif (commutator_norm(A) <= tol * scale ** 2 and commutator_norm(B) <= tol * scale ** 2):
        same = close(numpy.poly(A), numpy.poly(B))
    elif is_companion(A) and is_companion(B):
        same = close(A[:, -1], B[:, -1])
    else:
        return 'not_applicable'
    return 'unitarily_equivalent' if same else 'not_equivalent'


def theorem1_check(A, B, N=DEFAULT_GRID, tol=None, poly_tol=1e-9, strict=True):
    """Evaluate conditions (a), (b), (c) independently on the pair ``(A, B)``.

    (a) Hausdorff distance of ``Lambda_k`` for ``k = 1..n//2+1`` at most ``tol``;
    (b) Kippenhahn coefficients equal to ``poly_tol`` (relative);
    (c) ``max_{theta, k} |alpha_k - beta_k|`` at most ``tol`` on the grid.

    ``tol`` defaults to ``1e-6 * (1 + max(||A||_F, ||B||_F))``.

    Raises
    ------
    InconsistentVerdictError
        With ``strict``, when the three verdicts disagree.
    """
    A, B = as_matrix(A), as_matrix(B)
    if A.shape != B.shape:
        raise InputError('matrices must have the same size')
    n = A.shape[0]
    if tol is None:
        tol = 1e-6 * (1.0 + max(frobenius_norm(A), frobenius_norm(B)))
    residuals_a = [region_distance(rank_k_range(A, k, N, tol), rank_k_range(B, k, N, tol))
                   for k in range(1, n // 2 + 2)]
    cond_a = max(residuals_a) <= tol
    cond_b, residual_b = poly_equal(kippenhahn_poly(A), kippenhahn_poly(B), poly_tol)
    _, alpha, _ = _sweep(A, N)
    _, beta, _ = _sweep(B, N)
    residual_c = float(numpy.max(numpy.abs(alpha - beta)))
    cond_c = residual_c <= tol
    report = EquivalenceReport(n, N, float(tol), poly_tol, bool(cond_a),
                               [float(r) for r in residuals_a], bool(cond_b),
                               float(residual_b), bool(cond_c), residual_c)
    if strict and not report.consistent:
        raise InconsistentVerdictError(
            f'conditions disagree: a={cond_a} (max residual {max(residuals_a):.3e}), '
            f'b={cond_b} ({residual_b:.3e}), c={cond_c} ({residual_c:.3e})', report)
    return report
