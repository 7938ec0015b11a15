"""Kippenhahn polynomials ``p_A(x, y, z) = det(x Re A + y Im A + z I)``.

Two independent routes produce the coefficients:

* :func:`kippenhahn_poly` samples the pencil on the unit circle, turns the
  sorted eigenvalues into elementary symmetric functions and recovers every
  homogeneous block by least squares;
* :func:`kippenhahn_poly_exact` expands the determinant symbolically over
  the polynomial ring.
"""

from dataclasses import dataclass
from math import comb

import numpy

from .errors import FitError, InputError, NumericalError
from .linalg import as_matrix, eig_hermitian_batch, im_part, re_part, rotated_re_batch

__all__ = ['TrivariatePoly', 'char_coeffs_along', 'kippenhahn_poly',
           'kippenhahn_poly_exact', 'poly_eval', 'poly_equal',
           'z_root_multiplicity', 'shift_z', 'EXACT_MAX_N']

EXACT_MAX_N = 8
FIT_REL_TOL = 1e-8


@dataclass(frozen=True)
class TrivariatePoly:
    """Real homogeneous polynomial of degree ``degree`` in ``x, y, z``.

    ``coeffs[i, j]`` is the coefficient of ``x**i * y**j * z**(degree-i-j)``;
    entries with ``i + j > degree`` are always zero.
    """

    degree: int
    coeffs: numpy.ndarray

    def __post_init__(self):
        c = numpy.array(self.coeffs, dtype=float)
        n = self.degree
        if c.shape != (n + 1, n + 1):
            raise InputError(f'coefficient array must have shape {(n + 1, n + 1)}')
        if not numpy.all(numpy.isfinite(c)):
            raise NumericalError('polynomial has non-finite coefficients')
        i, j = numpy.indices(c.shape)
        c[i + j > n] = 0.0
        c.flags.writeable = False
        object.__setattr__(self, 'coeffs', c)

    @classmethod
    def from_terms(cls, degree, terms):
        """Build from an iterable of ``(i, j, k, c)`` with ``i + j + k == degree``."""
        c = numpy.zeros((degree + 1, degree + 1))
        for i, j, k, v in terms:
            if i < 0 or j < 0 or k < 0 or i + j + k != degree:
                raise InputError(f'term exponents {(i, j, k)} do not sum to {degree}')
            c[i, j] += v
        return cls(degree, c)

    def coeff(self, i, j, k):
        if i + j + k != self.degree:
            raise InputError('exponents must sum to the degree')
        return float(self.coeffs[i, j])

    def terms(self):
        """All ``(i, j, k, c)`` over the simplex, lexicographic in ``(i, j)``."""
        n = self.degree
        return [(i, j, n - i - j, float(self.coeffs[i, j]))
                for i in range(n + 1) for j in range(n + 1 - i)]

    def max_abs(self):
        return float(numpy.max(numpy.abs(self.coeffs)))

    def z_poly(self, x, y):
        """Coefficients of ``p(x, y, z)`` as a polynomial in ``z``, highest power first."""
        n = self.degree
        out = numpy.zeros(n + 1)
        for i in range(n + 1):
            for j in range(n + 1 - i):
                out[i + j] += self.coeffs[i, j] * x ** i * y ** j
        return out

    def __call__(self, x, y, z):
        return poly_eval(self, x, y, z)

    def to_json_dict(self, rel_zero=1e-12):
        """Coefficient list with negligible (and zero) coefficients omitted."""
        cut = rel_zero * self.max_abs()
        return {'degree': self.degree,
                'coeffs': [{'i': i, 'j': j, 'k': k, 'c': c}
                           for i, j, k, c in self.terms() if abs(c) > cut]}

    @classmethod
    def from_json_dict(cls, data):
        try:
            n = int(data['degree'])
            terms = [(int(t['i']), int(t['j']), int(t['k']), float(t['c']))
                     for t in data['coeffs']]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f'malformed polynomial document: {exc}') from exc
        return cls.from_terms(n, terms)


def _elementary_symmetric(values):
    # coefficients of prod_j (z + v_j), highest power of z first
    values = numpy.atleast_2d(values)
    B, n = values.shape
    c = numpy.zeros((B, n + 1))
    c[:, 0] = 1.0
    for m in range(n):
        v = values[:, m]
        c[:, 1:m + 2] = c[:, 1:m + 2] + v[:, None] * c[:, 0:m + 1]
    return c


def char_coeffs_along(A, theta):
    """Coefficients ``c_0..c_n`` of ``det(Re(exp(-i theta) A) + z I)``.

    ``c_d`` multiplies ``z**(n-d)``; they are the elementary symmetric
    functions of the eigenvalues, so ``c_0 == 1``.
    """
    values, _ = eig_hermitian_batch(rotated_re_batch(A, [theta]))
    return _elementary_symmetric(values)[0]


def _block_design(thetas, d):
    # columns cos^i sin^(d-i), i = 0..d
    c, s = numpy.cos(thetas), numpy.sin(thetas)
    return numpy.stack([c ** i * s ** (d - i) for i in range(d + 1)], axis=1)


def kippenhahn_poly(A):
    """Kippenhahn polynomial from eigenvalue sweeps and block-wise least squares.

    ``4n + 1`` equispaced angles are used; each degree-``d`` block
    ``sum_{i+j=d} c_ij cos^i sin^j`` is fitted to the sampled ``e_d``.

    Raises
    ------
    FitError
        If a block's fit residual exceeds ``1e-8 * (1 + max |e_d|)``.
    """
    A = as_matrix(A)
    n = A.shape[0]
    m = 4 * n + 1
    thetas = 2.0 * numpy.pi * numpy.arange(m) / m
    values, _ = eig_hermitian_batch(rotated_re_batch(A, thetas))
    esym = _elementary_symmetric(values)
    coeffs = numpy.zeros((n + 1, n + 1))
    coeffs[0, 0] = 1.0
    for d in range(1, n + 1):
        M = _block_design(thetas, d)
        rhs = esym[:, d]
        sol, *_ = numpy.linalg.lstsq(M, rhs, rcond=None)
        resid = float(numpy.max(numpy.abs(M @ sol - rhs)))
        if resid > FIT_REL_TOL * (1.0 + float(numpy.max(numpy.abs(rhs)))):
            raise FitError(f'degree-{d} coefficient block fit residual {resid:.3e}',
                           degree=d, residual=resid)
        for i in range(d + 1):
            coeffs[i, d - i] = sol[i]
    return TrivariatePoly(n, coeffs)


def _mul_linear(poly, lin):
    # poly: dict (i, j, k) -> complex; lin: (a, b, c) for a x + b y + c z
    out = {}
    for (i, j, k), v in poly.items():
        for (di, dj, dk), w in zip(((1, 0, 0), (0, 1, 0), (0, 0, 1)), lin):
            if w == 0:
                continue
            key = (i + di, j + dj, k + dk)
            out[key] = out.get(key, 0) + v * w
    return out


def kippenhahn_poly_exact(A):
    """Kippenhahn polynomial by cofactor expansion along the first row.

    Minors are memoized on their column sets, so the cost is
    ``O(2**n * n)`` polynomial products.  Only ``n <= 8`` is accepted.

    Raises
    ------
    InputError
        For ``n > 8``.
    NumericalError
        If the expansion leaves an imaginary residue above
        ``1e-9 * max |coefficient|``.
    """
    A = as_matrix(A)
    n = A.shape[0]
    if n > EXACT_MAX_N:
        raise InputError(f'exact expansion is limited to n <= {EXACT_MAX_N}, got {n}')
    H, K = re_part(A), im_part(A)
    entries = [[(H[r, c], K[r, c], 1.0 if r == c else 0.0) for c in range(n)]
               for r in range(n)]
    memo = {}

    def minor(row, cols):
        if row == n:
            return {(0, 0, 0): 1.0}
        key = cols
        if key in memo:
            return memo[key]
        total = {}
        sign = 1
        for c in range(n):
            if not cols & (1 << c):
                continue
            lin = entries[row][c]
            if any(w != 0 for w in lin):
                term = _mul_linear(minor(row + 1, cols & ~(1 << c)), lin)
                for k, v in term.items():
                    total[k] = total.get(k, 0) + sign * v
            sign = -sign
        memo[key] = total
        return total

    det = minor(0, (1 << n) - 1)
    coeffs = numpy.zeros((n + 1, n + 1))
    imag = numpy.zeros((n + 1, n + 1))
    for (i, j, k), v in det.items():
        coeffs[i, j] += complex(v).real
        imag[i, j] += complex(v).imag
    if numpy.max(numpy.abs(imag)) > 1e-9 * numpy.max(numpy.abs(coeffs)):
        raise NumericalError('cofactor expansion left a non-negligible imaginary part')
    return TrivariatePoly(n, coeffs)


def poly_eval(p, x, y, z):
    """Evaluate ``p`` at ``(x, y, z)``; Horner in ``z``, arrays broadcast."""
    n = p.degree
    x, y, z = numpy.broadcast_arrays(*(numpy.asarray(v, dtype=float) for v in (x, y, z)))
    acc = numpy.zeros(x.shape)
    # z-degree k block q_k(x, y) = sum_{i+j=n-k} c_ij x^i y^j
    for k in range(n, -1, -1):
        q = numpy.zeros(x.shape)
        d = n - k
        for i in range(d + 1):
            q = q + p.coeffs[i, d - i] * x ** i * y ** (d - i)
        acc = acc * z + q
    return acc if acc.ndim else float(acc)


def poly_equal(p, q, tol=1e-9):
    """Coefficient-wise comparison.

    Returns ``(equal, residual)`` where ``residual`` is the largest
    coefficient deviation divided by ``1 + max |coefficient|``; ``equal``
    means ``residual <= tol``.  Polynomials of different degree give
    ``(False, inf)``.
    """
    if p.degree != q.degree:
        return False, float('inf')
    dev = float(numpy.max(numpy.abs(p.coeffs - q.coeffs)))
    residual = dev / (1.0 + max(p.max_abs(), q.max_abs()))
    return residual <= tol, residual


def z_root_multiplicity(p, theta, t, tol=1e-8):
    """Order of vanishing of ``z -> p(cos theta, sin theta, z)`` at ``z = t``.

    The ``j``-th derivative counts as zero when its value is at most
    ``tol * max|coefficients of that derivative| * (1 + |t|)**deg``.
    """
    poly = p.z_poly(numpy.cos(theta), numpy.sin(theta))
    m = 0
    while m < p.degree:
        scale = float(numpy.max(numpy.abs(poly))) * (1.0 + abs(t)) ** (len(poly) - 1)
        if abs(numpy.polyval(poly, t)) > tol * scale:
            break
        m += 1
        poly = numpy.polyder(poly)
    return m


def shift_z(p, a, b):
    """The polynomial ``(x, y, z) -> p(x, y, z + a x + b y)``."""
    n = p.degree
    out = numpy.zeros((n + 1, n + 1))
    for i, j, k, c in p.terms():
        if c == 0.0:
            continue
        # (z + a x + b y)^k = sum k!/(u! v! w!) a^u b^v x^u y^v z^w
        for u in range(k + 1):
            for v in range(k + 1 - u):
                coef = comb(k, u) * comb(k - u, v) * a ** u * b ** v
                out[i + u, j + v] += c * coef
    return TrivariatePoly(n, out)
