"""Small named matrices with known ranges, used in tests and demos."""

import numpy

__all__ = ['superdiag', 'jordan2', 'diag_pair', 'nine_point_diagonal',
           'four_by_four_triangular', 'NAMED']


def superdiag(*entries):
    """Nilpotent matrix with ``entries`` on the first superdiagonal."""
    n = len(entries) + 1
    A = numpy.zeros((n, n), dtype=complex)
    A[numpy.arange(n - 1), numpy.arange(1, n)] = entries
    return A


def jordan2():
    return superdiag(1.0)


def diag_pair():
    """``diag(0, 1, 1)`` and ``diag(0, 0, 1)``: equal numerical ranges, different polynomials."""
    return numpy.diag([0, 1, 1]).astype(complex), numpy.diag([0, 0, 1]).astype(complex)


def nine_point_diagonal():
    """``diag(1, i, -1, -i, 1/2, i/2, -1/2, -i/2, (1+i)/3)``.

    Its ranges are the hulls of ``{+-1, +-i}``, of ``{+-1/2, +-i/2, (+-1+-i)/3}``
    and of ``{0, 1/4, i/4, (1+i)/3}``, then ``{0}``, then empty from ``k = 5`` on.
    """
    return numpy.diag([1, 1j, -1, -1j, 0.5, 0.5j, -0.5, -0.5j, (1 + 1j) / 3]).astype(complex)


def four_by_four_triangular():
    """Upper-triangular 4x4 matrix whose ``Lambda_2`` has two corners."""
    r = numpy.sqrt(2.0)
    return numpy.array([[-1 / r, -0.5, 1 / (2 * r), 0.25],
                        [0, -1 / r, -0.5, -1 / (2 * r)],
                        [0, 0, 1 / r, -0.5],
                        [0, 0, 0, 1 / r]], dtype=complex)


NAMED = {
    'superdiag12': lambda: superdiag(1.0, 2.0),
    'superdiag21': lambda: superdiag(2.0, 1.0),
    'diag011': lambda: diag_pair()[0],
    'diag001': lambda: diag_pair()[1],
    'nine_point': nine_point_diagonal,
    'triangular4': four_by_four_triangular,
    'jordan2': jordan2,
}
