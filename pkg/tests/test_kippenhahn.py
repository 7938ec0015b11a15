import numpy
import pytest
from hypothesis import given, settings, strategies as st

from conftest import haar_unitary, random_matrix
from hrnr.errors import InputError
from hrnr.gallery import diag_pair, superdiag
from hrnr.kippenhahn import (TrivariatePoly, char_coeffs_along, kippenhahn_poly,
                             kippenhahn_poly_exact, poly_equal, poly_eval, shift_z,
                             z_root_multiplicity)
from hrnr.linalg import eig_hermitian, rotated_re


def test_superdiag_pair_coefficients():
    expected = TrivariatePoly.from_terms(3, [(0, 0, 3, 1.0), (2, 0, 1, -1.25), (0, 2, 1, -1.25)])
    for A in (superdiag(1.0, 2.0), superdiag(2.0, 1.0)):
        for p in (kippenhahn_poly(A), kippenhahn_poly_exact(A)):
            assert numpy.max(numpy.abs(p.coeffs - expected.coeffs)) < 1e-12


def test_diagonal_pair():
    A, B = diag_pair()
    # z (x + z)^2 and z^2 (x + z)
    pa = TrivariatePoly.from_terms(3, [(0, 0, 3, 1), (1, 0, 2, 2), (2, 0, 1, 1)])
    pb = TrivariatePoly.from_terms(3, [(0, 0, 3, 1), (1, 0, 2, 1)])
    assert poly_equal(kippenhahn_poly(A), pa, 1e-12)[0]
    assert poly_equal(kippenhahn_poly(B), pb, 1e-12)[0]
    equal, resid = poly_equal(pa, pb)
    assert not equal and resid == pytest.approx(1 / 3)


def test_jordan_block():
    p = kippenhahn_poly_exact(superdiag(1.0))
    assert p.coeff(0, 0, 2) == 1.0
    assert p.coeff(2, 0, 0) == pytest.approx(-0.25)
    assert p.coeff(0, 2, 0) == pytest.approx(-0.25)
    assert p.coeff(1, 1, 0) == 0.0


@pytest.mark.parametrize('n', range(1, 7))
def test_fit_matches_cofactor_expansion(rng, n):
    for _ in range(3):
        A = random_matrix(rng, n)
        ok, resid = poly_equal(kippenhahn_poly(A), kippenhahn_poly_exact(A), 1e-10)
        assert ok, resid


def test_roots_are_negated_eigenvalues(rng):
    A = random_matrix(rng, 5)
    p = kippenhahn_poly(A)
    for theta in numpy.linspace(0, 2 * numpy.pi, 7):
        roots = numpy.sort(numpy.roots(p.z_poly(numpy.cos(theta), numpy.sin(theta))).real)
        ev = numpy.sort(-eig_hermitian(rotated_re(A, theta)).values)
        assert numpy.allclose(roots, ev, atol=1e-8)


def test_char_coeffs_along(rng):
    A = random_matrix(rng, 4)
    c = char_coeffs_along(A, 0.3)
    ref = numpy.poly(-numpy.linalg.eigvalsh(rotated_re(A, 0.3)))
    assert numpy.allclose(c, ref)


def test_poly_eval_matches_determinant(rng):
    A = random_matrix(rng, 4)
    p = kippenhahn_poly_exact(A)
    H, K = (A + A.conj().T) / 2, (A - A.conj().T) / 2j
    for x, y, z in rng.normal(size=(5, 3)):
        assert p(x, y, z) == pytest.approx(numpy.linalg.det(x * H + y * K + z * numpy.eye(4)).real)
    vals = poly_eval(p, [0.1, 0.2], [0.3, 0.4], [1.0, 2.0])
    assert vals.shape == (2,)


def test_translation_rule(rng):
    A = random_matrix(rng, 4)
    c = 0.7 - 1.3j
    lhs = kippenhahn_poly(A + c * numpy.eye(4))
    rhs = shift_z(kippenhahn_poly(A), c.real, c.imag)
    assert poly_equal(lhs, rhs, 1e-10)[0]


def test_root_multiplicity():
    A, _ = diag_pair()
    p = kippenhahn_poly(A)
    # roots of z (x + z)^2 along theta: z = 0 once, z = -cos(theta) twice
    assert z_root_multiplicity(p, 0.4, -numpy.cos(0.4)) == 2
    assert z_root_multiplicity(p, 0.4, 0.0) == 1
    assert z_root_multiplicity(p, 0.4, 0.5) == 0


def test_json_round_trip(rng):
    p = kippenhahn_poly(random_matrix(rng, 3))
    doc = p.to_json_dict()
    q = TrivariatePoly.from_json_dict(doc)
    assert numpy.array_equal(p.coeffs, q.coeffs) or poly_equal(p, q, 1e-15)[0]
    keys = [(t['i'], t['j']) for t in doc['coeffs']]
    assert keys == sorted(keys)
    zeros = TrivariatePoly.from_terms(2, [(0, 0, 2, 1.0)]).to_json_dict()
    assert zeros == {'degree': 2, 'coeffs': [{'i': 0, 'j': 0, 'k': 2, 'c': 1.0}]}


def test_errors():
    with pytest.raises(InputError):
        TrivariatePoly.from_terms(2, [(1, 0, 0, 1.0)])
    with pytest.raises(InputError):
        kippenhahn_poly_exact(numpy.eye(9))
    with pytest.raises(InputError):
        TrivariatePoly.from_json_dict({'degree': 2})
    assert poly_equal(TrivariatePoly(1, numpy.eye(2)), TrivariatePoly(2, numpy.eye(3))) == (False, float('inf'))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2 ** 32 - 1))
def test_unitary_invariance(n, seed):
    rng = numpy.random.default_rng(seed)
    A = random_matrix(rng, n)
    U = haar_unitary(rng, n)
    assert poly_equal(kippenhahn_poly(A), kippenhahn_poly(U @ A @ U.conj().T), 1e-9)[0]


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2 ** 32 - 1))
def test_reconstruction_from_blocks(n, seed):
    # the fitted polynomial reproduces e_d of the eigenvalues at off-grid angles
    rng = numpy.random.default_rng(seed)
    A = random_matrix(rng, n)
    p = kippenhahn_poly(A)
    theta = rng.uniform(0, 2 * numpy.pi)
    ref = char_coeffs_along(A, theta)
    got = p.z_poly(numpy.cos(theta), numpy.sin(theta))
    assert numpy.max(numpy.abs(got - ref)) < 1e-9 * (1 + numpy.abs(ref).max())
