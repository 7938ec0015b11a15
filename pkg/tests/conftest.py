import itertools

import numpy
import pytest


def haar_unitary(rng, n):
    X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    Q, R = numpy.linalg.qr(X)
    d = numpy.diag(R)
    return Q * (d / numpy.abs(d))


def random_matrix(rng, n):
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


def random_normal(rng, n, eigenvalues=None):
    if eigenvalues is None:
        eigenvalues = rng.normal(size=n) + 1j * rng.normal(size=n)
    U = haar_unitary(rng, n)
    return U @ numpy.diag(eigenvalues) @ U.conj().T, numpy.asarray(eigenvalues)


def subset_hull_intersection(eigenvalues, k, slack=1e-9):
    """Lambda_k of a normal matrix as the intersection of all (n-k+1)-point hulls.

    shapely does the hulls and the clipping; each hull is grown by ``slack``
    so that single-point answers survive floating point.
    """
    from shapely.geometry import MultiPoint
    n = len(eigenvalues)
    region = None
    for S in itertools.combinations(range(n), n - k + 1):
        hull = MultiPoint([(eigenvalues[i].real, eigenvalues[i].imag) for i in S]).convex_hull
        hull = hull.buffer(slack, join_style=2)
        region = hull if region is None else region.intersection(hull)
        if region.is_empty:
            return None
    return region


def hausdorff_to_shape(vertices, shape):
    """Hausdorff distance between the hull of ``vertices`` and a shapely shape."""
    from shapely.geometry import MultiPoint, Point
    ours = MultiPoint([(z.real, z.imag) for z in vertices]).convex_hull
    theirs = list(shape.exterior.coords) if shape.geom_type == 'Polygon' else list(shape.coords)
    d1 = max(shape.distance(Point(z.real, z.imag)) for z in vertices)
    d2 = max(ours.distance(Point(c)) for c in theirs)
    return max(d1, d2)


def nearest_match(found, expected, tol):
    """True when every expected point has a found point within ``tol`` and vice versa."""
    found = numpy.asarray(list(found), dtype=complex)
    expected = numpy.asarray(list(expected), dtype=complex)
    if len(found) != len(expected):
        return False
    if len(found) == 0:
        return True
    D = numpy.abs(found[:, None] - expected[None, :])
    return bool(numpy.all(D.min(axis=0) <= tol) and numpy.all(D.min(axis=1) <= tol))


@pytest.fixture
def rng():
    return numpy.random.default_rng(20240229)


_ACCEPTANCE = pytest.StashKey()


@pytest.fixture
def acceptance_log(request):
    return request.config.stash.setdefault(_ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section('acceptance criteria')
        for line in lines:
            terminalreporter.write_line(line)
