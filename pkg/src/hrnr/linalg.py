"""Complex matrix helpers and a deterministic Hermitian eigensolver.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.  The
eigensolver is a cyclic complex Jacobi method that works on a whole stack of
Hermitian matrices at once, which is how the angle sweeps elsewhere in the
package use it.
"""

from dataclasses import dataclass

import numpy

from .errors import EigenConvergenceError, NonFiniteMatrixError, NonSquareMatrixError

__all__ = ['EigenDecomposition', 'as_matrix', 're_part', 'im_part',
           'rotated_re', 'rotated_re_batch', 'frobenius_norm',
           'eig_hermitian', 'eig_hermitian_batch', 'commutator_norm',
           'JACOBI_REL_TOL', 'JACOBI_MAX_SWEEPS']

JACOBI_REL_TOL = 1e-13
JACOBI_MAX_SWEEPS = 30


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues in descending order and matching unit eigenvectors.

    ``vectors[:, j]`` belongs to ``values[j]``.
    """

    values: numpy.ndarray
    vectors: numpy.ndarray


def as_matrix(A):
    """Validate ``A`` and return it as a square ``complex128`` array."""
    A = numpy.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise NonSquareMatrixError(f'expected a non-empty square matrix, got shape {A.shape}')
    if not numpy.all(numpy.isfinite(A)):
        raise NonFiniteMatrixError('matrix has non-finite entries')
    return A


def _hermitize(H):
    # exact mirror symmetry, real diagonal
    H = 0.5 * (H + numpy.conj(numpy.swapaxes(H, -1, -2)))
    d = numpy.einsum('...ii->...i', H)
    d.imag = 0.0
    return H


def re_part(A):
    """Hermitian part ``(A + A*)/2``."""
    A = as_matrix(A)
    return _hermitize(A)


def im_part(A):
    """``(A - A*)/(2i)``, also Hermitian."""
    A = as_matrix(A)
    return _hermitize(-0.5j * (A - A.conj().T))


def rotated_re(A, theta):
    """``Re(exp(-i theta) A)``, computed as ``cos(theta) Re A + sin(theta) Im A``."""
    A = as_matrix(A)
    return numpy.cos(theta) * re_part(A) + numpy.sin(theta) * im_part(A)


def rotated_re_batch(A, thetas):
    """Stack of ``Re(exp(-i theta) A)`` over the angles ``thetas``."""
    A = as_matrix(A)
    thetas = numpy.asarray(thetas, dtype=float)
    H, K = re_part(A), im_part(A)
    return (numpy.cos(thetas)[:, None, None] * H[None]
            + numpy.sin(thetas)[:, None, None] * K[None])


def frobenius_norm(A):
    return float(numpy.sqrt(numpy.sum(numpy.abs(numpy.asarray(A, dtype=complex)) ** 2)))


def commutator_norm(A):
    """Frobenius norm of ``A*A - AA*``; zero exactly for normal matrices."""
    A = as_matrix(A)
    Ah = A.conj().T
    return frobenius_norm(Ah @ A - A @ Ah)


def _off_norm(H):
    n = H.shape[-1]
    mask = ~numpy.eye(n, dtype=bool)
    return numpy.sqrt(numpy.sum(numpy.abs(H[:, mask]) ** 2, axis=-1))


def _round_robin(n):
    # n-1 rounds (n even) of disjoint pairs covering every pair once
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(a, b), max(a, b)) for a, b in pairs if a < n and b < n]
        if pairs:
            rounds.append((numpy.array([a for a, _ in pairs]), numpy.array([b for _, b in pairs])))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def eig_hermitian_batch(Hs, rel_tol=JACOBI_REL_TOL, max_sweeps=JACOBI_MAX_SWEEPS, guess=None):
    """Diagonalize a stack of Hermitian matrices by cyclic complex Jacobi sweeps.

    Each sweep visits every index pair once in a fixed round-robin order;
    the pairs of one round are disjoint, so their rotations are applied
    together.

    Parameters
    ----------
    Hs : array_like, shape (B, n, n)
        Hermitian matrices.  The stack is re-symmetrized before iterating.
    rel_tol : float
        A matrix counts as converged once its off-diagonal Frobenius norm is
        at most ``rel_tol * ||H||_F``.
    max_sweeps : int
        Sweep cap.
    guess : array_like, shape (B, n, n), optional
        Unitary starting bases (e.g. eigenvectors at a nearby angle); the
        iteration then runs on ``guess* H guess``.

    Returns
    -------
    values : numpy.ndarray, shape (B, n)
        Eigenvalues, descending along the last axis.
    vectors : numpy.ndarray, shape (B, n, n)
        ``vectors[b, :, j]`` is a unit eigenvector for ``values[b, j]`` whose
        largest-modulus component is real and positive.

    Raises
    ------
    EigenConvergenceError
        If some matrix is not diagonal to tolerance after ``max_sweeps``.
    """
    H0 = _hermitize(numpy.array(Hs, dtype=complex, copy=True))
    if H0.ndim != 3 or H0.shape[1] != H0.shape[2]:
        raise NonSquareMatrixError(f'expected shape (B, n, n), got {H0.shape}')
    B, n, _ = H0.shape
    thresh = rel_tol * numpy.sqrt(numpy.sum(numpy.abs(H0) ** 2, axis=(1, 2)))
    if guess is None:
        H = H0
        V = numpy.broadcast_to(numpy.eye(n, dtype=complex), (B, n, n)).copy()
    else:
        V = numpy.array(guess, dtype=complex, copy=True)
        H = _hermitize(numpy.conj(numpy.swapaxes(V, 1, 2)) @ H0 @ V)
    rounds = _round_robin(n)

    off = _off_norm(H) if n > 1 else numpy.zeros(B)
    sweeps = 0
    while numpy.any(off > thresh):
        if sweeps == max_sweeps:
            worst = int(numpy.argmax(off - thresh))
            raise EigenConvergenceError(
                f'Jacobi did not converge after {max_sweeps} sweeps '
                f'(off-diagonal norm {off[worst]:.3e}, target {thresh[worst]:.3e})',
                matrix=H0[worst], off_norm=float(off[worst]))
        for P, Q in rounds:
            hpq = H[:, P, Q]
            r = numpy.abs(hpq)
            active = r > 0.0
            if not numpy.any(active):
                continue
            # angle() stays finite for subnormal entries where hpq / |hpq| overflows
            ph = numpy.exp(1j * numpy.angle(hpq))
            t = 0.5 * numpy.arctan2(2.0 * r, (H[:, P, P] - H[:, Q, Q]).real)
            c, s = numpy.cos(t), numpy.sin(t)
            # G acts on each (p, q) plane as [[c, -s e^{i phi}], [s e^{-i phi}, c]]
            a, b = s * numpy.conj(ph), s * ph
            cp, cq = H[:, :, P], H[:, :, Q]
            H[:, :, P] = c[:, None, :] * cp + a[:, None, :] * cq
            H[:, :, Q] = -b[:, None, :] * cp + c[:, None, :] * cq
            rp, rq = H[:, P, :], H[:, Q, :]
            H[:, P, :] = c[:, :, None] * rp + b[:, :, None] * rq
            H[:, Q, :] = -a[:, :, None] * rp + c[:, :, None] * rq
            H[:, P, Q] = 0.0
            H[:, Q, P] = 0.0
            H[:, P, P] = H[:, P, P].real
            H[:, Q, Q] = H[:, Q, Q].real
            vp, vq = V[:, :, P], V[:, :, Q]
            V[:, :, P] = c[:, None, :] * vp + a[:, None, :] * vq
            V[:, :, Q] = -b[:, None, :] * vp + c[:, None, :] * vq
        sweeps += 1
        off = _off_norm(H)

    values = numpy.einsum('bii->bi', H).real.copy()
    order = numpy.argsort(-values, axis=1, kind='stable')
    values = numpy.take_along_axis(values, order, axis=1)
    V = numpy.take_along_axis(V, order[:, None, :], axis=2)

    lead = numpy.argmax(numpy.abs(V), axis=1)
    pivot = numpy.take_along_axis(V, lead[:, None, :], axis=1)[:, 0, :]
    V = V * (numpy.conj(pivot) / numpy.abs(pivot))[:, None, :]
    return values, V


def eig_hermitian(H, rel_tol=JACOBI_REL_TOL, max_sweeps=JACOBI_MAX_SWEEPS):
    """Eigen-decomposition of one Hermitian matrix (descending eigenvalues)."""
    H = numpy.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise NonSquareMatrixError(f'expected a square matrix, got shape {H.shape}')
    if not numpy.all(numpy.isfinite(H)):
        raise NonFiniteMatrixError('matrix has non-finite entries')
    values, vectors = eig_hermitian_batch(H[None], rel_tol, max_sweeps)
    return EigenDecomposition(values[0], vectors[0])
