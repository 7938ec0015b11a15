"""Exception hierarchy shared by the library and the command line tool."""


class HRNRError(Exception):
    """Base class for all errors raised by :mod:`hrnr`."""

    exit_code = 3


class InputError(HRNRError, ValueError):
    """Invalid user input (bad argument, malformed file, ...)."""

    exit_code = 2


class MalformedMatrixError(InputError):
    exit_code = 2


class NonSquareMatrixError(InputError):
    exit_code = 4


class NonFiniteMatrixError(InputError):
    exit_code = 5


class NumericalError(HRNRError):
    """A computation did not reach its accuracy target."""

    exit_code = 3


class EigenConvergenceError(NumericalError):
    """The Jacobi sweeps hit the sweep cap before the off-diagonal mass vanished.

    Attributes
    ----------
    matrix : numpy.ndarray
        The (first) offending Hermitian matrix.
    off_norm : float
        Off-diagonal Frobenius norm reached when the iteration stopped.
    """

    def __init__(self, msg, matrix, off_norm):
        super().__init__(msg)
        self.matrix = matrix
        self.off_norm = off_norm


class FitError(NumericalError):
    """Least-squares recovery of a coefficient block failed its residual check."""

    def __init__(self, msg, degree, residual):
        super().__init__(msg)
        self.degree = degree
        self.residual = residual


class UnboundedLPError(NumericalError):
    """The half-plane family leaves an angular gap of at least pi."""


class InconsistentVerdictError(NumericalError):
    """The three equivalence conditions disagree on a matrix pair.

    The ``report`` attribute carries every residual so the disagreement can
    be diagnosed.
    """

    def __init__(self, msg, report):
        super().__init__(msg)
        self.report = report
