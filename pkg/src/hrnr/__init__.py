"""Higher-rank numerical ranges, Kippenhahn polynomials and their linear factors."""

__version__ = '0.1.0'

from .errors import (EigenConvergenceError, FitError, HRNRError, InconsistentVerdictError,
                     InputError, MalformedMatrixError, NonFiniteMatrixError,
                     NonSquareMatrixError, NumericalError, UnboundedLPError)
from .kippenhahn import (TrivariatePoly, kippenhahn_poly, kippenhahn_poly_exact, poly_equal,
                         poly_eval, shift_z, z_root_multiplicity)
from .linalg import (EigenDecomposition, commutator_norm, eig_hermitian, eig_hermitian_batch,
                     im_part, re_part, rotated_re)
from .ranges import (ConvexRegion, CurveSample, SupportProfile, boundary_curve_points, corners,
                     membership, rank_k_range, region_distance, support_profile, tol_geo)
from .structure import (EquivalenceReport, LinearFactor, VSets, corollary2_check,
                        normality_test, real_linear_factors, theorem1_check, v_sets)
