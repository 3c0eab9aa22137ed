"""Calculus of products of two orthogonal projections on C^n.

Membership tests for the sets {PQ} and {PQP}, canonical and sampled
factorizations, norm minimization, the block parametrization of completing
projections, polar-decomposition structure, Moore-Penrose duality with
oblique projections, the two-projections canonical form, and a seeded
ensemble verification harness exercising every identity.
"""

from .core import PolarDecomposition, Tol, numerical_rank, opnorm, pinv, polar_decompose, positive_sqrt
from .errors import (
    AmbientMismatchError,
    GeometryError,
    InvalidParametrizationError,
    InvariantViolationError,
    MatrixInputError,
    NotInJXError,
    NotInXError,
    NotInYError,
    NotPartialIsometryError,
    NotPSDError,
    NotProjectionError,
    NumericalInconsistencyError,
    ProjProdError,
)
from .halmos import (
    HalmosForm,
    form_pq_norm,
    form_pqp_spectrum,
    halmos_decompose,
    halmos_products,
    halmos_reconstruct,
)
from .isometries import PartialIsometry, fiber_build, is_JX, isometric_part, partial_isometry, piso_build, square_map
from .matio import dump_matrix, load_matrix, matrix_from_obj, matrix_to_obj
from .oblique import (
    ObliqueProj,
    PolarPartsReport,
    dagger_of_product,
    greville_check,
    oblique_projector,
    product_of_dagger,
    projection_polar_parts,
)
from .products import (
    AndoData,
    FactorPair,
    Membership,
    YsClassification,
    ando_build,
    ando_extract,
    canonical_factorization,
    crimmins_residual,
    factorization_unique,
    is_in_X,
    is_in_Y,
    min_norm_pair,
    nelson_neumann_check,
    sample_factorizations,
    sebestyen_residual,
    sqrt_solutions,
    ys_norms,
)
from .subspaces import (
    ANGLE_TOL,
    PairClass,
    Subspace,
    classify_pair,
    complement,
    dixmier_cos,
    friedrichs_cos,
    from_span,
    full_subspace,
    join,
    meet,
    ominus,
    principal_cosines,
    projector,
    subspaces_equal,
    zero_subspace,
)
from .verify import EnsembleSpec, Report, canonical_json, verify_ensemble
from .version import __version__

__all__ = [name for name in dir() if not name.startswith("_")]
