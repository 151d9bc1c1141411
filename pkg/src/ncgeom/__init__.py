"""ncgeom: numerical non-commutative differential geometry on finite models."""

from .linalg import (
    DEFAULT_TOL, LinearMap, OperatorSpan, adjoint, eig_hermitian, hs_inner,
    hs_norm, kernel_projector, orthonormalize, rank_of, span_contains,
    span_project, span_sum,
)
from .clifford import (
    FermionAlgebra, build_fermion_algebra, charge_conjugation, gamma_pair,
    grading_volume, psi_pair, two_dim_gammas, two_dim_grading,
)
from .su2rep import LevelSpace, algebra_basis, build_level_space, spin_matrices
from .spectral_forms import (
    FormComplex, SpectralData, bigrade_decompose, build_form_complex,
    canonical_rep, check_axioms, cyclicity_check, hermitian_structure,
    integral, natural_involution, pi_forms, reality_check, symplectic_to_kahler,
)
from .geometry import (
    Connection, CotangentBasis, build_cotangent_basis, curvature, ricci,
    rotate_basis, scalar_curvature, solve_levi_civita, torsion,
    unitarity_residual,
)
from .fuzzy_sphere import (
    CalibrationError, SphereModel, build_broken_susy, build_brst, build_sphere,
    h0_dimension, sphere_report,
)
from .nc_torus import (
    DoubledTorus, TorusModel, build_doubled, build_kahler, build_symplectic,
    build_torus, reference_calculus, torus_report,
)

__all__ = [n for n in dir() if not n.startswith("_")]
__version__ = "0.1.0"
