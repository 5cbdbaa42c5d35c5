"""Exact operator algebra on quasi-exponential and quasi-polynomial spaces.

Everything is computed over Q or Q(i) with exact arithmetic; the package
covers discrete/differential Wronskians and exponents, fundamental and
quotient difference/differential operators, the duality transforms between
quasi-exponential and quasi-polynomial data, pseudo-difference operator
inversion, and the matching of Gaudin-type and dynamical-type Hamiltonian
eigenvalues in the fermionic realization.
"""

from .scalars import GaussianRational, Q, QI, FIELDS, format_scalar, parse_scalar
from .poly import Poly, RationalFunction, poly_shift, binomial_series, linear_roots, poly_gcd
from .series import SeriesAtInfinity, rf_series_at_infinity, binomial_power_series
from .linalg import det, echelon, rank_profile, nullspace, solve
from .spaces import (
    Partition,
    QuasiExponential,
    QuasiMonomial,
    QuasiExpSpace,
    QuasiPolySpace,
    DifferenceData,
    PolyData,
    discrete_wronskian,
    discrete_wronskian_left,
    wronskian,
    discrete_exponents,
    extract_difference_data,
    extract_poly_data,
)
from .oreops import (
    DifferenceOperator,
    DifferentialOperator,
    QuotientPair,
    apply_difference,
    apply_differential,
    fundamental_difference_operator,
    fundamental_differential_operator,
    factorize_difference,
    formal_conjugate_difference,
    formal_conjugate_differential,
    conjugate_kernel_functions,
    right_divide,
    hat_difference_operator,
    hat_differential_operator,
    quotient_conjugate_space,
    quotient_conjugate_space_left,
    quotient_difference_operator,
    quotient_differential_operator,
    regularize_difference,
    regularize_differential,
    regularizer_from_bases,
    regularizer_from_exponents,
    bispectral_transform,
    kernel_quasi_exponential,
    kernel_quasi_monomial,
    t1_map,
    t2_map,
    t3_map,
    t3_inverse,
)
from .bethe import (
    EigenvalueReport,
    GaudinBAEReport,
    SectorShape,
    XXXBAEReport,
    dynamical_eigenvalue_g,
    expansion_at_infinity,
    extend_V,
    extend_W,
    fertility_check,
    gaudin_bae_residual,
    gaudin_eigenvalue_h,
    make_block_space,
    make_rank2_space,
    make_shared_root_space,
    make_squarefree_space,
    random_sector_space,
    reduce_V,
    u_polys_from_W,
    verify_h_eq_minus_g,
    xxx_bae_residual,
    y_polys_from_V,
)
from .pseudodiff import (
    IdentityCheck,
    InversePairReport,
    PseudoDifferenceOperator,
    cofactor_regularizer,
    fundamental_psd,
    psd_ddagger,
    psd_invert,
    psd_mul,
    tau_embed,
    verify_inverse_pair,
)
from .fermionrep import (
    OperatorMatrix,
    WedgeMonomial,
    WeightSubspace,
    build_weight_subspace,
    dynamical_matrix,
    eigenvalue_parameters,
    gaudin_matrix,
    spectrum_membership,
    verify_hamiltonian_duality,
)

__version__ = "0.1.0"
