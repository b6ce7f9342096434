"""Exact max-times linear algebra: cycle means, eigenvectors, joint spectral
radii, matrix polynomials and switched max-linear dynamics."""

from .core import (
    EXACT,
    FLOAT,
    Family,
    MaxMatrix,
    Permutation,
    RootValue,
    cmp_root,
    is_generalized_permutation,
    mat_power,
    oplus,
    oplus_all,
    otimes,
    permute_similarity,
    scalar,
    scalar_scale,
)
from .dynamics import (
    CommonEigenSystem,
    check_poly_fixed_point,
    common_eigenvectors,
    cone_decompose,
    decay_certificate,
    matrix_period,
    orbit,
    periodic_point_implies_unit_mu,
    predicted_limit,
    verify_common_eigenvector,
    word_product,
)
from .errors import EnumerationLimitError, MaxAlgebraError, PreconditionError, ShapeError
from .graph import (
    enumerate_cycle_means,
    find_common_triangularizer,
    frobenius_normal_form,
    is_irreducible,
    max_cycle_mean,
    scc_decompose,
)
from .polynomial import (
    MaxPoly,
    ScalarPoly,
    check_chain_single,
    check_family_bounds,
    companion,
    poly_eta,
    poly_eta_hat,
    poly_eval,
    poly_multiply,
    poly_spectrum,
    scalar_poly_spectrum,
    triangular_jsr,
)
from .spectral import (
    eigen_spectrum,
    eigenvectors_for,
    eta,
    eta_hat,
    eta_hat_estimate,
    eta_oracle,
    jsr,
    jsr_bracket,
    kleene_star,
)

__all__ = [name for name in dir() if not name.startswith("_")]
