"""Exact Hermite/W-polynomial algebra, moment-matrix certificates and
Wiener-chaos Monte Carlo with exact moment oracles."""

__version__ = "0.1.0"

from .exact_poly import Polynomial, Q, double_factorial, gaussian_expectation
from .hermite import (
    HermiteExpansion,
    hermite,
    hermite_linearize,
    hermite_triple_expectation,
    monomial_hermite_expectation,
)
from .wfamily import (
    FamilyMembershipVerdict,
    WExpansion,
    alpha_coeff,
    expand_in_w,
    q_poly,
    stein_constant,
    t_kl_poly,
    t_poly,
    w_poly,
)
from .moment_forms import (
    InequalityVerdict,
    MomentMatrix,
    MomentSequence,
    build_moment_matrix,
    check_even_bound,
    check_fourth_moment_ineq,
    check_sixth_moment_ineq,
    eigenvalue_diagnostic,
    expected_w,
    kappa6,
    leading_minors,
)
from .chaos_sim import (
    HermiteCombo,
    Mixture,
    ResourceLimitError,
    SecondChaos,
    clt_family_spec,
    collect_samples,
    cumulants_to_moments,
    dtv_bound,
    dtv_estimate,
    exact_moment_values,
    exact_moments,
    hermite_combo_exact_moments,
    mixture_moments,
    sample_chaos,
    second_chaos_cumulant,
    simulate_report,
)
