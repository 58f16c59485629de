"""Invariant-form algebra, co-flow dynamics and stability reports.

Exact rational exterior algebra on a 40-monomial invariant basis, the
induced one-parameter family of co-closed structures with its torsion and
Laplacian, two flow flavors integrated adaptively, spectral classification
of the critical points, and exact multiplicity counts for the round
7-sphere index bound.
"""

from .coflow_dynamics import (
    FLAVORS,
    MODIFIED,
    NORMALIZED,
    FlowConfig,
    FlowState,
    Trajectory,
    hitchin_rate,
    hitchin_rate_check,
    hitchin_volume,
    integrate,
    monomial_rates,
    reduced_xy_rhs,
    rhs_modified,
    rhs_normalized,
    scaling_ode_rhs,
    state_rates,
    symbolic_rhs_crosscheck,
    tau0_state,
)
from .g2_ansatz import (
    G2Ansatz,
    TorsionData,
    build,
    curl_invariant,
    dphi_closed_form,
    identity_suite,
    laplacian_closed_form,
    laplacian_psi,
    tau0,
    torsion,
    type_project_4form,
    verify_dtau3_lemma,
)
from .invariant_forms import (
    TOP,
    UNIT,
    GeometryParams,
    InvariantForm,
    Monomial,
    algebra_checks,
    all_monomials,
    dstar_on_4forms,
    exterior_derivative,
    form,
    hodge_star,
    inner_product,
    monomial_weight,
    random_params,
    total_integral,
    volume_form,
    wedge,
)
from .sphere_spectrum import (
    MultiplicityRecord,
    dim_lower,
    in_window,
    index_lower_bound,
    level_mu,
    multiplicity_d,
    multiplicity_d0,
    multiplicity_d1,
    sphere_eigenvalue,
)
from .stability import (
    LABEL_PRINCIPAL,
    LABEL_RESCALED,
    PSI_MINUS,
    PSI_PLUS,
    CriticalPoint,
    Eigenpair,
    PsiIdentityReport,
    SpectralReport,
    WindowVerdict,
    analytic_jacobian,
    classify,
    eigen3,
    find_critical_points,
    jacobian,
    newton_refine,
    state_direction,
    variation_to_form,
    verify_psi_identities,
    window_mu,
    window_verdict,
)

__version__ = "0.1.0"

__all__ = [
    "FLAVORS",
    "MODIFIED",
    "NORMALIZED",
    "FlowConfig",
    "FlowState",
    "Trajectory",
    "hitchin_rate",
    "hitchin_rate_check",
    "hitchin_volume",
    "integrate",
    "monomial_rates",
    "reduced_xy_rhs",
    "rhs_modified",
    "rhs_normalized",
    "scaling_ode_rhs",
    "state_rates",
    "symbolic_rhs_crosscheck",
    "tau0_state",
    "G2Ansatz",
    "TorsionData",
    "build",
    "curl_invariant",
    "dphi_closed_form",
    "identity_suite",
    "laplacian_closed_form",
    "laplacian_psi",
    "tau0",
    "torsion",
    "type_project_4form",
    "verify_dtau3_lemma",
    "TOP",
    "UNIT",
    "GeometryParams",
    "InvariantForm",
    "Monomial",
    "algebra_checks",
    "all_monomials",
    "dstar_on_4forms",
    "exterior_derivative",
    "form",
    "hodge_star",
    "inner_product",
    "monomial_weight",
    "random_params",
    "total_integral",
    "volume_form",
    "wedge",
    "MultiplicityRecord",
    "dim_lower",
    "in_window",
    "index_lower_bound",
    "level_mu",
    "multiplicity_d",
    "multiplicity_d0",
    "multiplicity_d1",
    "sphere_eigenvalue",
    "LABEL_PRINCIPAL",
    "LABEL_RESCALED",
    "PSI_MINUS",
    "PSI_PLUS",
    "CriticalPoint",
    "Eigenpair",
    "PsiIdentityReport",
    "SpectralReport",
    "WindowVerdict",
    "analytic_jacobian",
    "classify",
    "eigen3",
    "find_critical_points",
    "jacobian",
    "newton_refine",
    "state_direction",
    "variation_to_form",
    "verify_psi_identities",
    "window_mu",
    "window_verdict",
    "__version__",
]
