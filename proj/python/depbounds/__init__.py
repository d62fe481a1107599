"""Energy distances, energy scores and Gini mean differences for
distributions with fixed marginals: estimators, analytic
dependence-uncertainty bounds, and swap-based extremal-copula search."""

from depbounds._core import (
    BoundRow,
    BoundsReport,
    CheckRow,
    Copula,
    DiamondDist,
    DiscreteCopula,
    Estimate,
    FunctionalParams,
    HatComparison,
    JointDist,
    MarginalDist,
    Method,
    RestartTrace,
    SearchProblem,
    SearchResult,
    SymmetryElement,
    apply_symmetry,
    atomic_support,
    atoms_of,
    bounds_report,
    brute_force,
    diamond_cdf,
    diamond_quantile,
    discretize,
    energy_distance,
    energy_score,
    gini_m,
    gini_m_quadrature,
    hyperoctahedral_group,
    local_search,
    lower_bound_s,
    lower_bound_score,
    m2_cross,
    mix,
    parse_copula,
    parse_marginal,
    read_discrete_copula_file,
    run_reproduction,
    s_beta,
    s_beta_point,
    sample,
    sharp_upper_scc,
    sphere_mean_distance_constant,
    symmetrize,
    upper_bound_s,
    verify_hat_counterexample,
    with_uniform_marginals,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
