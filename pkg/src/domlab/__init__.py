"""Domination number of Erdős–Rényi random graphs: solvers, closed-form
analytics and seeded Monte Carlo experiments."""

__version__ = "0.1.0"

from .graph import (
    Graph,
    GnpParams,
    VertexSet,
    crucial_set,
    delete_edges,
    is_dominating,
    read_edge_list,
    sample_gnp,
    write_edge_list,
)
from .solver import (
    SolveResult,
    alteration_dominating_set,
    brute_force_domination_number,
    domination_number_exact,
    greedy_dominating_set,
)
from .analytics import (
    ConcentrationPrediction,
    chebyshev_nonexistence_bound,
    critical_r_hat,
    crucial_edge_law,
    deletion_probability,
    dense_r_hat,
    log_expectation_ratio,
    log_expected_dominating_sets,
    log_variance_term,
    predicted_interval,
    survival_probability,
    talagrand_tail_product_bound,
)
