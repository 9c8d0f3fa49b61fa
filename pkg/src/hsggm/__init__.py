"""Sparse Gaussian graphical models via parallel Bayesian node-wise
regressions.

Each node is regressed on all others under a Horseshoe shrinkage prior; a
step-up search over the magnitude ranking of the shrunk coefficients picks
each neighborhood, and the directed neighborhoods are symmetrized into a
graph and a partial-correlation matrix. Spike-and-slab (BASAD) node
regressions and a conjugate inverse-Wishart estimator serve as comparators,
with simulation generators and recovery metrics to benchmark them.
"""

from .comparators import (
    BasadConfig,
    IWConfig,
    basad_chain,
    basad_select,
    basad_solve_qn,
    iw_graph,
    iw_omega_hat,
    iw_point_estimate,
    iw_sample_posterior,
)
from .data import (
    NodeView,
    RawDataset,
    StandardizedDataset,
    load_csv,
    node_view,
    standardize,
    write_csv,
)
from .graphs import (
    GraphEstimate,
    NeighborhoodCollection,
    PartialCorrEstimate,
    assemble_psi,
    connectivity_scores,
    psi_from_precision,
    read_edge_list,
    roundtrip_psi,
    symmetrize,
    top_k,
    write_edge_list,
)
from .horseshoe import (
    ChainError,
    HSConfig,
    HSPosterior,
    HSState,
    gibbs_step,
    initial_state,
    run_chain,
    sample_beta_direct,
    sample_beta_fast,
)
from .metrics import ConfusionCounts, confusion, fdr, mse_split, tpr
from .pipeline import FitConfig, FitResult, NodeFit, NodeFitError, fit_dataset, fit_nodewise
from .seeds import child_seed
from .simulate import (
    ConvergenceError,
    GroundTruth,
    Scenario,
    ar1_truth,
    gwishart_sample,
    mvn_sample,
    parse_scenario,
    random_graph,
    rescale_unit_diag,
    scenario_truth,
    write_scenario,
)
from .stepup import (
    GammaVector,
    RankedSpace,
    SelectionHyper,
    default_max_model_size,
    log_marginal_likelihood,
    log_model_prior,
    rank_predictors,
    select_model,
)

__version__ = "0.1.0"

__all__ = [
    "BasadConfig",
    "ChainError",
    "ConfusionCounts",
    "ConvergenceError",
    "FitConfig",
    "FitResult",
    "GammaVector",
    "GraphEstimate",
    "GroundTruth",
    "HSConfig",
    "HSPosterior",
    "HSState",
    "IWConfig",
    "NeighborhoodCollection",
    "NodeFit",
    "NodeFitError",
    "NodeView",
    "PartialCorrEstimate",
    "RankedSpace",
    "RawDataset",
    "Scenario",
    "SelectionHyper",
    "StandardizedDataset",
    "ar1_truth",
    "assemble_psi",
    "basad_chain",
    "basad_select",
    "basad_solve_qn",
    "child_seed",
    "confusion",
    "connectivity_scores",
    "default_max_model_size",
    "fdr",
    "fit_dataset",
    "fit_nodewise",
    "gibbs_step",
    "gwishart_sample",
    "initial_state",
    "iw_graph",
    "iw_omega_hat",
    "iw_point_estimate",
    "iw_sample_posterior",
    "load_csv",
    "log_marginal_likelihood",
    "log_model_prior",
    "mse_split",
    "mvn_sample",
    "node_view",
    "parse_scenario",
    "psi_from_precision",
    "random_graph",
    "rank_predictors",
    "read_edge_list",
    "rescale_unit_diag",
    "roundtrip_psi",
    "run_chain",
    "sample_beta_direct",
    "sample_beta_fast",
    "scenario_truth",
    "select_model",
    "standardize",
    "symmetrize",
    "top_k",
    "tpr",
    "write_csv",
    "write_edge_list",
    "write_scenario",
]
