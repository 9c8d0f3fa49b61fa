"""End-to-end fit orchestration: node regressions in a worker pool, merged
into graph and partial-correlation estimates."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .comparators import BasadConfig, IWConfig, basad_chain, basad_select, iw_graph, iw_point_estimate
from .data import RawDataset, StandardizedDataset, node_view, standardize
from .graphs import (
    GraphEstimate,
    NeighborhoodCollection,
    PartialCorrEstimate,
    assemble_psi,
    symmetrize,
)
from .horseshoe import HSConfig, run_chain
from .seeds import DOMAIN_BASAD_NODE, DOMAIN_HS_NODE, DOMAIN_IW, child_seed
from .stepup import SelectionHyper, default_max_model_size, rank_predictors, select_model

_METHODS = ("subho", "basad", "iw")
_RULES = ("and", "or")


class NodeFitError(RuntimeError):
    """A node regression failed; aborts the whole fit."""

    def __init__(self, node_index: int, message: str):
        super().__init__(node_index, message)
        self.node_index = node_index
        self.message = message

    def __str__(self) -> str:
        return f"node {self.node_index} failed: {self.message}"


@dataclass(frozen=True)
class FitConfig:
    """Settings of one fit run. ``rule`` is ignored by the joint iw method;
    ``max_model_size`` of None applies the default cap rule."""

    method: str = "subho"
    rule: str = "and"
    seed: int = 0
    workers: int = 1
    n_iter: int = 2000
    burn_in: int = 500
    max_model_size: int | None = None

    def __post_init__(self) -> None:
        if self.method not in _METHODS:
            raise ValueError(f"method must be one of {_METHODS}, got {self.method!r}")
        if self.rule not in _RULES:
            raise ValueError(f"rule must be one of {_RULES}, got {self.rule!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if self.n_iter < 1:
            raise ValueError(f"n_iter must be >= 1, got {self.n_iter}")
        if self.burn_in < 0:
            raise ValueError(f"burn_in must be >= 0, got {self.burn_in}")
        if self.max_model_size is not None and self.max_model_size < 0:
            raise ValueError("max_model_size must be nonnegative")


@dataclass(frozen=True)
class NodeFit:
    """One node's contribution, already mapped to global columns."""

    node_index: int
    beta_row: np.ndarray
    gamma_row: np.ndarray


@dataclass(frozen=True)
class FitResult:
    """Merged output of a fit: the per-node collection (None for iw), the
    symmetrized graph, and the assembled partial correlations."""

    collection: NeighborhoodCollection | None
    graph: GraphEstimate
    psi: PartialCorrEstimate


def _fit_node(args: tuple) -> NodeFit:
    data, a, config = args
    node_seed = child_seed(
        config.seed,
        DOMAIN_HS_NODE if config.method == "subho" else DOMAIN_BASAD_NODE,
        a,
    )
    try:
        view = node_view(data, a)
        if config.method == "subho":
            posterior = run_chain(
                view,
                HSConfig(n_iter=config.n_iter, burn_in=config.burn_in, seed=node_seed),
            )
            beta_local = posterior.beta_mean
            k_max = (
                default_max_model_size(view.n, data.p)
                if config.max_model_size is None
                else min(config.max_model_size, data.p - 1)
            )
            gamma_local = select_model(
                view, rank_predictors(beta_local, k_max), SelectionHyper()
            ).indicators
        else:
            beta_local, probs = basad_chain(
                view,
                BasadConfig(
                    n_iter=config.n_iter, burn_in=config.burn_in, seed=node_seed
                ),
            )
            gamma_local = basad_select(probs).indicators
    except Exception as exc:
        raise NodeFitError(a, str(exc)) from exc
    beta_row = np.zeros(data.p)
    gamma_row = np.zeros(data.p, dtype=bool)
    for j, b in enumerate(view.predictor_indices):
        beta_row[b - 1] = beta_local[j + 1]
        gamma_row[b - 1] = gamma_local[j]
    return NodeFit(node_index=a, beta_row=beta_row, gamma_row=gamma_row)


def fit_nodewise(
    data: StandardizedDataset, config: FitConfig
) -> NeighborhoodCollection:
    """Run all p node regressions and merge them.

    Nodes are dispatched to a process pool (inline when workers = 1); each
    node chain is seeded from (seed, node index) so output is identical for
    every worker count. The first node failure aborts the run.
    """
    tasks = [(data, a, config) for a in range(1, data.p + 1)]
    if config.workers == 1:
        fits = [_fit_node(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            try:
                fits = list(pool.map(_fit_node, tasks))
            except Exception:
                pool.shutdown(cancel_futures=True)
                raise
    beta_all = np.vstack([fit.beta_row for fit in fits])
    gamma_all = np.vstack([fit.gamma_row for fit in fits])
    return NeighborhoodCollection(beta_all=beta_all, gamma_all=gamma_all)


def fit_dataset(raw: RawDataset, config: FitConfig) -> FitResult:
    """Standardize, fit with the configured method, and assemble estimates."""
    data = standardize(raw)
    if config.method == "iw":
        iw_config = IWConfig(seed=child_seed(config.seed, DOMAIN_IW, 0))
        return FitResult(
            collection=None,
            graph=iw_graph(data, iw_config),
            psi=iw_point_estimate(data, iw_config),
        )
    collection = fit_nodewise(data, config)
    return FitResult(
        collection=collection,
        graph=symmetrize(collection, config.rule),
        psi=assemble_psi(collection),
    )
