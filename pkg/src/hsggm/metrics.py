"""Graph-recovery and partial-correlation accuracy metrics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import GraphEstimate, PartialCorrEstimate


@dataclass(frozen=True)
class ConfusionCounts:
    """Edge-decision counts over the p(p-1)/2 unordered pairs."""

    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self) -> None:
        for name in ("tp", "fp", "tn", "fn"):
            value = getattr(self, name)
            if value < 0:
                raise ValueError(f"{name} must be nonnegative, got {value}")
            object.__setattr__(self, name, int(value))


def confusion(estimate: GraphEstimate, truth: GraphEstimate) -> ConfusionCounts:
    """Compare estimated and true edge sets over the upper triangle."""
    if estimate.p != truth.p:
        raise ValueError(f"estimate has {estimate.p} nodes but truth has {truth.p}")
    iu = np.triu_indices(estimate.p, k=1)
    est = estimate.adjacency[iu]
    tru = truth.adjacency[iu]
    return ConfusionCounts(
        tp=int(np.sum(est & tru)),
        fp=int(np.sum(est & ~tru)),
        tn=int(np.sum(~est & ~tru)),
        fn=int(np.sum(~est & tru)),
    )


def fdr(counts: ConfusionCounts) -> float:
    """False-discovery rate fp / (fp + tp); 0 when nothing is discovered."""
    discovered = counts.fp + counts.tp
    if discovered == 0:
        return 0.0
    return counts.fp / discovered


def tpr(counts: ConfusionCounts) -> float:
    """True-positive rate tp / (tp + fn); 0 when there are no true edges."""
    positives = counts.tp + counts.fn
    if positives == 0:
        return 0.0
    return counts.tp / positives


def mse_split(
    psi_hat: PartialCorrEstimate, psi_true: np.ndarray
) -> tuple[float, float, float]:
    """Squared-error sums of psi_hat against the true partial correlations,
    split by the true-zero indicator.

    Sums run over unordered pairs a < b; entries with psi_true exactly 0 feed
    the zero component, the rest the nonzero component. The total is the sum
    of the two parts (raw sums, not divided by the pair count).
    """
    truth = np.asarray(getattr(psi_true, "psi", psi_true), dtype=float)
    if truth.shape != psi_hat.psi.shape:
        raise ValueError(
            f"psi shapes differ: {psi_hat.psi.shape} vs {truth.shape}"
        )
    iu = np.triu_indices(psi_hat.p, k=1)
    sq = (psi_hat.psi[iu] - truth[iu]) ** 2
    zero_mask = truth[iu] == 0.0
    mse_zero = float(np.sum(sq[zero_mask]))
    mse_nonzero = float(np.sum(sq[~zero_mask]))
    return mse_zero, mse_nonzero, mse_zero + mse_nonzero
