"""Shared construction helpers for the test suite."""

from __future__ import annotations

import numpy as np

from hsggm.data import NodeView
from hsggm.horseshoe import HSState


def frozen_state(
    n_coef: int, lambda2, tau2: float = 1.0, sigma2: float = 1.0
) -> HSState:
    """Chain state with the scale parameters pinned, for conditional-draw
    checks."""
    return HSState(
        beta=np.zeros(n_coef),
        lambda2=np.asarray(lambda2, dtype=float),
        tau2=tau2,
        sigma2=sigma2,
        nu=np.ones(n_coef),
        xi_aux=1.0,
    )


def random_view(
    rng: np.random.Generator, n: int, n_pred: int, y_scale: float = 1.0
) -> NodeView:
    """Node view over random Gaussian predictors and an independent response."""
    design = np.column_stack([np.ones(n), rng.standard_normal((n, n_pred))])
    y = y_scale * rng.standard_normal(n)
    return NodeView(
        node_index=1,
        y=y,
        design=design,
        predictor_indices=tuple(range(2, n_pred + 2)),
    )


def random_pd(rng: np.random.Generator, p: int) -> np.ndarray:
    """Well-conditioned random positive-definite matrix, exactly symmetric."""
    b = rng.standard_normal((p, p))
    m = b @ b.T + p * np.eye(p)
    return (m + m.T) / 2.0
