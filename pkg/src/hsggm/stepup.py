"""Step-up model selection over nested rank-prefix models.

Predictors are ranked by the magnitude of their shrunk posterior-mean
coefficients; only the K + 1 nested prefix models of that ranking are scored,
each by a closed-form conjugate marginal likelihood times a Beta-Bernoulli
model prior, and the highest-scoring model wins.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, solve_triangular
from scipy.special import gammaln

from .data import NodeView


@dataclass(frozen=True)
class SelectionHyper:
    """Hyperparameters of the selection score.

    c, d: shape and rate of the working model's inverse-gamma variance prior.
    alpha_star, beta_star: Beta-Bernoulli model-prior parameters.
    """

    c: float = 1.0
    d: float = 1.0
    alpha_star: float = 1.0
    beta_star: float = 1.0

    def __post_init__(self) -> None:
        for name in ("c", "d", "alpha_star", "beta_star"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{name} must be strictly positive, got {value}")


@dataclass(frozen=True)
class RankedSpace:
    """A ranking of the p - 1 predictors plus the largest model size scored.

    ``ranking`` is a permutation of the 1-based design-column indices
    1..p-1, best predictor first. ``k_max`` bounds the prefix length.
    """

    ranking: tuple[int, ...]
    k_max: int

    def __post_init__(self) -> None:
        ranking = tuple(int(b) for b in self.ranking)
        if sorted(ranking) != list(range(1, len(ranking) + 1)):
            raise ValueError("ranking must be a permutation of 1..p-1")
        if not 0 <= self.k_max <= len(ranking):
            raise ValueError(
                f"k_max must lie in 0..{len(ranking)}, got {self.k_max}"
            )
        object.__setattr__(self, "ranking", ranking)


@dataclass(frozen=True)
class GammaVector:
    """Inclusion indicators for the p - 1 predictors of one node; entry j
    refers to design column j + 1. The intercept is always included and not
    represented."""

    indicators: np.ndarray

    def __post_init__(self) -> None:
        indicators = np.asarray(self.indicators, dtype=bool)
        if indicators.ndim != 1:
            raise ValueError("indicators must be a vector")
        object.__setattr__(self, "indicators", indicators)

    @property
    def size(self) -> int:
        """Model size: number of included predictors."""
        return int(self.indicators.sum())


def default_max_model_size(n: int, p: int) -> int:
    """Default cap on the model size: min(p - 1, max(10, ceil(ln n)))."""
    if n < 1 or p < 2:
        raise ValueError(f"need n >= 1 and p >= 2, got n={n}, p={p}")
    return min(p - 1, max(10, math.ceil(math.log(n))))


def rank_predictors(beta_mean: np.ndarray, k_max: int | None = None) -> RankedSpace:
    """Rank predictors by |beta| descending, ties by ascending index.

    ``beta_mean`` is the full coefficient vector including the intercept in
    slot 0; the intercept is never ranked. ``k_max`` defaults to the full
    predictor count.
    """
    beta_mean = np.asarray(beta_mean, dtype=float)
    if beta_mean.ndim != 1 or beta_mean.shape[0] < 2:
        raise ValueError("beta_mean must hold the intercept plus predictors")
    magnitudes = np.abs(beta_mean[1:])
    order = sorted(range(1, len(beta_mean)), key=lambda b: (-magnitudes[b - 1], b))
    if k_max is None:
        k_max = len(order)
    return RankedSpace(ranking=tuple(order), k_max=k_max)


def log_marginal_likelihood(
    y: np.ndarray, design_gamma: np.ndarray, hyper: SelectionHyper
) -> float:
    """Closed-form log marginal likelihood of one candidate model.

    The working model is y | beta, s2 ~ N(X beta, s2 I) with beta | s2 ~
    N(0, s2 I) over the retained coefficients (intercept included) and
    s2 ~ IG(c, d). Marginalizing gives

        c log d + lgamma(c + n/2) - (n/2) log 2 pi - lgamma(c)
        + (1/2) log|V*| - (c + n/2) log d*

    with V* = (I + X'X)^-1, mu* = V* X'y and d* = d + (y'y - mu*' V*^-1
    mu*)/2. A single Cholesky factorization of I + X'X supplies both the
    determinant and the quadratic form; nothing is explicitly inverted.
    """
    y = np.asarray(y, dtype=float)
    design = np.asarray(design_gamma, dtype=float)
    if design.ndim != 2 or design.shape[0] != y.shape[0]:
        raise ValueError("design rows must match the response length")
    n, m = design.shape
    model_size = m - 1
    gram = design.T @ design
    gram[np.diag_indices(m)] += 1.0
    chol, lower = cho_factor(gram, lower=True, check_finite=False)
    z = solve_triangular(chol, design.T @ y, lower=True, check_finite=False)
    log_det_vstar = -2.0 * float(np.sum(np.log(np.diagonal(chol))))
    d_star = hyper.d + 0.5 * (float(y @ y) - float(z @ z))
    c_star = hyper.c + 0.5 * n
    value = (
        hyper.c * math.log(hyper.d)
        + gammaln(c_star)
        - 0.5 * n * math.log(2.0 * math.pi)
        - gammaln(hyper.c)
        + 0.5 * log_det_vstar
        - c_star * math.log(d_star)
    )
    if not math.isfinite(value):
        raise ValueError(
            f"non-finite log marginal likelihood for model size {model_size}"
        )
    return float(value)


def log_model_prior(p_gamma: int, p: int, hyper: SelectionHyper) -> float:
    """Log Beta-Bernoulli prior mass of a model with p_gamma of p - 1
    predictors included, via log-gamma functions."""
    if not 0 <= p_gamma <= p - 1:
        raise ValueError(f"model size {p_gamma} outside 0..{p - 1}")
    a, b = hyper.alpha_star, hyper.beta_star
    return float(
        gammaln(a + b)
        - gammaln(a)
        - gammaln(b)
        + gammaln(a + p_gamma)
        + gammaln(b + (p - 1) - p_gamma)
        - gammaln(a + b + (p - 1))
    )


def select_model(
    view: NodeView, space: RankedSpace, hyper: SelectionHyper
) -> GammaVector:
    """Score the k_max + 1 nested prefix models and return the best.

    Scores are log_marginal_likelihood + log_model_prior; ties resolve toward
    the smaller model.
    """
    p = view.n_coef
    if len(space.ranking) != p - 1:
        raise ValueError(
            f"ranking covers {len(space.ranking)} predictors, view has {p - 1}"
        )
    best_k = 0
    best_score = -math.inf
    for k in range(space.k_max + 1):
        columns = [0, *space.ranking[:k]]
        score = log_marginal_likelihood(
            view.y, view.design[:, columns], hyper
        ) + log_model_prior(k, p, hyper)
        if score > best_score:
            best_score = score
            best_k = k
    indicators = np.zeros(p - 1, dtype=bool)
    for b in space.ranking[:best_k]:
        indicators[b - 1] = True
    return GammaVector(indicators=indicators)
