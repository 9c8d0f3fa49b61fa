"""Gibbs sampler for one node-wise regression under the Horseshoe prior.

The model for a node view with response y and design X (n rows, p columns
including the intercept) is

    y | beta, s2          ~ N(X beta, s2 I)
    beta_b | lam_b, tau, s ~ N(0, s2 tau^2 lam_b^2)   for every slot b
    lam_b, tau             ~ half-Cauchy(0, 1)
    s2                     ~ IG(shape, rate)

with the half-Cauchy scales represented through inverse-gamma auxiliaries
(nu_b for each lam_b, xi for tau), so every conditional is either Gaussian or
inverse gamma. The intercept slot carries the same prior as the predictors;
column centering keeps its posterior near zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve, solve_triangular

from .data import NodeView

# Variance-type draws are clamped to this range. A node with no signal sends
# the global scale on a log-space excursion that can underflow float64 and
# poison the factorization with 0 * inf; inside these bounds the clamp cannot
# change any estimand by a representable amount.
_SCALE_FLOOR = 1e-100
_SCALE_CEIL = 1e100


class ChainError(RuntimeError):
    """Numerical failure inside a chain, carrying the iteration index."""

    def __init__(self, message: str, iteration: int):
        super().__init__(f"{message} at iteration {iteration}")
        self.iteration = iteration


@dataclass(frozen=True)
class HSConfig:
    """Chain-length, seeding, and prior settings for one node chain.

    ``fast_sampler`` selects the coefficient update route: "auto" uses the
    O(n^2 p) data-augmentation draw exactly when the design is wider than
    tall (p > n) and the direct p x p factorization otherwise; "direct" or
    "fast" force a route.
    """

    n_iter: int = 2000
    burn_in: int = 500
    seed: int = 0
    sigma2_prior_shape: float = 0.1
    sigma2_prior_rate: float = 0.1
    fast_sampler: str = "auto"

    def __post_init__(self) -> None:
        if self.n_iter < 1:
            raise ValueError(f"n_iter must be >= 1, got {self.n_iter}")
        if self.burn_in < 0:
            raise ValueError(f"burn_in must be >= 0, got {self.burn_in}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if not self.sigma2_prior_shape > 0:
            raise ValueError("sigma2_prior_shape must be positive")
        if not self.sigma2_prior_rate > 0:
            raise ValueError("sigma2_prior_rate must be positive")
        if self.fast_sampler not in ("auto", "direct", "fast"):
            raise ValueError(
                f"fast_sampler must be auto, direct, or fast, got {self.fast_sampler!r}"
            )


@dataclass
class HSState:
    """One point of the Gibbs chain. All scale parameters stay strictly
    positive at every iteration."""

    beta: np.ndarray
    lambda2: np.ndarray
    tau2: float
    sigma2: float
    nu: np.ndarray
    xi_aux: float


@dataclass(frozen=True)
class HSPosterior:
    """Posterior summary of one chain: the coefficient mean over the retained
    draws, and optionally the draws themselves."""

    beta_mean: np.ndarray
    beta_draws: np.ndarray | None = None

    def __post_init__(self) -> None:
        beta_mean = np.asarray(self.beta_mean, dtype=float)
        object.__setattr__(self, "beta_mean", beta_mean)
        if self.beta_draws is not None:
            draws = np.asarray(self.beta_draws, dtype=float)
            if draws.ndim != 2 or draws.shape[1] != beta_mean.shape[0]:
                raise ValueError("beta_draws must be n_iter x len(beta_mean)")
            if np.abs(draws.mean(axis=0) - beta_mean).max() > 1e-12:
                raise ValueError("beta_mean must equal the mean of the draws")
            object.__setattr__(self, "beta_draws", draws)


def initial_state(n_coef: int) -> HSState:
    """Deterministic chain start: beta = 0, every scale parameter 1."""
    return HSState(
        beta=np.zeros(n_coef),
        lambda2=np.ones(n_coef),
        tau2=1.0,
        sigma2=1.0,
        nu=np.ones(n_coef),
        xi_aux=1.0,
    )


def _inv_gamma(rng: np.random.Generator, shape, rate):
    """Inverse-gamma draw(s), clamped away from under/overflow."""
    return np.clip(rate / rng.gamma(shape), _SCALE_FLOOR, _SCALE_CEIL)


def _use_fast(config: HSConfig, n: int, n_coef: int) -> bool:
    if config.fast_sampler == "auto":
        return n_coef > n
    return config.fast_sampler == "fast"


def sample_beta_direct(
    view: NodeView, state: HSState, rng: np.random.Generator
) -> np.ndarray:
    """One exact draw of beta from N(A^-1 X'y, s2 A^-1) by factorizing the
    p x p matrix A = X'X + (Lambda*)^-1 directly."""
    design = view.design
    return _beta_direct(
        design.T @ design, design.T @ view.y, state, rng
    )


def _beta_direct(
    gram: np.ndarray, xty: np.ndarray, state: HSState, rng: np.random.Generator
) -> np.ndarray:
    a_mat = gram + np.diag(1.0 / (state.tau2 * state.lambda2))
    if not np.isfinite(a_mat).all():
        raise FloatingPointError("non-finite entries in the coefficient precision")
    chol, _ = cho_factor(a_mat, lower=True, check_finite=False)
    mean = cho_solve((chol, True), xty, check_finite=False)
    z = rng.standard_normal(xty.shape[0])
    return mean + np.sqrt(state.sigma2) * solve_triangular(
        chol, z, lower=True, trans="T", check_finite=False
    )


def sample_beta_fast(
    view: NodeView, state: HSState, rng: np.random.Generator
) -> np.ndarray:
    """One exact draw of beta from N(A^-1 X'y, s2 A^-1) at O(n^2 p) cost.

    Scale-mixture data augmentation: sample u from the prior N(0, s2 Lambda*)
    and an independent standard-normal n-vector delta, solve the n x n system
    (X Lambda* X' + I) w = y/s - (X u / s + delta), and correct the prior draw
    with beta = u + s Lambda* X' w.
    """
    design, y = view.design, view.y
    n = view.n
    sigma = np.sqrt(state.sigma2)
    lam_star = state.tau2 * state.lambda2
    u = np.sqrt(state.sigma2 * lam_star) * rng.standard_normal(view.n_coef)
    delta = rng.standard_normal(n)
    v = design @ u / sigma + delta
    inner = (design * lam_star) @ design.T
    inner[np.diag_indices(n)] += 1.0
    if not np.isfinite(inner).all():
        raise FloatingPointError("non-finite entries in the inner system")
    try:
        chol, _ = cho_factor(inner, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise FloatingPointError(f"singular inner system: {exc}") from None
    w = cho_solve((chol, True), y / sigma - v, check_finite=False)
    return u + sigma * lam_star * (design.T @ w)


def gibbs_step(
    state: HSState, view: NodeView, config: HSConfig, rng: np.random.Generator
) -> HSState:
    """One full Gibbs scan: beta, then sigma2, lambda2, nu, tau2, xi.

    beta is drawn from N(A^-1 X'y, s2 A^-1) with A = X'X + (Lambda*)^-1 and
    Lambda* = diag(tau2 * lambda2); the scale parameters from their
    inverse-gamma full conditionals:

        sigma2 | .  ~ IG(shape + (n + p)/2, rate + (RSS + sum b^2/(t2 l2))/2)
        lam_b2 | .  ~ IG(1, 1/nu_b + b_b^2 / (2 t2 s2))
        nu_b   | .  ~ IG(1, 1 + 1/lam_b2)
        tau2   | .  ~ IG((p + 1)/2, 1/xi + sum(b^2/lam2) / (2 s2))
        xi     | .  ~ IG(1, 1 + 1/tau2)
    """
    design = view.design
    try:
        return _gibbs_step(
            state,
            design,
            view.y,
            design.T @ design,
            design.T @ view.y,
            _use_fast(config, view.n, view.n_coef),
            view,
            config,
            rng,
        )
    except (np.linalg.LinAlgError, FloatingPointError) as exc:
        raise ChainError(str(exc), iteration=0) from exc


def _gibbs_step(
    state: HSState,
    design: np.ndarray,
    y: np.ndarray,
    gram: np.ndarray,
    xty: np.ndarray,
    fast: bool,
    view: NodeView,
    config: HSConfig,
    rng: np.random.Generator,
) -> HSState:
    n, n_coef = design.shape
    if fast:
        beta = sample_beta_fast(view, state, rng)
    else:
        beta = _beta_direct(gram, xty, state, rng)
    tau2, lambda2 = state.tau2, state.lambda2

    resid = y - design @ beta
    beta_sq = beta * beta
    prior_quad = float(np.sum(beta_sq / (tau2 * lambda2)))
    sigma2 = float(
        _inv_gamma(
            rng,
            config.sigma2_prior_shape + 0.5 * (n + n_coef),
            config.sigma2_prior_rate + 0.5 * (float(resid @ resid) + prior_quad),
        )
    )
    lambda2 = _inv_gamma(rng, 1.0, 1.0 / state.nu + beta_sq / (2.0 * tau2 * sigma2))
    nu = _inv_gamma(rng, 1.0, 1.0 + 1.0 / lambda2)
    tau2 = float(
        _inv_gamma(
            rng,
            0.5 * (n_coef + 1),
            1.0 / state.xi_aux + float(np.sum(beta_sq / lambda2)) / (2.0 * sigma2),
        )
    )
    xi_aux = float(_inv_gamma(rng, 1.0, 1.0 + 1.0 / tau2))
    return HSState(
        beta=beta, lambda2=lambda2, tau2=tau2, sigma2=sigma2, nu=nu, xi_aux=xi_aux
    )


def run_chain(
    view: NodeView, config: HSConfig, keep_draws: bool = False
) -> HSPosterior:
    """Run burn_in + n_iter Gibbs scans from the deterministic initial state
    and average the retained coefficient draws.

    Identical (seed, data, config) produce bit-identical output. Numerical
    failures abort with the iteration index.
    """
    design = view.design
    gram = design.T @ design
    xty = design.T @ view.y
    fast = _use_fast(config, view.n, view.n_coef)
    rng = np.random.default_rng(config.seed)
    state = initial_state(view.n_coef)
    total = config.burn_in + config.n_iter
    beta_sum = np.zeros(view.n_coef)
    draws = np.empty((config.n_iter, view.n_coef)) if keep_draws else None
    for it in range(total):
        try:
            state = _gibbs_step(
                state, design, view.y, gram, xty, fast, view, config, rng
            )
        except (np.linalg.LinAlgError, FloatingPointError) as exc:
            raise ChainError(str(exc), iteration=it) from exc
        if it >= config.burn_in:
            beta_sum += state.beta
            if draws is not None:
                draws[it - config.burn_in] = state.beta
    return HSPosterior(beta_mean=beta_sum / config.n_iter, beta_draws=draws)
