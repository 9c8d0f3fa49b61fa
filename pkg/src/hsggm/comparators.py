"""Reference estimators: BASAD spike-and-slab regressions and the conjugate
inverse-Wishart joint estimator."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve, solve_triangular
from scipy.special import expit
from scipy.stats import binom

from .data import NodeView, StandardizedDataset
from .graphs import GraphEstimate, PartialCorrEstimate, psi_from_precision
from .horseshoe import ChainError, _inv_gamma
from .stepup import GammaVector


@dataclass(frozen=True)
class BasadConfig:
    """Spike-and-slab chain settings.

    Fields left as None are derived from the data at fit time: the spike and
    slab variances from the sample variance of the response
    (tau0^2 = s2_hat/(10 n), tau1^2 = s2_hat * max(p^2.1/(100 n), ln n)), the
    cap K_cap = max(10, ceil(ln n)), and the prior inclusion probability q_n
    from the binomial-tail equation at that cap. Chain lengths and seed follow
    the Horseshoe defaults.
    """

    n_iter: int = 2000
    burn_in: int = 500
    seed: int = 0
    tau0_sq: float | None = None
    tau1_sq: float | None = None
    q_n: float | None = None
    k_cap: int | None = None
    sigma2_prior_shape: float = 0.1
    sigma2_prior_rate: float = 0.1

    def __post_init__(self) -> None:
        if self.n_iter < 1:
            raise ValueError(f"n_iter must be >= 1, got {self.n_iter}")
        if self.burn_in < 0:
            raise ValueError(f"burn_in must be >= 0, got {self.burn_in}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if (self.tau0_sq is None) != (self.tau1_sq is None):
            raise ValueError("set both or neither of tau0_sq and tau1_sq")
        if self.tau0_sq is not None and not 0 < self.tau0_sq < self.tau1_sq:
            raise ValueError("need 0 < tau0_sq < tau1_sq")
        if self.q_n is not None and not 0 < self.q_n < 1:
            raise ValueError(f"q_n must lie in (0, 1), got {self.q_n}")
        if not self.sigma2_prior_shape > 0:
            raise ValueError("sigma2_prior_shape must be positive")
        if not self.sigma2_prior_rate > 0:
            raise ValueError("sigma2_prior_rate must be positive")


@dataclass(frozen=True)
class IWConfig:
    """Conjugate inverse-Wishart settings: prior degrees of freedom m
    (defaults to p + 2), prior scale V (defaults to the identity), posterior
    draw count, and the central credible level deciding edges."""

    m: int | None = None
    v_scale: np.ndarray | None = None
    n_draws: int = 2000
    ci_level: float = 0.5
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_draws < 1:
            raise ValueError(f"n_draws must be >= 1, got {self.n_draws}")
        if not 0 < self.ci_level <= 1.0:
            raise ValueError(f"ci_level must lie in (0, 1], got {self.ci_level}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if self.v_scale is not None:
            v_mat = np.asarray(self.v_scale, dtype=float)
            if v_mat.ndim != 2 or v_mat.shape[0] != v_mat.shape[1]:
                raise ValueError("prior scale must be a square matrix")
            if not np.array_equal(v_mat, v_mat.T):
                raise ValueError("prior scale must be symmetric")
            object.__setattr__(self, "v_scale", v_mat)


def basad_solve_qn(p: int, k_cap: int, tol: float = 1e-7) -> float:
    """Prior inclusion probability q with P(Binomial(p-1, q) > k_cap) = 0.1,
    found by bisection on (0, 1)."""
    if not 1 <= k_cap < p - 1:
        raise ValueError(
            f"k_cap must lie in 1..p-2 for a root to exist, got k_cap={k_cap}, p={p}"
        )

    def tail(q: float) -> float:
        return float(binom.sf(k_cap, p - 1, q))

    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        value = tail(mid)
        if abs(value - 0.1) <= tol:
            return mid
        if value > 0.1:
            hi = mid
        else:
            lo = mid
    raise RuntimeError("bisection for q_n did not converge")


def _basad_scales(y: np.ndarray, n: int, p: int) -> tuple[float, float]:
    s2_hat = float(np.var(y, ddof=1))
    tau0_sq = s2_hat / (10.0 * n)
    tau1_sq = s2_hat * max(p**2.1 / (100.0 * n), math.log(n))
    return tau0_sq, tau1_sq


def basad_chain(
    view: NodeView, config: BasadConfig
) -> tuple[np.ndarray, np.ndarray]:
    """Gibbs chain alternating beta | gamma, gamma | beta, and sigma2.

    beta | gamma is the ridge-type Gaussian N(A^-1 X'y, s2 A^-1) with A =
    X'X + diag(1/tau_gamma^2), where slot b uses the slab variance tau1^2
    when gamma_b = 1 and the spike variance tau0^2 otherwise; the intercept
    slot is always slab. gamma_b | beta_b is Bernoulli with odds
    (q/(1-q)) N(beta_b; 0, tau1^2 s2) / N(beta_b; 0, tau0^2 s2). Returns the
    posterior-mean coefficients and the per-predictor inclusion frequencies
    over the retained draws.
    """
    design, y = view.design, view.y
    n, n_coef = design.shape
    tau0_sq, tau1_sq = (
        (config.tau0_sq, config.tau1_sq)
        if config.tau0_sq is not None
        else _basad_scales(y, n, n_coef)
    )
    if not 0 < tau0_sq < tau1_sq:
        raise ValueError("derived scales violate 0 < tau0_sq < tau1_sq")
    k_cap = config.k_cap if config.k_cap is not None else max(10, math.ceil(math.log(n)))
    q_n = config.q_n if config.q_n is not None else basad_solve_qn(n_coef, k_cap)

    gram = design.T @ design
    xty = design.T @ y
    rng = np.random.default_rng(config.seed)
    gamma = np.zeros(n_coef, dtype=bool)
    gamma[0] = True
    sigma2 = 1.0
    log_prior_odds = math.log(q_n) - math.log1p(-q_n)
    half_log_ratio = 0.5 * math.log(tau0_sq / tau1_sq)
    total = config.burn_in + config.n_iter
    beta_sum = np.zeros(n_coef)
    gamma_sum = np.zeros(n_coef - 1)
    for it in range(total):
        prior_var = np.where(gamma, tau1_sq, tau0_sq)
        a_mat = gram + np.diag(1.0 / prior_var)
        if not np.isfinite(a_mat).all():
            raise ChainError("non-finite coefficient precision", iteration=it)
        try:
            chol, _ = cho_factor(a_mat, lower=True, check_finite=False)
        except np.linalg.LinAlgError as exc:
            raise ChainError(str(exc), iteration=it) from exc
        mean = cho_solve((chol, True), xty, check_finite=False)
        z = rng.standard_normal(n_coef)
        beta = mean + np.sqrt(sigma2) * solve_triangular(
            chol, z, lower=True, trans="T", check_finite=False
        )

        beta_sq = beta * beta
        log_odds = (
            log_prior_odds
            + half_log_ratio
            + beta_sq[1:] / (2.0 * sigma2) * (1.0 / tau0_sq - 1.0 / tau1_sq)
        )
        gamma[1:] = rng.random(n_coef - 1) < expit(log_odds)

        prior_var = np.where(gamma, tau1_sq, tau0_sq)
        resid = y - design @ beta
        sigma2 = float(
            _inv_gamma(
                rng,
                config.sigma2_prior_shape + 0.5 * (n + n_coef),
                config.sigma2_prior_rate
                + 0.5 * (float(resid @ resid) + float(np.sum(beta_sq / prior_var))),
            )
        )
        if it >= config.burn_in:
            beta_sum += beta
            gamma_sum += gamma[1:]
    return beta_sum / config.n_iter, gamma_sum / config.n_iter


def basad_select(inclusion_probs: np.ndarray) -> GammaVector:
    """Median probability model: include predictor b iff its inclusion
    probability strictly exceeds 1/2."""
    probs = np.asarray(inclusion_probs, dtype=float)
    if probs.ndim != 1:
        raise ValueError("inclusion probabilities must be a vector")
    if probs.size and (probs.min() < 0.0 or probs.max() > 1.0):
        raise ValueError("inclusion probabilities must lie in [0, 1]")
    return GammaVector(indicators=probs > 0.5)


def _data_values(data: StandardizedDataset | np.ndarray) -> np.ndarray:
    return np.asarray(getattr(data, "values", data), dtype=float)


def _posterior_scale(values: np.ndarray, config: IWConfig) -> np.ndarray:
    n, p = values.shape
    v_mat = np.eye(p) if config.v_scale is None else config.v_scale
    if v_mat.shape != (p, p):
        raise ValueError(f"prior scale shape {v_mat.shape} does not match p={p}")
    return v_mat + values.T @ values


def iw_point_estimate(
    data: StandardizedDataset | np.ndarray, config: IWConfig
) -> PartialCorrEstimate:
    """Partial correlations of the plug-in precision estimate
    (n + 1)[V + X'X]^-1."""
    return PartialCorrEstimate(psi=psi_from_precision(iw_omega_hat(data, config)))


def iw_omega_hat(
    data: StandardizedDataset | np.ndarray, config: IWConfig
) -> np.ndarray:
    """Plug-in precision estimate (n + 1)[V + X'X]^-1."""
    values = _data_values(data)
    n = values.shape[0]
    scale = _posterior_scale(values, config)
    try:
        chol, _ = cho_factor(scale, lower=True, check_finite=False)
    except np.linalg.LinAlgError:
        raise ValueError("V + X'X is singular") from None
    omega = (n + 1) * cho_solve((chol, True), np.eye(values.shape[1]))
    return (omega + omega.T) / 2.0


def _resolve_dof(config: IWConfig, p: int) -> int:
    m = config.m if config.m is not None else p + 2
    if not m > p + 1:
        raise ValueError(f"degrees of freedom m must exceed p + 1, got m={m}")
    return m


def iw_sample_posterior(
    data: StandardizedDataset | np.ndarray, config: IWConfig
) -> np.ndarray:
    """Posterior precision draws Omega ~ Wishart(m + n, [V + X'X]^-1).

    Bartlett construction: with T the inverse of the lower Cholesky factor of
    V + X'X, each draw is T' (A A') T where A is lower triangular with
    chi-distributed diagonal and standard-normal subdiagonal entries. Returns
    an (n_draws, p, p) array.
    """
    values = _data_values(data)
    n, p = values.shape
    nu = _resolve_dof(config, p) + n
    scale = _posterior_scale(values, config)
    try:
        chol_scale = np.linalg.cholesky(scale)
    except np.linalg.LinAlgError:
        raise ValueError("V + X'X is singular") from None
    # factor F with F F' = (V + X'X)^-1
    factor = solve_triangular(
        chol_scale, np.eye(p), lower=True, check_finite=False
    ).T
    rng = np.random.default_rng(config.seed)
    draws = np.empty((config.n_draws, p, p))
    df = nu - np.arange(p)
    for i in range(config.n_draws):
        bartlett = np.zeros((p, p))
        bartlett[np.diag_indices(p)] = np.sqrt(rng.chisquare(df))
        bartlett[np.tril_indices(p, k=-1)] = rng.standard_normal(p * (p - 1) // 2)
        root = factor @ bartlett
        draws[i] = root @ root.T
    return draws


def iw_graph(
    data: StandardizedDataset | np.ndarray, config: IWConfig
) -> GraphEstimate:
    """Edge (a, b) iff the central ci_level interval of the posterior partial
    correlation psi_ab excludes 0 strictly."""
    draws = iw_sample_posterior(data, config)
    p = draws.shape[1]
    iu = np.triu_indices(p, k=1)
    psi_draws = np.empty((draws.shape[0], iu[0].size))
    for i, omega in enumerate(draws):
        psi_draws[i] = psi_from_precision(omega)[iu]
    lo_q = 0.5 * (1.0 - config.ci_level)
    lower = np.quantile(psi_draws, lo_q, axis=0)
    upper = np.quantile(psi_draws, 1.0 - lo_q, axis=0)
    adjacency = np.zeros((p, p), dtype=bool)
    edges = (lower > 0.0) | (upper < 0.0)
    adjacency[iu] = edges
    return GraphEstimate(adjacency=adjacency | adjacency.T)
