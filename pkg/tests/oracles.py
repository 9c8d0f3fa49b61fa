"""Independent numerical oracles used to freeze expected test values.

Every routine here deliberately takes a different computational route from
the library code it checks: adaptive quadrature instead of closed forms, an
n-space eigendecomposition instead of a p-space Cholesky, exact integer
binomial sums instead of scipy's survival function, and textbook moment
formulas for Monte-Carlo error bars.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import nquad, quad


def log_ml_quad(y: np.ndarray, design: np.ndarray, c: float, d: float) -> float:
    """Log marginal likelihood of the conjugate working model, by adaptive
    1-D quadrature over log sigma2.

    Model: y | beta, s2 ~ N(X beta, s2 I), beta | s2 ~ N(0, s2 I) over all
    design columns, s2 ~ IG(c, d). Marginalizing beta in observation space
    gives y | s2 ~ N(0, s2 (I + X X')); that n x n covariance is handled by
    eigendecomposition, a route disjoint from any p-space factorization.
    """
    y = np.asarray(y, dtype=float)
    x = np.asarray(design, dtype=float)
    n = y.shape[0]
    m_mat = np.eye(n) + x @ x.T
    evals, evecs = np.linalg.eigh(m_mat)
    w = evecs.T @ y
    log_det = float(np.sum(np.log(evals)))
    quad_form = float(np.sum(w * w / evals))

    def log_integrand(t: float) -> float:
        # t = log s2; the trailing + t is the Jacobian of s2 = e^t
        s2 = math.exp(t)
        return (
            -0.5 * n * math.log(2.0 * math.pi * s2)
            - 0.5 * log_det
            - quad_form / (2.0 * s2)
            + c * math.log(d)
            - math.lgamma(c)
            - (c + 1.0) * t
            - d / s2
            + t
        )

    grid = np.linspace(-40.0, 40.0, 4001)
    values = np.array([log_integrand(t) for t in grid])
    peak = int(np.argmax(values))
    t0, shift = float(grid[peak]), float(values[peak])
    integral, abserr = quad(
        lambda t: math.exp(log_integrand(t) - shift),
        t0 - 60.0,
        t0 + 60.0,
        epsabs=0.0,
        epsrel=1e-10,
        limit=400,
    )
    if not integral > 0 or abserr > 1e-8 * integral:
        raise ArithmeticError(f"quadrature failed: integral={integral}, err={abserr}")
    return shift + math.log(integral)


def log_ml_bruteforce(y: np.ndarray, design: np.ndarray, c: float, d: float) -> float:
    """Same marginal likelihood with beta also integrated numerically.

    Full (m + 1)-dimensional adaptive quadrature over the coefficients and
    log sigma2; practical only for one or two design columns. Serves to
    validate :func:`log_ml_quad`, whose beta integral is analytic.
    """
    y = np.asarray(y, dtype=float)
    x = np.asarray(design, dtype=float)
    n, m = x.shape
    if m > 2:
        raise ValueError("brute-force route is limited to two design columns")
    ridge = np.linalg.solve(x.T @ x + np.eye(m), x.T @ y)
    resid0 = y - x @ ridge
    s2_mode = (float(resid0 @ resid0) + float(ridge @ ridge) + 2.0 * d) / (n + m + 2.0)
    t_mode = math.log(s2_mode)
    width = 25.0 * max(1.0, math.sqrt(s2_mode))

    def log_integrand(*args: float) -> float:
        beta = np.array(args[:m])
        t = args[m]
        s2 = math.exp(t)
        resid = y - x @ beta
        return (
            -0.5 * n * math.log(2.0 * math.pi * s2)
            - float(resid @ resid) / (2.0 * s2)
            - 0.5 * m * math.log(2.0 * math.pi * s2)
            - float(beta @ beta) / (2.0 * s2)
            + c * math.log(d)
            - math.lgamma(c)
            - (c + 1.0) * t
            - d / s2
            + t
        )

    shift = log_integrand(*ridge, t_mode)
    ranges = [(float(ridge[j]) - width, float(ridge[j]) + width) for j in range(m)]
    ranges.append((t_mode - 30.0, t_mode + 30.0))
    integral, abserr = nquad(
        lambda *args: math.exp(log_integrand(*args) - shift),
        ranges,
        opts={"limit": 200, "epsabs": 1e-9, "epsrel": 1e-9},
    )
    if not integral > 0 or abserr > 2e-7 * integral:
        raise ArithmeticError(f"quadrature failed: integral={integral}, err={abserr}")
    return shift + math.log(integral)


def gaussian_mean_se(cov: np.ndarray, n_draws: int) -> np.ndarray:
    """Standard error of the empirical mean of n_draws Gaussian vectors."""
    return np.sqrt(np.diagonal(np.asarray(cov, dtype=float)) / n_draws)


def gaussian_cov_se(cov: np.ndarray, n_draws: int) -> np.ndarray:
    """Entrywise standard error of the empirical covariance of n_draws
    Gaussian vectors: Var(S_ij) = (C_ii C_jj + C_ij^2) / n."""
    cov = np.asarray(cov, dtype=float)
    diag = np.diagonal(cov)
    return np.sqrt((np.outer(diag, diag) + cov * cov) / n_draws)


def wishart_mean(nu: float, scale: np.ndarray) -> np.ndarray:
    """Mean of Wishart(nu, scale)."""
    return nu * np.asarray(scale, dtype=float)


def wishart_mean_se(nu: float, scale: np.ndarray, n_draws: int) -> np.ndarray:
    """Entrywise standard error of the empirical mean of n_draws Wishart
    matrices: Var(W_ij) = nu (S_ij^2 + S_ii S_jj)."""
    scale = np.asarray(scale, dtype=float)
    diag = np.diagonal(scale)
    return np.sqrt(nu * (scale * scale + np.outer(diag, diag)) / n_draws)


def inverse_wishart_mean(scale: np.ndarray, nu: float) -> np.ndarray:
    """Mean of the inverse-Wishart with scale matrix ``scale`` and nu degrees
    of freedom: scale / (nu - p - 1)."""
    scale = np.asarray(scale, dtype=float)
    return scale / (nu - scale.shape[0] - 1.0)


def binomial_tail(trials: int, k: int, q: float) -> float:
    """Exact P(Binomial(trials, q) > k) via integer binomial coefficients."""
    return float(
        sum(
            math.comb(trials, j) * q**j * (1.0 - q) ** (trials - j)
            for j in range(k + 1, trials + 1)
        )
    )
