"""Ground-truth covariance structures and multivariate-normal datasets."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve, solve_triangular

from .data import RawDataset
from .graphs import GraphEstimate, psi_from_precision


class ConvergenceError(RuntimeError):
    """Cone projection failed to converge; carries the sweep count."""

    def __init__(self, sweeps: int, delta: float):
        super().__init__(
            f"cone projection did not converge after {sweeps} sweeps "
            f"(last change {delta:.3e})"
        )
        self.sweeps = sweeps


@dataclass(frozen=True)
class Scenario:
    """One cell of the simulation grid.

    ``design`` is "ar1" (tridiagonal truth, parameter rho) or "gwishart"
    (random Bernoulli(edge_prob) graph, precision drawn with dof degrees of
    freedom and identity scale unless ``scale`` is given).
    """

    design: str
    n: int
    p: int
    replicates: int
    seed: int
    rho: float | None = None
    edge_prob: float | None = None
    dof: float | None = None
    scale: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.design not in ("ar1", "gwishart"):
            raise ValueError(f"design must be 'ar1' or 'gwishart', got {self.design!r}")
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.p < 2:
            raise ValueError(f"p must be >= 2, got {self.p}")
        if self.replicates < 1:
            raise ValueError(f"replicates must be >= 1, got {self.replicates}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if self.design == "ar1":
            if self.rho is None or not 0 < self.rho < 1:
                raise ValueError(f"ar1 needs 0 < rho < 1, got {self.rho}")
            if self.edge_prob is not None or self.dof is not None:
                raise ValueError("ar1 takes no edge_prob or dof")
        else:
            if self.edge_prob is None or not 0 < self.edge_prob < 1:
                raise ValueError(
                    f"gwishart needs 0 < edge_prob < 1, got {self.edge_prob}"
                )
            if self.dof is None or not self.dof > 2:
                raise ValueError(f"gwishart needs dof > 2, got {self.dof}")
            if self.rho is not None:
                raise ValueError("gwishart takes no rho")
        if self.scale is not None:
            scale = np.asarray(self.scale, dtype=float)
            if scale.shape != (self.p, self.p) or not np.array_equal(scale, scale.T):
                raise ValueError("scale must be a symmetric p x p matrix")
            object.__setattr__(self, "scale", scale)

    @property
    def label(self) -> str:
        if self.design == "ar1":
            return f"ar1(rho={self.rho:g})"
        return f"gwishart(edge_prob={self.edge_prob:g},dof={self.dof:g})"


@dataclass(frozen=True)
class GroundTruth:
    """True covariance, precision, partial correlations, and graph of one
    generated structure. Sigma has unit diagonal and inverts omega; the graph
    matches the exact zero pattern of omega."""

    sigma: np.ndarray
    omega: np.ndarray
    psi: np.ndarray
    graph: GraphEstimate

    def __post_init__(self) -> None:
        sigma = np.asarray(self.sigma, dtype=float)
        omega = np.asarray(self.omega, dtype=float)
        psi = np.asarray(self.psi, dtype=float)
        p = sigma.shape[0]
        if sigma.shape != (p, p) or omega.shape != (p, p) or psi.shape != (p, p):
            raise ValueError("sigma, omega, and psi must be square and congruent")
        if self.graph.p != p:
            raise ValueError("graph size must match the matrices")
        if np.abs(sigma @ omega - np.eye(p)).max() > 1e-8:
            raise ValueError("sigma and omega must be inverses within 1e-8")
        if np.abs(np.diagonal(sigma) - 1.0).max() > 1e-10:
            raise ValueError("sigma must have unit diagonal within 1e-10")
        off = ~np.eye(p, dtype=bool)
        if not np.array_equal((omega != 0.0) & off, self.graph.adjacency):
            raise ValueError("graph must match the exact zero pattern of omega")
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "psi", psi)

    @property
    def p(self) -> int:
        return self.sigma.shape[0]


def ar1_truth(p: int, rho: float) -> GroundTruth:
    """Autoregressive truth: Sigma_ij = rho^|i-j| with its exact tridiagonal
    inverse; the graph is the first off-diagonal band."""
    if not 0 < rho < 1:
        raise ValueError(f"need 0 < rho < 1, got {rho}")
    if p < 2:
        raise ValueError(f"need p >= 2, got {p}")
    idx = np.arange(p)
    sigma = rho ** np.abs(idx[:, None] - idx[None, :])
    scale = 1.0 / (1.0 - rho * rho)
    omega = np.zeros((p, p))
    omega[np.diag_indices(p)] = (1.0 + rho * rho) * scale
    omega[0, 0] = omega[p - 1, p - 1] = scale
    band = np.arange(p - 1)
    omega[band, band + 1] = omega[band + 1, band] = -rho * scale
    adjacency = np.zeros((p, p), dtype=bool)
    adjacency[band, band + 1] = adjacency[band + 1, band] = True
    return GroundTruth(
        sigma=sigma,
        omega=omega,
        psi=psi_from_precision(omega),
        graph=GraphEstimate(adjacency=adjacency),
    )


def random_graph(p: int, edge_prob: float, rng: np.random.Generator) -> GraphEstimate:
    """Independent Bernoulli(edge_prob) draw for each of the p(p-1)/2 pairs."""
    if not 0 < edge_prob < 1:
        raise ValueError(f"need 0 < edge_prob < 1, got {edge_prob}")
    if p < 2:
        raise ValueError(f"need p >= 2, got {p}")
    iu = np.triu_indices(p, k=1)
    adjacency = np.zeros((p, p), dtype=bool)
    adjacency[iu] = rng.random(iu[0].size) < edge_prob
    return GraphEstimate(adjacency=adjacency | adjacency.T)


def gwishart_sample(
    graph: GraphEstimate,
    dof: float,
    scale: np.ndarray | None,
    rng: np.random.Generator,
    tol: float = 1e-8,
    max_sweeps: int = 10_000,
) -> np.ndarray:
    """Draw a precision matrix from the graph's cone, G-Wishart style.

    Convention: density proportional to |Omega|^((dof-2)/2) exp(-tr(D
    Omega)/2), under which the complete graph reduces to an unconstrained
    Wishart(dof + p - 1, D^-1). The draw starts from exactly that
    unconstrained Wishart sample; its covariance is then swept node by node,
    each sweep replacing the off-neighborhood entries of a node's
    covariance column with the values implied by its neighbors, until
    successive sweeps change no entry by more than ``tol``. Inverting the
    completed covariance and zeroing the non-edges yields a symmetric
    positive-definite matrix with exact zeros off the graph. Complete graphs
    make the sweep a no-op, so the Wishart law is exact there; for general
    graphs the contract is cone membership.
    """
    if not dof > 2:
        raise ValueError(f"need dof > 2, got {dof}")
    if max_sweeps < 1:
        raise ValueError(f"need max_sweeps >= 1, got {max_sweeps}")
    p = graph.p
    d_mat = np.eye(p) if scale is None else np.asarray(scale, dtype=float)
    if d_mat.shape != (p, p):
        raise ValueError(f"scale shape {d_mat.shape} does not match p={p}")
    chol_d = np.linalg.cholesky(d_mat)
    # factor F with F F' = D^-1 feeds the Bartlett construction
    factor = solve_triangular(chol_d, np.eye(p), lower=True, check_finite=False).T
    nu = dof + p - 1
    bartlett = np.zeros((p, p))
    bartlett[np.diag_indices(p)] = np.sqrt(rng.chisquare(nu - np.arange(p)))
    bartlett[np.tril_indices(p, k=-1)] = rng.standard_normal(p * (p - 1) // 2)
    root = factor @ bartlett
    omega0 = root @ root.T

    adjacency = graph.adjacency
    if adjacency.all(where=~np.eye(p, dtype=bool)):
        return omega0

    sigma0 = np.linalg.inv(omega0)
    sigma0 = (sigma0 + sigma0.T) / 2.0
    working = sigma0.copy()
    others_cache = [np.flatnonzero(np.arange(p) != j) for j in range(p)]
    neighbors_cache = [np.flatnonzero(adjacency[j]) for j in range(p)]
    for sweep in range(1, max_sweeps + 1):
        previous = working.copy()
        for j in range(p):
            neighbors = neighbors_cache[j]
            others = others_cache[j]
            if neighbors.size == 0:
                working[others, j] = 0.0
                working[j, others] = 0.0
                continue
            coef = np.linalg.solve(
                working[np.ix_(neighbors, neighbors)], sigma0[neighbors, j]
            )
            column = working[np.ix_(others, neighbors)] @ coef
            working[others, j] = column
            working[j, others] = column
        delta = float(np.abs(working - previous).max())
        if delta < tol:
            break
    else:
        raise ConvergenceError(max_sweeps, delta)
    omega = np.linalg.inv(working)
    omega = (omega + omega.T) / 2.0
    omega[~adjacency & ~np.eye(p, dtype=bool)] = 0.0
    try:
        np.linalg.cholesky(omega)
    except np.linalg.LinAlgError:
        raise ConvergenceError(sweep, delta) from None
    return omega


def rescale_unit_diag(omega: np.ndarray) -> GroundTruth:
    """Rescale a precision matrix so its inverse has unit diagonal.

    Omega' = D_s Omega D_s with D_s = diag(sqrt(Sigma_aa)); the congruence
    preserves the zero pattern exactly and leaves partial correlations
    unchanged.
    """
    omega = np.asarray(omega, dtype=float)
    p = omega.shape[0]
    if omega.shape != (p, p) or not np.array_equal(omega, omega.T):
        raise ValueError("omega must be square and symmetric")
    try:
        chol = np.linalg.cholesky(omega)
    except np.linalg.LinAlgError:
        raise ValueError("omega must be positive definite") from None
    sigma = cho_solve((chol, True), np.eye(p), check_finite=False)
    d_s = np.sqrt(np.diagonal(sigma))
    omega_scaled = omega * np.outer(d_s, d_s)
    omega_scaled = (omega_scaled + omega_scaled.T) / 2.0
    zero_mask = omega == 0.0
    omega_scaled[zero_mask] = 0.0
    sigma_scaled = np.linalg.inv(omega_scaled)
    sigma_scaled = (sigma_scaled + sigma_scaled.T) / 2.0
    off = ~np.eye(p, dtype=bool)
    return GroundTruth(
        sigma=sigma_scaled,
        omega=omega_scaled,
        psi=psi_from_precision(omega_scaled),
        graph=GraphEstimate(adjacency=(omega_scaled != 0.0) & off),
    )


def mvn_sample(n: int, truth: GroundTruth, rng: np.random.Generator) -> RawDataset:
    """n independent mean-zero draws with covariance truth.sigma, via the
    lower Cholesky factor applied to standard normals. Columns are named
    V1..Vp."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    try:
        chol = np.linalg.cholesky(truth.sigma)
    except np.linalg.LinAlgError:
        raise ValueError("covariance is not positive definite") from None
    values = rng.standard_normal((n, truth.p)) @ chol.T
    names = tuple(f"V{j}" for j in range(1, truth.p + 1))
    return RawDataset(values=values, column_names=names)


def scenario_truth(scenario: Scenario, rng: np.random.Generator) -> GroundTruth:
    """Ground truth for one replicate of a scenario. AR(1) truth is
    deterministic; a G-Wishart truth draws a fresh graph and precision."""
    if scenario.design == "ar1":
        return ar1_truth(scenario.p, scenario.rho)
    graph = random_graph(scenario.p, scenario.edge_prob, rng)
    omega = gwishart_sample(graph, scenario.dof, scenario.scale, rng)
    return rescale_unit_diag(omega)


def parse_scenario(path: str) -> Scenario:
    """Parse a key = value scenario file.

    Keys: design, n, p, replicates, seed, and rho (ar1) or edge_prob and dof
    (gwishart). Blank lines and # comments are ignored; unknown or repeated
    keys are errors reported with their line number.
    """
    entries: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw_line in enumerate(handle, start=1):
            line = raw_line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}: line {lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key in entries:
                raise ValueError(f"{path}: line {lineno}: repeated key {key!r}")
            entries[key] = value

    known = {"design", "n", "p", "replicates", "seed", "rho", "edge_prob", "dof"}
    unknown = sorted(set(entries) - known)
    if unknown:
        raise ValueError(f"{path}: unknown keys: {', '.join(unknown)}")
    required = {"design", "n", "p", "replicates", "seed"}
    missing = sorted(required - set(entries))
    if missing:
        raise ValueError(f"{path}: missing keys: {', '.join(missing)}")

    def to_int(key: str) -> int:
        try:
            return int(entries[key])
        except ValueError:
            raise ValueError(f"{path}: key {key!r} must be an integer") from None

    def to_float(key: str) -> float | None:
        if key not in entries:
            return None
        try:
            return float(entries[key])
        except ValueError:
            raise ValueError(f"{path}: key {key!r} must be a number") from None

    return Scenario(
        design=entries["design"],
        n=to_int("n"),
        p=to_int("p"),
        replicates=to_int("replicates"),
        seed=to_int("seed"),
        rho=to_float("rho"),
        edge_prob=to_float("edge_prob"),
        dof=to_float("dof"),
    )


def write_scenario(path: str, scenario: Scenario) -> None:
    """Write a scenario back out in the key = value format."""
    lines = [
        f"design = {scenario.design}",
        f"n = {scenario.n}",
        f"p = {scenario.p}",
        f"replicates = {scenario.replicates}",
        f"seed = {scenario.seed}",
    ]
    if scenario.design == "ar1":
        lines.append(f"rho = {scenario.rho!r}")
    else:
        lines.append(f"edge_prob = {scenario.edge_prob!r}")
        lines.append(f"dof = {scenario.dof!r}")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")
