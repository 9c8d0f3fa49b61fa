"""Assembly of per-node fits into graphs and partial-correlation matrices."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class NeighborhoodCollection:
    """Stacked node-wise results: beta_all[a, b] and gamma_all[a, b] hold node
    a's coefficient and inclusion indicator for predictor b (0-based here;
    diagonals are structurally 0 / False)."""

    beta_all: np.ndarray
    gamma_all: np.ndarray

    def __post_init__(self) -> None:
        beta = np.asarray(self.beta_all, dtype=float)
        gamma = np.asarray(self.gamma_all, dtype=bool)
        if beta.ndim != 2 or beta.shape[0] != beta.shape[1]:
            raise ValueError(f"beta_all must be square, got shape {beta.shape}")
        if gamma.shape != beta.shape:
            raise ValueError("beta_all and gamma_all shapes must match")
        if np.diagonal(beta).any():
            raise ValueError("beta_all diagonal must be stored as 0")
        if np.diagonal(gamma).any():
            raise ValueError("gamma_all diagonal must be false")
        object.__setattr__(self, "beta_all", beta)
        object.__setattr__(self, "gamma_all", gamma)

    @property
    def p(self) -> int:
        return self.beta_all.shape[0]


@dataclass(frozen=True)
class GraphEstimate:
    """Undirected graph as a symmetric boolean adjacency with empty diagonal."""

    adjacency: np.ndarray
    edge_count: int = field(init=False)

    def __post_init__(self) -> None:
        adj = np.asarray(self.adjacency, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError(f"adjacency must be square, got shape {adj.shape}")
        if np.diagonal(adj).any():
            raise ValueError("adjacency diagonal must be false")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency must be symmetric")
        object.__setattr__(self, "adjacency", adj)
        object.__setattr__(self, "edge_count", int(adj.sum()) // 2)

    @property
    def p(self) -> int:
        return self.adjacency.shape[0]


@dataclass(frozen=True)
class PartialCorrEstimate:
    """Symmetric partial-correlation matrix with unit diagonal, entries in
    [-1, 1]."""

    psi: np.ndarray

    def __post_init__(self) -> None:
        psi = np.asarray(self.psi, dtype=float)
        if psi.ndim != 2 or psi.shape[0] != psi.shape[1]:
            raise ValueError(f"psi must be square, got shape {psi.shape}")
        if not np.array_equal(psi, psi.T):
            raise ValueError("psi must be exactly symmetric")
        if not np.all(np.diagonal(psi) == 1.0):
            raise ValueError("psi diagonal must be 1")
        if np.abs(psi).max() > 1.0:
            raise ValueError("psi entries must lie in [-1, 1]")
        object.__setattr__(self, "psi", psi)

    @property
    def p(self) -> int:
        return self.psi.shape[0]


def symmetrize(collection: NeighborhoodCollection, rule: str) -> GraphEstimate:
    """Combine directed neighborhoods into an undirected graph.

    rule "and": edge (a, b) iff both directions selected; rule "or": edge iff
    either direction selected.
    """
    gamma = collection.gamma_all
    if rule == "and":
        adjacency = gamma & gamma.T
    elif rule == "or":
        adjacency = gamma | gamma.T
    else:
        raise ValueError(f"rule must be 'and' or 'or', got {rule!r}")
    return GraphEstimate(adjacency=adjacency)


def assemble_psi(collection: NeighborhoodCollection) -> PartialCorrEstimate:
    """Build the partial-correlation estimate from the two directed
    coefficients of each pair.

    psi_ab = sign(beta_ab) * min(sqrt(beta_ab * beta_ba), 1) when both signs
    agree and are nonzero, else 0. An exactly-zero coefficient on either side
    zeroes the pair (sign(0) = 0). The result is symmetric by construction
    with unit diagonal.
    """
    beta = collection.beta_all
    signs = np.sign(beta)
    agree = (signs == signs.T) & (signs != 0)
    prod = np.where(agree, beta * beta.T, 0.0)
    psi = np.where(agree, signs * np.minimum(np.sqrt(prod), 1.0), 0.0)
    np.fill_diagonal(psi, 1.0)
    return PartialCorrEstimate(psi=psi)


def psi_from_precision(omega: np.ndarray) -> np.ndarray:
    """Direct rescaling psi_ab = -omega_ab / sqrt(omega_aa * omega_bb), unit
    diagonal."""
    omega = np.asarray(omega, dtype=float)
    d = np.sqrt(np.diagonal(omega))
    psi = -omega / np.outer(d, d)
    np.fill_diagonal(psi, 1.0)
    return psi


def roundtrip_psi(omega: np.ndarray) -> PartialCorrEstimate:
    """Partial correlations recovered through the regression-coefficient route.

    From a symmetric positive definite precision matrix, form the implied
    node-wise coefficients beta_ab = -omega_ab / omega_aa and assemble psi
    exactly as :func:`assemble_psi` does. Library utility for consistency
    checks: the result must match :func:`psi_from_precision` to machine
    precision.
    """
    omega = np.asarray(omega, dtype=float)
    if omega.ndim != 2 or omega.shape[0] != omega.shape[1]:
        raise ValueError(f"precision matrix must be square, got {omega.shape}")
    if not np.array_equal(omega, omega.T):
        raise ValueError("precision matrix must be symmetric")
    try:
        np.linalg.cholesky(omega)
    except np.linalg.LinAlgError:
        raise ValueError("precision matrix must be positive definite") from None
    beta_all = -omega / np.diagonal(omega)[:, None]
    np.fill_diagonal(beta_all, 0.0)
    gamma_all = np.zeros_like(beta_all, dtype=bool)
    return assemble_psi(NeighborhoodCollection(beta_all=beta_all, gamma_all=gamma_all))


def connectivity_scores(
    graph: GraphEstimate, psi: PartialCorrEstimate
) -> tuple[np.ndarray, np.ndarray]:
    """Node connectivity: degrees G_a and off-diagonal absolute psi row sums
    P_a."""
    if graph.p != psi.p:
        raise ValueError(f"graph has {graph.p} nodes but psi has {psi.p}")
    degrees = graph.adjacency.sum(axis=1).astype(int)
    abs_psi = np.abs(psi.psi).copy()
    np.fill_diagonal(abs_psi, 0.0)
    return degrees, abs_psi.sum(axis=1)


def top_k(scores: tuple[np.ndarray, np.ndarray], k: int) -> list[int]:
    """Top-k node indices (0-based) by degree descending, then P descending,
    then index ascending. k beyond the node count is clamped."""
    degrees, strengths = scores
    if len(degrees) != len(strengths):
        raise ValueError("degree and strength vectors must have equal length")
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    order = sorted(
        range(len(degrees)), key=lambda i: (-degrees[i], -strengths[i], i)
    )
    return order[: min(k, len(order))]


def write_edge_list(
    path: str, graph: GraphEstimate, column_names: tuple[str, ...]
) -> None:
    """Write edges as a two-column CSV of node name pairs, a < b by index."""
    if len(column_names) != graph.p:
        raise ValueError("column name count must match the node count")
    a_idx, b_idx = np.nonzero(np.triu(graph.adjacency, k=1))
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["node_a", "node_b"])
        for a, b in zip(a_idx, b_idx):
            writer.writerow([column_names[a], column_names[b]])


def read_edge_list(path: str, column_names: tuple[str, ...]) -> GraphEstimate:
    """Read an edge-list CSV back into a GraphEstimate over the given nodes."""
    index = {name: i for i, name in enumerate(column_names)}
    adjacency = np.zeros((len(column_names), len(column_names)), dtype=bool)
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None or [c.strip() for c in header] != ["node_a", "node_b"]:
            raise ValueError(f"{path}: expected header 'node_a,node_b'")
        for i, row in enumerate(reader, start=1):
            if len(row) != 2:
                raise ValueError(f"{path}: malformed edge at row {i}")
            try:
                a, b = index[row[0]], index[row[1]]
            except KeyError as exc:
                raise ValueError(f"{path}: unknown node {exc} at row {i}") from None
            adjacency[a, b] = adjacency[b, a] = True
    return GraphEstimate(adjacency=adjacency)
