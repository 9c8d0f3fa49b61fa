"""Graph assembly: symmetrization, partial-correlation assembly, rankings."""

import numpy as np
import pytest

from support import random_pd

from hsggm.graphs import (
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

# AR(1)-style dense-inversion reference for rho = 0.7, p = 5: the band pair
# partial correlations, frozen from inverting Sigma_ij = rho^|i-j| directly.
AR1_BAND_END = 0.5734623443633282
AR1_BAND_INTERIOR = 0.46979865771812085


def collection(beta, gamma=None):
    beta = np.asarray(beta, dtype=float)
    if gamma is None:
        gamma = beta != 0.0
    return NeighborhoodCollection(beta_all=beta, gamma_all=np.asarray(gamma, bool))


class TestSymmetrize:
    def test_disagreeing_directions(self):
        gamma = np.zeros((3, 3), dtype=bool)
        gamma[0, 1] = True  # node 1 selects 2, node 2 does not select 1
        coll = collection(np.zeros((3, 3)), gamma)
        assert symmetrize(coll, "and").adjacency[0, 1] == False  # noqa: E712
        assert symmetrize(coll, "or").adjacency[0, 1] == True  # noqa: E712

    def test_symmetric_gamma_rules_coincide(self):
        gamma = np.array(
            [[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=bool
        )
        coll = collection(np.zeros((3, 3)), gamma)
        assert np.array_equal(
            symmetrize(coll, "and").adjacency, symmetrize(coll, "or").adjacency
        )

    def test_all_false_empty_both_rules(self):
        coll = collection(np.zeros((4, 4)))
        assert symmetrize(coll, "and").edge_count == 0
        assert symmetrize(coll, "or").edge_count == 0

    def test_and_subset_of_or_random(self):
        rng = np.random.default_rng(10)
        for _ in range(25):
            p = int(rng.integers(2, 9))
            gamma = rng.random((p, p)) < 0.4
            np.fill_diagonal(gamma, False)
            coll = collection(np.zeros((p, p)), gamma)
            and_adj = symmetrize(coll, "and").adjacency
            or_adj = symmetrize(coll, "or").adjacency
            assert np.all(~and_adj | or_adj)

    def test_unknown_rule(self):
        with pytest.raises(ValueError, match="rule"):
            symmetrize(collection(np.zeros((2, 2))), "xor")


class TestAssemblePsi:
    def test_agreeing_signs_geometric_mean(self):
        beta = np.array([[0.0, 0.4], [0.9, 0.0]])
        psi = assemble_psi(collection(beta)).psi
        assert psi[0, 1] == pytest.approx(0.6, abs=1e-15)
        assert psi[1, 0] == psi[0, 1]

    def test_sign_disagreement_zeroes(self):
        beta = np.array([[0.0, 0.4], [-0.9, 0.0]])
        psi = assemble_psi(collection(beta)).psi
        assert psi[0, 1] == 0.0

    def test_truncation_at_one(self):
        beta = np.array([[0.0, 2.0], [3.0, 0.0]])
        psi = assemble_psi(collection(beta)).psi
        assert psi[0, 1] == 1.0

    def test_zero_on_either_side_zeroes(self):
        beta = np.array([[0.0, 0.4], [0.0, 0.0]])
        psi = assemble_psi(collection(beta)).psi
        assert psi[0, 1] == 0.0

    def test_negative_pair(self):
        beta = np.array([[0.0, -0.25], [-1.0, 0.0]])
        psi = assemble_psi(collection(beta)).psi
        assert psi[0, 1] == pytest.approx(-0.5, abs=1e-15)

    def test_unit_diagonal_and_bounds(self):
        rng = np.random.default_rng(11)
        beta = rng.standard_normal((6, 6)) * 2
        np.fill_diagonal(beta, 0.0)
        est = assemble_psi(collection(beta))
        assert np.all(np.diagonal(est.psi) == 1.0)
        assert np.abs(est.psi).max() <= 1.0

    def test_nonzero_implies_agreeing_nonzero_inputs(self):
        rng = np.random.default_rng(12)
        beta = rng.standard_normal((7, 7))
        beta[rng.random((7, 7)) < 0.4] = 0.0
        np.fill_diagonal(beta, 0.0)
        psi = assemble_psi(collection(beta)).psi
        for a in range(7):
            for b in range(a + 1, 7):
                if psi[a, b] != 0.0:
                    assert beta[a, b] != 0.0 and beta[b, a] != 0.0
                    assert np.sign(beta[a, b]) == np.sign(beta[b, a])


class TestRoundtripPsi:
    def test_identity(self):
        assert np.array_equal(roundtrip_psi(np.eye(4)).psi, np.eye(4))

    def test_two_by_two(self):
        omega = np.array([[2.0, -1.0], [-1.0, 2.0]])
        psi = roundtrip_psi(omega).psi
        assert psi[0, 1] == pytest.approx(0.5, abs=1e-15)

    def test_matches_direct_rescaling_p5(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            omega = random_pd(rng, 5)
            gap = np.abs(roundtrip_psi(omega).psi - psi_from_precision(omega)).max()
            assert gap <= 1e-12

    def test_ar1_band_reference(self):
        rho, p = 0.7, 5
        idx = np.arange(p)
        sigma = rho ** np.abs(idx[:, None] - idx[None, :])
        omega = np.linalg.inv(sigma)
        omega = (omega + omega.T) / 2.0
        psi = roundtrip_psi(omega).psi
        band = [psi[i, i + 1] for i in range(p - 1)]
        assert band[0] == pytest.approx(AR1_BAND_END, abs=1e-12)
        assert band[1] == pytest.approx(AR1_BAND_INTERIOR, abs=1e-12)
        assert band[2] == pytest.approx(AR1_BAND_INTERIOR, abs=1e-12)
        assert band[3] == pytest.approx(AR1_BAND_END, abs=1e-12)

    def test_non_pd_rejected(self):
        with pytest.raises(ValueError, match="positive definite"):
            roundtrip_psi(np.array([[1.0, 2.0], [2.0, 1.0]]))

    def test_asymmetric_rejected(self):
        omega = np.array([[2.0, -1.0], [-0.5, 2.0]])
        with pytest.raises(ValueError, match="symmetric"):
            roundtrip_psi(omega)


class TestConnectivity:
    def test_empty_graph_zero_degrees(self):
        graph = GraphEstimate(adjacency=np.zeros((3, 3), dtype=bool))
        degrees, strengths = connectivity_scores(
            graph, PartialCorrEstimate(psi=np.eye(3))
        )
        assert np.array_equal(degrees, [0, 0, 0])
        assert np.array_equal(strengths, [0.0, 0.0, 0.0])

    def test_complete_graph_degrees(self):
        graph = GraphEstimate(adjacency=~np.eye(3, dtype=bool))
        degrees, _ = connectivity_scores(graph, PartialCorrEstimate(psi=np.eye(3)))
        assert np.array_equal(degrees, [2, 2, 2])

    def test_single_pair_strengths(self):
        psi = np.eye(3)
        psi[0, 1] = psi[1, 0] = -0.5
        graph = GraphEstimate(adjacency=np.zeros((3, 3), dtype=bool))
        _, strengths = connectivity_scores(graph, PartialCorrEstimate(psi=psi))
        assert np.allclose(strengths, [0.5, 0.5, 0.0])

    def test_dimension_mismatch(self):
        graph = GraphEstimate(adjacency=np.zeros((3, 3), dtype=bool))
        with pytest.raises(ValueError, match="nodes"):
            connectivity_scores(graph, PartialCorrEstimate(psi=np.eye(4)))


class TestTopK:
    def test_tie_on_degree_broken_by_strength(self):
        scores = (np.array([3, 1, 3]), np.array([0.2, 0.9, 0.8]))
        assert top_k(scores, 2) == [2, 0]

    def test_k_zero(self):
        assert top_k((np.array([1, 2]), np.array([0.5, 0.5])), 0) == []

    def test_all_equal_first_k_indices(self):
        scores = (np.ones(4, dtype=int), np.ones(4))
        assert top_k(scores, 3) == [0, 1, 2]

    def test_k_clamped(self):
        scores = (np.array([1, 0]), np.array([0.1, 0.0]))
        assert top_k(scores, 99) == [0, 1]


class TestEdgeListIO:
    def test_roundtrip(self, tmp_path):
        rng = np.random.default_rng(14)
        adjacency = rng.random((5, 5)) < 0.4
        adjacency = np.triu(adjacency, k=1)
        graph = GraphEstimate(adjacency=adjacency | adjacency.T)
        names = tuple(f"g{i}" for i in range(5))
        path = tmp_path / "edges.csv"
        write_edge_list(str(path), graph, names)
        back = read_edge_list(str(path), names)
        assert np.array_equal(back.adjacency, graph.adjacency)

    def test_header_and_order(self, tmp_path):
        adjacency = np.zeros((3, 3), dtype=bool)
        adjacency[2, 0] = adjacency[0, 2] = True
        path = tmp_path / "edges.csv"
        write_edge_list(str(path), GraphEstimate(adjacency=adjacency), ("a", "b", "c"))
        lines = path.read_text(encoding="utf-8").strip().splitlines()
        assert lines[0] == "node_a,node_b"
        assert lines[1] == "a,c"

    def test_unknown_node_rejected(self, tmp_path):
        path = tmp_path / "edges.csv"
        path.write_text("node_a,node_b\nq,r\n", encoding="utf-8")
        with pytest.raises(ValueError, match="unknown node"):
            read_edge_list(str(path), ("a", "b"))


class TestInvariantValidation:
    def test_graph_requires_symmetry(self):
        bad = np.zeros((2, 2), dtype=bool)
        bad[0, 1] = True
        with pytest.raises(ValueError, match="symmetric"):
            GraphEstimate(adjacency=bad)

    def test_graph_edge_count(self):
        adjacency = np.zeros((4, 4), dtype=bool)
        adjacency[0, 1] = adjacency[1, 0] = True
        adjacency[2, 3] = adjacency[3, 2] = True
        assert GraphEstimate(adjacency=adjacency).edge_count == 2

    def test_psi_rejects_out_of_range(self):
        psi = np.eye(2)
        psi[0, 1] = psi[1, 0] = 1.5
        with pytest.raises(ValueError, match=r"\[-1, 1\]"):
            PartialCorrEstimate(psi=psi)

    def test_collection_rejects_nonzero_diagonal(self):
        beta = np.eye(3)
        with pytest.raises(ValueError, match="diagonal"):
            NeighborhoodCollection(beta_all=beta, gamma_all=np.zeros((3, 3), bool))
