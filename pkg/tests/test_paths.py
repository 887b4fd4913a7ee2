import numpy as np
import pytest

from emunet import (
    ValidationError,
    betweenness,
    bilateral_closeness,
    closeness,
    closeness_scores,
    direct_counts,
    normalized_closeness,
    scale_weights,
    shortest_paths,
    symmetrized,
)
from emunet.paths import _closeness_of_weights, _pairwise_distances
from emunet.network import to_lengths

import oracles
from conftest import make_matrix, random_matrix


class TestShortestPaths:
    def test_forced_chain(self):
        # a->b->c, unit weights, no a->c link: two hops, one path.
        m = make_matrix([[0, 1.0, 0], [0, 0, 1.0], [0, 0, 0]])
        stats = shortest_paths(m)
        assert stats.dist[0, 2] == pytest.approx(2.0)
        assert stats.hops[0, 2] == 2
        assert stats.sigma[0, 2] == 1
        assert not stats.direct_shortest[0, 2]

    def test_heavy_detour_beats_direct(self):
        # Direct a->c weight 1 (length 1); a->b->c weights 10 (length 0.2).
        m = make_matrix([[0, 10.0, 1.0], [0, 0, 10.0], [0, 0, 0]])
        stats = shortest_paths(m)
        assert stats.dist[0, 2] == pytest.approx(0.2)
        assert stats.hops[0, 2] == 2
        assert not stats.direct_shortest[0, 2]

    def test_unreachable_pair(self):
        m = make_matrix([[0, 1.0], [0, 0]])
        stats = shortest_paths(m)
        assert np.isinf(stats.dist[1, 0])
        assert stats.sigma[1, 0] == 0
        assert stats.hops[1, 0] == 0

    def test_exact_tie_counts_both_paths(self):
        # Dyadic weights make the two routes tie exactly: direct length 1.0
        # vs 0.5 + 0.5.
        m = make_matrix([[0, 2.0, 1.0], [0, 0, 2.0], [0, 0, 0]])
        stats = shortest_paths(m)
        assert stats.dist[0, 2] == pytest.approx(1.0)
        assert stats.sigma[0, 2] == 2
        assert stats.hops[0, 2] == 1  # fewest links among tied paths
        assert stats.direct_shortest[0, 2]

    def test_heaviest_edge_is_always_direct_shortest(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            m = random_matrix(rng)
            w = m.weights
            stats = shortest_paths(m)
            i, j = np.unravel_index(np.argmax(w), w.shape)
            if w[i, j] > 0:
                assert stats.direct_shortest[i, j]

    def test_triangle_inequality(self):
        rng = np.random.default_rng(14)
        for _ in range(20):
            m = random_matrix(rng)
            d = shortest_paths(m).dist
            n = m.n
            for i in range(n):
                for j in range(n):
                    for k in range(n):
                        if np.isfinite(d[i, j]) and np.isfinite(d[j, k]):
                            assert d[i, k] <= (d[i, j] + d[j, k]) * (1 + 1e-9)

    def test_matches_floyd_warshall_engine(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            m = random_matrix(rng)
            stats = shortest_paths(m)
            fw, _ = _pairwise_distances(to_lengths(m)[None])
            assert np.allclose(stats.dist, fw[0], rtol=1e-12, equal_nan=False)

    def test_oracle_equivalence(self):
        rng = np.random.default_rng(42)
        for _ in range(40):
            m = random_matrix(rng)
            stats = shortest_paths(m)
            dist, sigma, hops, direct, _ = oracles.path_stats_oracle(m)
            finite = np.isfinite(dist)
            assert np.array_equal(np.isfinite(stats.dist), finite)
            assert np.allclose(stats.dist[finite], dist[finite], rtol=1e-12)
            assert np.array_equal(stats.sigma, sigma)
            offdiag = ~np.eye(m.n, dtype=bool)
            assert np.array_equal(stats.hops[offdiag & finite],
                                  hops[offdiag & finite])
            assert np.array_equal(stats.direct_shortest, direct)


class TestBetweenness:
    def test_chain_single_intermediary(self):
        m = make_matrix([[0, 1.0, 0], [0, 0, 1.0], [0, 0, 0]])
        b = betweenness(shortest_paths(m))
        assert b.values.tolist() == [0.0, 1.0, 0.0]

    def test_uniform_complete_graph_all_zero(self):
        n = 5
        w = np.ones((n, n))
        np.fill_diagonal(w, 0.0)
        b = betweenness(shortest_paths(make_matrix(w)))
        assert np.allclose(b.values, 0.0)

    def test_tied_paths_split_fractionally(self):
        # Two tied two-hop routes a->b->d and a->c->d, no direct a->d.
        m = make_matrix([
            [0, 1.0, 1.0, 0],
            [0, 0, 0, 1.0],
            [0, 0, 0, 1.0],
            [0, 0, 0, 0],
        ])
        b = betweenness(shortest_paths(m))
        assert b.values.tolist() == [0.0, 0.5, 0.5, 0.0]

    def test_oracle_equivalence(self):
        rng = np.random.default_rng(77)
        for _ in range(40):
            m = random_matrix(rng)
            got = betweenness(shortest_paths(m)).values
            want = oracles.betweenness_oracle(m)
            assert np.allclose(got, want, rtol=1e-9, atol=1e-12)

    def test_interior_count_sum_rule(self):
        # For each pair, summed pass-through counts equal the number of
        # interior vertices over all minimal paths.
        rng = np.random.default_rng(15)
        for _ in range(15):
            m = random_matrix(rng)
            stats = shortest_paths(m)
            _, sigma, _, _, minimal = oracles.path_stats_oracle(m)
            for (j, k), paths in minimal.items():
                interior_total = sum(len(p[2]) for p in paths)
                through = 0.0
                for i in range(m.n):
                    if i in (j, k):
                        continue
                    d = stats.dist
                    if np.isfinite(d[j, i]) and np.isfinite(d[i, k]) and \
                            d[j, i] + d[i, k] <= d[j, k] * (1 + stats.tie_tol):
                        through += stats.sigma[j, i] * stats.sigma[i, k]
                assert through == pytest.approx(interior_total)

    def test_scale_invariant(self):
        rng = np.random.default_rng(19)
        for lam in (1e-3, 1e3):
            m = random_matrix(rng)
            b0 = betweenness(shortest_paths(m)).values
            b1 = betweenness(shortest_paths(scale_weights(m, lam))).values
            assert np.allclose(b0, b1, rtol=1e-12)


class TestCloseness:
    def test_star_center_hops(self):
        n = 4
        w = np.zeros((n, n))
        w[0, 1:] = 1.0
        m = make_matrix(w)
        c = closeness(shortest_paths(m), "hops")
        assert c.values[0] == pytest.approx(n / (n - 1))
        # Leaves cannot reach anyone: isolates score zero.
        assert np.all(c.values[1:] == 0.0)

    def test_isolate_scores_zero(self):
        m = make_matrix([[0, 1.0, 0], [1.0, 0, 0], [0, 0, 0]])
        c = closeness(shortest_paths(m), "length")
        assert c.values[2] == 0.0

    def test_length_mode_known_chain(self):
        m = make_matrix([[0, 2.0, 0], [0, 0, 4.0], [2.0, 0, 0]])
        c = closeness(shortest_paths(m), "length")
        # From node 0: d01 = 0.5, d02 = 0.75 -> 3 / 1.25.
        assert c.values[0] == pytest.approx(3 / 1.25)

    def test_oracle_equivalence_both_modes(self):
        rng = np.random.default_rng(31)
        for _ in range(40):
            m = random_matrix(rng)
            stats = shortest_paths(m)
            for mode in ("length", "hops"):
                got = closeness(stats, mode).values
                want = oracles.closeness_oracle(m, mode)
                assert np.allclose(got, want, rtol=1e-12)

    def test_hops_mode_scale_invariant(self):
        rng = np.random.default_rng(37)
        m = random_matrix(rng)
        c0 = closeness(shortest_paths(m), "hops").values
        c1 = closeness(shortest_paths(scale_weights(m, 1e3)), "hops").values
        assert np.allclose(c0, c1)

    def test_length_mode_scales_with_lambda(self):
        rng = np.random.default_rng(38)
        m = random_matrix(rng)
        lam = 1e3
        c0 = closeness(shortest_paths(m), "length").values
        c1 = closeness(shortest_paths(scale_weights(m, lam)), "length").values
        assert np.allclose(c1, lam * c0, rtol=1e-12)

    def test_bilateral_uses_symmetrized_matrix(self):
        rng = np.random.default_rng(39)
        m = random_matrix(rng)
        direct = closeness(shortest_paths(symmetrized(m)), "length").values
        assert np.allclose(bilateral_closeness(m).values, direct)
        assert np.allclose(closeness_scores(m, "bilateral").values, direct)

    def test_rejects_bilateral_on_stats(self):
        m = make_matrix([[0, 1.0], [1.0, 0]])
        with pytest.raises(ValueError):
            closeness(shortest_paths(m), "bilateral")


class TestDirectCounts:
    def test_complete_uniform_graph(self):
        n = 5
        w = np.ones((n, n))
        np.fill_diagonal(w, 0.0)
        counts = direct_counts(shortest_paths(make_matrix(w)))
        assert np.all(counts.exporter == n - 1)
        assert np.all(counts.importer == n - 1)

    def test_oracle_equivalence(self):
        rng = np.random.default_rng(53)
        for _ in range(30):
            m = random_matrix(rng)
            counts = direct_counts(shortest_paths(m))
            _, _, _, direct, _ = oracles.path_stats_oracle(m)
            assert np.array_equal(counts.exporter, direct.sum(axis=1))
            assert np.array_equal(counts.importer, direct.sum(axis=0))

    def test_scale_invariant(self):
        rng = np.random.default_rng(54)
        m = random_matrix(rng)
        c0 = direct_counts(shortest_paths(m))
        c1 = direct_counts(shortest_paths(scale_weights(m, 1e-3)))
        assert np.array_equal(c0.exporter, c1.exporter)
        assert np.array_equal(c0.importer, c1.importer)


class TestNormalizedCloseness:
    def test_self_normalization_hook(self):
        rng = np.random.default_rng(61)
        m = random_matrix(rng, n=6, density=1.0)
        w = m.weights
        original = w[np.argwhere(w > 0)[:, 0], np.argwhere(w > 0)[:, 1]]
        res = normalized_closeness(m, 1, seed=0, mode="length",
                                   null_pattern="observed",
                                   sampler=lambda rng_, n_links: original)
        assert res.envelope == pytest.approx(res.closeness.values.max())
        assert res.scores.values.max() == pytest.approx(1.0)

    def test_deterministic_given_seed(self, m1995):
        a = normalized_closeness(m1995, 50, seed=9)
        b = normalized_closeness(m1995, 50, seed=9)
        assert a.scores.values.tobytes() == b.scores.values.tobytes()
        assert np.array_equal(a.run_maxima, b.run_maxima)

    def test_chunking_does_not_change_results(self, m1995):
        a = normalized_closeness(m1995, 64, seed=3, chunk=7)
        b = normalized_closeness(m1995, 64, seed=3, chunk=64)
        assert np.array_equal(a.run_maxima, b.run_maxima)

    def test_seed_changes_envelope(self, m1995):
        a = normalized_closeness(m1995, 50, seed=1)
        b = normalized_closeness(m1995, 50, seed=2)
        assert a.envelope != b.envelope

    def test_scale_invariant_same_seed(self):
        rng = np.random.default_rng(71)
        m = random_matrix(rng, n=6, density=1.0)
        a = normalized_closeness(m, 40, seed=5)
        b = normalized_closeness(scale_weights(m, 1e3), 40, seed=5)
        assert np.allclose(a.scores.values, b.scores.values, rtol=1e-12)

    def test_envelope_not_below_any_run(self, m1995):
        res = normalized_closeness(m1995, 30, seed=4)
        assert res.envelope >= res.run_maxima.max()
        assert (res.run_maxima > 0).all()

    def test_no_links_rejected(self):
        m = make_matrix(np.zeros((3, 3)))
        with pytest.raises(ValidationError, match="no links"):
            normalized_closeness(m, 5, seed=0)

    def test_k_must_be_positive(self, m1995):
        with pytest.raises(ValueError, match="k_runs"):
            normalized_closeness(m1995, 0, seed=0)

    def test_observed_pattern_keeps_zero_cells(self):
        rng = np.random.default_rng(73)
        m = random_matrix(rng, n=5, density=0.5)
        res = normalized_closeness(m, 10, seed=2, mode="length",
                                   null_pattern="observed")
        assert res.null_pattern == "observed"
        # Fully dense pattern yields a different (typically larger) envelope.
        res_c = normalized_closeness(m, 10, seed=2, mode="length",
                                     null_pattern="complete")
        assert res.envelope != res_c.envelope

    def test_batch_engine_matches_dijkstra_closeness(self):
        rng = np.random.default_rng(79)
        for _ in range(10):
            m = random_matrix(rng)
            for mode in ("length", "hops", "bilateral"):
                batch = _closeness_of_weights(m.weights[None], mode=mode)[0]
                ref = closeness_scores(m, mode).values
                assert np.allclose(batch, ref, rtol=1e-12)
