import random

import pytest

from layerforge import (Graph, canonicalize, is_feasible, normalize, peel_leaves,
                        reattach_leaves, reversed_set)


def g_of(n, edges, weights=None):
    return Graph.build(n, edges, weights)


class TestNormalize:
    def test_drops_self_loop(self):
        g, report = normalize(g_of(2, [(0, 0), (0, 1)]))
        assert g.edges == ((0, 1),)
        assert report.dropped_self_loops == ((0, 0),)

    def test_merges_duplicates_with_summed_weight(self):
        g, report = normalize(g_of(2, [(0, 1), (0, 1)]))
        assert g.edges == ((0, 1),)
        assert g.weights == (2,)
        assert report.merged_edges == (((0, 1), 2),)

    def test_already_normal_is_untouched(self):
        g, report = normalize(g_of(3, [(0, 1), (1, 2)]))
        assert g.edges == ((0, 1), (1, 2))
        assert not report.changed

    def test_idempotent(self):
        rng = random.Random(5)
        for _ in range(50):
            n = rng.randint(1, 8)
            edges = [(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(0, 14))]
            g1, _ = normalize(g_of(n, edges))
            g2, rep2 = normalize(g1)
            assert g1 == g2
            assert not rep2.changed


class TestPeel:
    def test_path_peels_completely(self):
        core, record = peel_leaves(g_of(3, [(0, 1), (1, 2)]))
        assert core.n == 0
        assert len(record.entries) == 3

    def test_triangle_is_untouched(self):
        core, record = peel_leaves(g_of(3, [(0, 1), (1, 2), (2, 0)]))
        assert core.n == 3
        assert record.entries == ()

    def test_triangle_with_pendant(self):
        core, record = peel_leaves(g_of(4, [(0, 1), (1, 2), (2, 0), (2, 3)]))
        assert core.n == 3
        assert [e.node for e in record.entries] == [3]
        assert record.entries[0].neighbor == 2
        assert record.entries[0].toward_leaf  # edge 2->3 points toward the leaf

    def test_node_counts_add_up(self):
        rng = random.Random(9)
        for _ in range(80):
            n = rng.randint(1, 12)
            edges = {(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(0, 20))}
            g, _ = normalize(g_of(n, sorted(edges)))
            core, record = peel_leaves(g)
            assert core.n + len(record.entries) == g.n
            assert all(core.degree(v) > 1 for v in range(core.n))


class TestReattach:
    def test_leaf_below_neighbor(self):
        # core = single node b at layer 1; edge a->b peeled
        g = g_of(2, [(0, 1)])
        core, record = peel_leaves(g)
        assert core.n == 0
        layers = reattach_leaves({}, record)
        assert layers[1] - layers[0] == 1  # edge 0->1 forward, length 1

    def test_chain_replay(self):
        g = g_of(3, [(0, 1), (1, 2)])
        core, record = peel_leaves(g)
        layers = reattach_leaves({}, record)
        assert canonicalize(layers) == {0: 1, 1: 2, 2: 3}

    def test_rejects_mismatched_layering(self):
        g = g_of(4, [(0, 1), (1, 2), (2, 0), (2, 3)])
        _, record = peel_leaves(g)
        with pytest.raises(ValueError):
            reattach_leaves({0: 1}, record)

    def test_roundtrip_feasible_no_reversed_reattached_edges(self):
        rng = random.Random(21)
        for _ in range(60):
            n = rng.randint(2, 12)
            edges = {(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(1, 18))}
            g, _ = normalize(g_of(n, sorted(edges)))
            core, record = peel_leaves(g)
            core_layers = {v: v + 1 for v in range(core.n)}  # distinct => feasible
            full = reattach_leaves(core_layers, record)
            assert is_feasible(g, full)
            peeled = {e.node for e in record.entries}
            for u, v in reversed_set(g, full):
                assert u not in peeled and v not in peeled
