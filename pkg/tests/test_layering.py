import random
from fractions import Fraction

import pytest

from layerforge import (Graph, GlpWeights, InfeasibleLayeringError, canonicalize,
                        deduce_acyclic, is_feasible, is_valid, metrics, normalize,
                        objective)

P3 = Graph.build(3, [(0, 1), (1, 2)])
TRIANGLE = Graph.build(3, [(0, 1), (1, 2), (2, 0)])
DIAMOND = Graph.build(4, [(0, 1), (0, 2), (1, 3), (2, 3)])


class TestChecks:
    def test_feasible_path(self):
        assert is_feasible(P3, {0: 1, 1: 2, 2: 3})

    def test_flat_edge_is_infeasible(self):
        assert not is_feasible(TRIANGLE, {0: 1, 1: 1, 2: 2})

    def test_reversed_edge_is_feasible_but_invalid(self):
        lay = {0: 1, 1: 2, 2: 3}
        assert is_feasible(TRIANGLE, lay)
        assert not is_valid(TRIANGLE, lay)

    def test_valid_examples(self):
        assert is_valid(P3, {0: 1, 1: 2, 2: 3})
        assert is_valid(DIAMOND, {0: 1, 1: 2, 2: 2, 3: 3})

    def test_missing_node_raises(self):
        with pytest.raises(ValueError):
            is_feasible(P3, {0: 1, 1: 2})


class TestObjective:
    def test_path(self):
        sol = objective(P3, {0: 1, 1: 2, 2: 3}, GlpWeights(1, 5))
        assert sol.objective == 2 and sol.reversed_edges == frozenset()

    def test_triangle(self):
        sol = objective(TRIANGLE, {0: 1, 1: 2, 2: 3}, GlpWeights(1, 5))
        assert sol.objective == (1 + 1 + 2) + 5
        assert sol.reversed_edges == frozenset({(2, 0)})

    def test_two_cycle(self):
        g = Graph.build(2, [(0, 1), (1, 0)])
        sol = objective(g, {0: 1, 1: 2}, GlpWeights(1, 5))
        assert sol.objective == 7
        assert sol.reversed_edges == frozenset({(1, 0)})

    def test_infeasible_raises(self):
        with pytest.raises(InfeasibleLayeringError):
            objective(P3, {0: 1, 1: 1, 2: 2}, GlpWeights(1, 5))

    def test_shift_invariance(self):
        rng = random.Random(3)
        for _ in range(60):
            n = rng.randint(1, 9)
            edges = {(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(0, 16))}
            g, _ = normalize(Graph.build(n, sorted(edges)))
            lay = {v: rng.randint(-5, 5) * 3 + v for v in range(n)}  # distinct
            w = GlpWeights(rng.randint(1, 3), rng.randint(1, 9))
            base = objective(g, lay, w)
            shift = rng.randint(-7, 7)
            moved = objective(g, {v: lay[v] + shift for v in lay}, w)
            assert base.objective == moved.objective
            assert base.reversed_edges == moved.reversed_edges
            assert metrics(g, lay) == metrics(g, {v: lay[v] + shift for v in lay})


class TestDeduceAcyclic:
    def test_triangle_flip(self):
        out, flipped = deduce_acyclic(TRIANGLE, {0: 1, 1: 2, 2: 3})
        assert flipped == frozenset({(2, 0)})
        assert out.edges == ((0, 1), (0, 2), (1, 2))
        assert out.is_acyclic()

    def test_valid_layering_changes_nothing(self):
        out, flipped = deduce_acyclic(P3, {0: 1, 1: 2, 2: 3})
        assert flipped == frozenset()
        assert out.edges == P3.edges

    def test_two_cycle_merges(self):
        g = Graph.build(2, [(0, 1), (1, 0)])
        out, flipped = deduce_acyclic(g, {0: 1, 1: 2})
        assert flipped == frozenset({(1, 0)})
        assert out.edges == ((0, 1),) and out.weights == (2,)

    def test_always_acyclic(self):
        rng = random.Random(13)
        for _ in range(60):
            n = rng.randint(2, 10)
            edges = {(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(1, 20))}
            g, _ = normalize(Graph.build(n, sorted(edges)))
            lay = {v: pos for pos, v in enumerate(rng.sample(range(n), n))}
            out, _ = deduce_acyclic(g, lay)
            assert out.is_acyclic()


class TestMetrics:
    def test_path(self):
        rep = metrics(P3, {0: 1, 1: 2, 2: 3})
        assert (rep.reversed_count, rep.edge_length_sum, rep.dummy_count) == (0, 2, 0)
        assert (rep.layer_count, rep.max_layer_width) == (3, 1)
        assert rep.est_area == 3 and rep.est_aspect_ratio == Fraction(1, 3)

    def test_long_edge_dummy(self):
        g = Graph.build(3, [(0, 1), (1, 2), (0, 2)])
        rep = metrics(g, {0: 1, 1: 2, 2: 3})
        assert rep.dummy_count == 1
        assert rep.max_layer_width == 2  # node 1 plus the dummy of edge 0->2

    def test_single_edge(self):
        rep = metrics(Graph.build(2, [(0, 1)]), {0: 1, 1: 2})
        assert (rep.dummy_count, rep.layer_count, rep.max_layer_width) == (0, 2, 1)

    def test_dummy_identity(self):
        rng = random.Random(17)
        for _ in range(60):
            n = rng.randint(1, 10)
            edges = {(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(0, 18))}
            g, _ = normalize(Graph.build(n, sorted(edges)))
            lay = {v: pos for pos, v in enumerate(rng.sample(range(n), n))}
            rep = metrics(g, lay)
            assert rep.dummy_count == rep.edge_length_sum - g.m


class TestCanonicalize:
    def test_compresses_and_shifts(self):
        assert canonicalize({0: -2, 1: 5, 2: 5, 3: 9}) == {0: 1, 1: 2, 2: 2, 3: 3}

    def test_empty(self):
        assert canonicalize({}) == {}
