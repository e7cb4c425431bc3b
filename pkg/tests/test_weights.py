import math

import numpy as np
import pytest

from cubicfeyn import graphs, oracles
from cubicfeyn.errors import DimensionError, InvariantError
from cubicfeyn.graphs import disjoint_union, dumbbell, enumerate_graphs, theta
from cubicfeyn.weights import (CubicModel, CubicTensor, contract_network, graph_weight, symmetrize3,
                               weight_multiplicative)
from cubicfeyn.wick import QuadraticForm, enumerate_pairings


def scalar_model(q, v):
    return CubicModel(QuadraticForm([[q]]), CubicTensor([[[v]]]))


class TestCubicTensor:
    def test_symmetric_required(self):
        with pytest.raises(InvariantError):
            CubicTensor(np.arange(8.0).reshape(2, 2, 2))

    def test_from_entries_preserves_cubic_form(self, rng):
        entries = [[0, 0, 1, 1.5], [1, 0, 0, 0.5], [1, 1, 1, -0.3], [0, 1, 1, 2.0]]
        tensor, was_symmetric = CubicTensor.from_entries(2, entries)
        assert not was_symmetric
        raw = np.zeros((2, 2, 2))
        for i, j, k, val in entries:
            raw[i, j, k] += val
        for _ in range(5):
            x = rng.normal(size=2)
            assert tensor.cubic(x) == pytest.approx(np.einsum("ijk,i,j,k", raw, x, x, x))

    def test_duplicates_summed(self):
        tensor, _ = CubicTensor.from_entries(1, [[0, 0, 0, 1.0], [0, 0, 0, 2.0]])
        assert tensor.v[0, 0, 0] == 3.0

    def test_symmetric_entries_are_exact(self):
        entries = [[0, 0, 1, 0.1], [0, 1, 0, 0.1], [1, 0, 0, 0.1]]
        tensor, was_symmetric = CubicTensor.from_entries(2, entries)
        assert was_symmetric
        assert tensor.entries() == entries

    def test_index_range(self):
        with pytest.raises(DimensionError):
            CubicTensor.from_entries(2, [[0, 0, 2, 1.0]])

    def test_model_dimensions(self):
        with pytest.raises(DimensionError):
            CubicModel(QuadraticForm(np.eye(2)), CubicTensor(np.zeros((3, 3, 3))))


class TestGraphWeight:
    def test_scalar_values(self):
        model = scalar_model(2.0, 0.7)
        expected = 0.7 ** 2 * 2.0 ** -3
        assert graph_weight(model, dumbbell()) == pytest.approx(expected)
        assert graph_weight(model, theta()) == pytest.approx(expected)
        assert graph_weight(model, disjoint_union(dumbbell(), theta())) == pytest.approx(0.7 ** 4 * 2.0 ** -6)

    def test_empty_graph(self, make_model):
        assert graph_weight(make_model(2), graphs.EMPTY) == 1.0

    def test_single_entry_theta_against_loop(self):
        v = symmetrize3(np.eye(2)[0][:, None, None] * np.eye(2)[0][None, :, None] * np.eye(2)[1][None, None, :])
        model = CubicModel(QuadraticForm(np.eye(2)), CubicTensor(v))
        loop = sum(v[a, b, c] * v[a, b, c] for a in range(2) for b in range(2) for c in range(2))
        assert graph_weight(model, theta()) == pytest.approx(loop, rel=1e-15)
        assert graph_weight(model, theta()) == pytest.approx(
            oracles.naive_graph_weight(v, np.eye(2), theta()), rel=1e-15)

    def test_against_naive_loop(self, make_model):
        for n, m in ((2, 1), (3, 1), (2, 2)):
            model = make_model(n)
            for cls in enumerate_graphs(m).classes:
                fast = graph_weight(model, cls.graph)
                slow = oracles.naive_graph_weight(model.cubic.v, model.quadratic.inverse, cls.graph)
                assert fast == pytest.approx(slow, rel=1e-12, abs=1e-14)

    def test_isomorphism_invariance(self, make_model, rng):
        model = make_model(3)
        for cls in enumerate_graphs(2).classes:
            h = graphs.apply(cls.graph, graphs.random_group_element(cls.graph.num_vertices, rng))
            assert graph_weight(model, h) == pytest.approx(graph_weight(model, cls.graph), rel=1e-12)

    def test_contraction_order_irrelevant(self, make_model, rng):
        model = make_model(3)
        for cls in enumerate_graphs(3).classes:
            ref = graph_weight(model, cls.graph)
            for _ in range(3):
                other = graph_weight(model, cls.graph, order=rng)
                assert other == pytest.approx(ref, rel=1e-12, abs=1e-13)

    def test_explicit_order(self, make_model):
        model = make_model(2)
        g = theta()
        assert graph_weight(model, g, order=list(reversed(g.matching))) == pytest.approx(graph_weight(model, g))

    def test_antisymmetric_vertex_kills_dumbbell(self, rng):
        from cubicfeyn.lie import antisymmetrize3
        c = antisymmetrize3(rng.normal(size=(4, 4, 4)))
        g = dumbbell()
        w = contract_network([c, c], [(0, 1, 2), (3, 4, 5)], g.matching, np.eye(4))
        assert abs(w) < 1e-14

    def test_wick_sum_reorganizes_into_classes(self, rng):
        # sum over all 15 pairings of six legs equals sum of multiplicity * weight
        for _ in range(50):
            n = int(rng.integers(1, 4))
            a = rng.normal(size=(n, n))
            form = QuadraticForm(a @ a.T + n * np.eye(n))
            v = symmetrize3(rng.normal(size=(n, n, n)))
            model = CubicModel(form, CubicTensor(v))
            raw = oracles.raw_pairing_sum(v, form.inverse, 1)
            grouped = sum(c.multiplicity * graph_weight(model, c.graph) for c in enumerate_graphs(1).classes)
            assert raw == pytest.approx(grouped, rel=1e-12, abs=1e-12)


class TestMultiplicativity:
    def test_union(self, make_model):
        model = make_model(3)
        rec = weight_multiplicative(model, dumbbell(), theta())
        assert rec.relative_difference <= 1e-12

    def test_larger_union(self, make_model):
        model = make_model(2)
        g1, g2 = enumerate_graphs(2).classes[-1].graph, theta()
        assert weight_multiplicative(model, g1, g2).relative_difference <= 1e-12

    def test_aut_of_union(self):
        assert graphs.automorphism_order(disjoint_union(dumbbell(), dumbbell())) == 2 * 8 * 8


def test_pairing_count_matches_classes():
    assert sum(1 for _ in enumerate_pairings(12)) == sum(c.multiplicity for c in enumerate_graphs(2).classes)
    assert math.prod(range(1, 12, 2)) == 10395
