import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubicfeyn import graphs
from cubicfeyn.config import DEFAULT
from cubicfeyn.errors import BoundsError, InvariantError, ValidationError
from cubicfeyn.graphs import (OrientedGraph, TrivalentGraph, automorphism_order, canonical_form,
                              disjoint_union, dumbbell, enumerate_graphs, is_connected, theta)


def random_graph(rng, nv):
    perm = rng.permutation(3 * nv)
    return TrivalentGraph(nv, tuple(tuple(perm[i:i + 2]) for i in range(0, 3 * nv, 2)))


@st.composite
def graphs_st(draw, max_vertices=6):
    nv = draw(st.sampled_from([v for v in range(2, max_vertices + 1, 2)]))
    perm = draw(st.permutations(range(3 * nv)))
    return TrivalentGraph(nv, tuple(tuple(perm[i:i + 2]) for i in range(0, 3 * nv, 2)))


class TestTrivalentGraph:
    def test_storage_is_sorted(self):
        g = TrivalentGraph(2, ((5, 2), (4, 1), (3, 0)))
        assert g.matching == ((0, 3), (1, 4), (2, 5))

    def test_repeated_half_edge_rejected(self):
        with pytest.raises(InvariantError):
            TrivalentGraph(2, ((0, 1), (0, 2), (3, 4)))

    def test_missing_half_edge_rejected(self):
        with pytest.raises(InvariantError):
            TrivalentGraph(2, ((0, 1), (2, 3)))

    def test_odd_vertex_count_rejected(self):
        with pytest.raises(InvariantError):
            TrivalentGraph(1, ((0, 1),))

    def test_self_pair_rejected(self):
        with pytest.raises(InvariantError):
            TrivalentGraph(2, ((0, 0), (1, 2), (3, 4)))

    def test_loop_order(self):
        assert theta().loop_order == 1
        assert disjoint_union(theta(), dumbbell()).loop_order == 2


class TestAutomorphisms:
    def test_one_loop_orders(self):
        assert automorphism_order(dumbbell()) == 8
        assert automorphism_order(theta()) == 12

    def test_disjoint_unions(self):
        assert automorphism_order(disjoint_union(theta(), theta())) == 2 * 12 * 12
        assert automorphism_order(disjoint_union(dumbbell(), dumbbell())) == 2 * 8 * 8
        assert automorphism_order(disjoint_union(dumbbell(), theta())) == 8 * 12
        assert automorphism_order(disjoint_union(theta(), theta(), theta())) == 6 * 12 ** 3

    def test_matches_group_sweep_through_six_vertices(self):
        for m in (1, 2, 3):
            for cls in enumerate_graphs(m).classes:
                assert graphs.automorphism_order_bruteforce(cls.graph) == cls.aut

    def test_component_split_agrees_with_whole_search(self):
        for cls in enumerate_graphs(3).classes:
            canon, aut = graphs.canonical_search_whole(cls.graph)
            assert aut == cls.aut
            assert canonical_form(canon) == cls.graph

    def test_automorphisms_are_automorphisms(self):
        for cls in enumerate_graphs(2).classes:
            auts = list(graphs.automorphisms(cls.graph))
            assert len(set(auts)) == cls.aut
            assert all(graphs.is_automorphism(cls.graph, a) for a in auts)

    @settings(max_examples=40, deadline=None)
    @given(graphs_st(), st.integers(0, 2 ** 32 - 1))
    def test_invariant_under_relabeling(self, g, seed):
        rng = np.random.default_rng(seed)
        h = graphs.apply(g, graphs.random_group_element(g.num_vertices, rng))
        assert automorphism_order(h) == automorphism_order(g)
        assert automorphism_order(canonical_form(g)) == automorphism_order(g)


class TestCanonicalForm:
    @settings(max_examples=60, deadline=None)
    @given(graphs_st(max_vertices=8))
    def test_idempotent(self, g):
        c = canonical_form(g)
        assert canonical_form(c) == c

    def test_theta_storage_orders(self):
        a = TrivalentGraph(2, ((0, 3), (1, 4), (2, 5)))
        b = TrivalentGraph(2, ((0, 4), (1, 3), (2, 5)))
        assert canonical_form(a) == canonical_form(b) == theta()

    def test_random_relabelings_of_dumbbell(self, rng):
        g = dumbbell()
        for _ in range(100):
            h = graphs.apply(g, graphs.random_group_element(2, rng))
            assert canonical_form(h) == g

    def test_relabelings_at_three_loops(self, rng):
        for cls in enumerate_graphs(3).classes:
            for _ in range(5):
                h = graphs.apply(cls.graph, graphs.random_group_element(cls.graph.num_vertices, rng))
                assert canonical_form(h) == cls.graph

    def test_is_lexicographic_minimum_of_orbit(self):
        # exhaustive over the whole group for m = 1
        for cls in enumerate_graphs(1).classes:
            g = cls.graph
            best = min(graphs.apply(g, graphs.group_element(vp, lp)).matching
                       for vp in itertools.permutations(range(2))
                       for lp in itertools.product(itertools.permutations(range(3)), repeat=2))
            assert canonical_form(g).matching == best

    def test_separates_classes(self):
        for m in (1, 2, 3, 4):
            reps = [c.graph for c in enumerate_graphs(m).classes]
            assert len({canonical_form(g) for g in reps}) == len(reps)


class TestConnectivity:
    def test_examples(self):
        assert is_connected(dumbbell())
        assert is_connected(theta())
        assert not is_connected(disjoint_union(theta(), theta()))

    def test_components(self):
        g = disjoint_union(theta(), dumbbell(), theta())
        assert sorted(len(c) for c in graphs.components(g)) == [2, 2, 2]


class TestEnumeration:
    def test_one_loop(self):
        table = enumerate_graphs(1)
        assert [c.graph for c in table.classes] == [dumbbell(), theta()]
        assert [c.aut for c in table.classes] == [8, 12]
        assert [c.multiplicity for c in table.classes] == [9, 6]
        assert table.total_multiplicity() == 15

    @pytest.mark.parametrize("m,num,conn", [(1, 2, 2), (2, 8, 5), (3, 31, 17), (4, 140, 71)])
    def test_class_counts(self, m, num, conn):
        table = enumerate_graphs(m)
        assert len(table.classes) == num
        assert len(table.connected()) == conn

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_orbit_stabilizer(self, m):
        table = enumerate_graphs(m)
        for c in table.classes:
            assert c.multiplicity * c.aut == math.factorial(2 * m) * 6 ** (2 * m)
        assert table.total_multiplicity() == graphs.double_factorial(6 * m - 1)

    def test_multiplicities_match_exhaustive_pairing_count(self):
        for m in (1, 2):
            counts = graphs.classify_all_pairings(m)
            table = enumerate_graphs(m)
            assert dict(counts) == {c.graph: c.multiplicity for c in table.classes}

    def test_sorted_and_deterministic(self):
        a = enumerate_graphs(3)
        graphs.connected_classes.cache_clear()
        b = enumerate_graphs(3)
        assert a == b
        keys = [c.graph.matching for c in a.classes]
        assert keys == sorted(keys)

    def test_m_zero(self):
        assert enumerate_graphs(0).classes[0].aut == 1

    def test_bounds(self):
        with pytest.raises(BoundsError, match="max_loop_order=4"):
            enumerate_graphs(5)
        with pytest.raises(BoundsError, match="max_loop_order=2"):
            enumerate_graphs(3, DEFAULT.replace(max_loop_order=2))
        with pytest.raises(BoundsError):
            enumerate_graphs(-1)


class TestOrientation:
    def test_identity_sign(self):
        og = OrientedGraph.standard(theta())
        assert graphs.orientation_sign(og, og, tuple(range(6))) == 1

    def test_single_swap(self):
        og = OrientedGraph.standard(theta())
        assert graphs.orientation_sign(og, og.reversed_at(0), tuple(range(6))) == -1

    def test_cyclic_rotation_is_same_orientation(self):
        og = OrientedGraph(theta(), ((1, 2, 0), (3, 4, 5)))
        assert og.same_orientation(OrientedGraph.standard(theta()))
        assert not og.reversed_at(1).same_orientation(OrientedGraph.standard(theta()))

    def test_dumbbell_has_odd_automorphism(self):
        og = OrientedGraph.standard(dumbbell())
        signs = {graphs.orientation_sign(og, og, a) for a in graphs.automorphisms(dumbbell())}
        assert signs == {1, -1}
        swap_loop = (1, 0, 2, 3, 4, 5)
        assert graphs.orientation_sign(og, og, swap_loop) == -1

    def test_rejects_non_isomorphism(self):
        og = OrientedGraph.standard(theta())
        with pytest.raises(ValidationError):
            graphs.orientation_sign(og, og, (0, 1, 3, 2, 4, 5))
        with pytest.raises(ValidationError):
            graphs.orientation_sign(og, OrientedGraph.standard(dumbbell()), tuple(range(6)))

    def test_bad_orientation_rejected(self):
        with pytest.raises(InvariantError):
            OrientedGraph(theta(), ((0, 1, 3), (2, 4, 5)))


def test_json_roundtrip():
    g = enumerate_graphs(2).classes[3].graph
    assert TrivalentGraph(g.to_json()["num_vertices"], tuple(map(tuple, g.to_json()["matching"]))) == g


def test_random_graph_helper_is_valid(rng):
    for nv in (2, 4, 6, 8):
        assert random_graph(rng, nv).num_half_edges == 3 * nv
