import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubicfeyn import graphs, oracles
from cubicfeyn.errors import BoundsError, DegenerateFormError, DimensionError, DomainError, InvariantError
from cubicfeyn.wick import (EUCLIDEAN, OSCILLATORY, QuadraticForm, enumerate_pairings, gaussian_normalization,
                            moment_wick, pairing_to_graph)


def random_form(rng, n, shift=0.5):
    a = rng.normal(size=(n, n))
    return QuadraticForm(a @ a.T + shift * np.eye(n))


class TestQuadraticForm:
    def test_inverse_and_signature(self):
        form = QuadraticForm([[2.0, 1.0], [1.0, -3.0]])
        assert np.allclose(form.q @ form.inverse, np.eye(2), atol=1e-12)
        assert form.signature == (1, 1)
        assert form.sign == 0
        assert form.abs_det == pytest.approx(7.0)
        assert not form.positive_definite

    def test_degenerate(self):
        with pytest.raises(DegenerateFormError, match="det_floor"):
            QuadraticForm([[1.0, 1.0], [1.0, 1.0]])
        with pytest.raises(DegenerateFormError):
            QuadraticForm([[1e-11]])
        QuadraticForm([[1e-11]], det_floor=1e-12)

    def test_asymmetric(self):
        with pytest.raises(InvariantError):
            QuadraticForm([[1.0, 0.1], [0.0, 1.0]])

    def test_shape(self):
        with pytest.raises(DimensionError):
            QuadraticForm([[1.0, 0.0]])


class TestNormalization:
    def test_one_dim(self):
        one = QuadraticForm([[1.0]])
        assert gaussian_normalization(one, EUCLIDEAN) == pytest.approx(math.sqrt(2 * math.pi))
        assert gaussian_normalization(one, OSCILLATORY) == pytest.approx(
            math.sqrt(2 * math.pi) * cmath.exp(1j * math.pi / 4))

    def test_signature_cancels(self):
        assert gaussian_normalization(QuadraticForm(np.diag([1.0, -1.0]))) == pytest.approx(2 * math.pi)

    def test_k_dependence(self):
        form = QuadraticForm(np.diag([2.0, 3.0, 5.0]))
        assert gaussian_normalization(form, EUCLIDEAN, k=4.0) == pytest.approx(
            (2 * math.pi / 4) ** 1.5 / math.sqrt(30))

    def test_euclidean_needs_definite(self):
        with pytest.raises(DomainError):
            gaussian_normalization(QuadraticForm(np.diag([1.0, -1.0])), EUCLIDEAN)

    def test_euclidean_matches_quadrature(self, rng):
        form = random_form(rng, 2)
        zero = gaussian_normalization(form, EUCLIDEAN)
        # the quadrature oracle normalizes, so check the unnormalized integral directly
        x = np.linspace(-12, 12, 1201)
        xx, yy = np.meshgrid(x, x, indexing="ij")
        pts = np.stack([xx.ravel(), yy.ravel()], axis=1)
        vals = np.exp(-0.5 * np.einsum("pi,ij,pj->p", pts, form.q, pts))
        assert zero.real == pytest.approx(vals.sum() * (x[1] - x[0]) ** 2, rel=1e-8)


class TestPairings:
    @pytest.mark.parametrize("d,count", [(0, 1), (2, 1), (6, 15), (12, 10395)])
    def test_counts(self, d, count):
        assert sum(1 for _ in enumerate_pairings(d)) == count

    def test_each_once_and_deterministic(self):
        a = list(enumerate_pairings(8))
        assert len(set(a)) == len(a) == 105
        assert a == list(enumerate_pairings(8))
        for p in a:
            assert sorted(x for pair in p for x in pair) == list(range(8))

    def test_odd(self):
        with pytest.raises(ValueError):
            list(enumerate_pairings(5))

    def test_bound(self):
        with pytest.raises(BoundsError):
            list(enumerate_pairings(26))


class TestMoments:
    def test_odd_degree_is_zero(self, rng):
        form = random_form(rng, 3)
        assert moment_wick(form, [1]) == 0
        assert moment_wick(form, [0, 1, 2]) == 0

    def test_second_moment(self, rng):
        form = random_form(rng, 3)
        assert moment_wick(form, [0, 2]) == pytest.approx(1j * form.inverse[0, 2])

    def test_sixth_moment(self):
        one = QuadraticForm([[1.0]])
        assert moment_wick(one, [0] * 6, EUCLIDEAN) == 15
        assert oracles.monomial_moment_quadrature(one, [0] * 6) == pytest.approx(15, rel=1e-12)

    def test_index_range(self):
        with pytest.raises(DimensionError):
            moment_wick(QuadraticForm([[1.0]]), [0, 1])

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 3), st.integers(1, 4), st.integers(0, 2 ** 32 - 1))
    def test_against_pairing_sum(self, n, half, seed):
        rng = np.random.default_rng(seed)
        form = random_form(rng, n, shift=1.0)
        idx = [int(i) for i in rng.integers(0, n, size=2 * half)]
        for variant in (EUCLIDEAN, OSCILLATORY):
            fast = moment_wick(form, idx, variant)
            slow = oracles.wick_by_pairings(form, idx, variant)
            assert abs(fast - slow) <= 1e-12 * max(1.0, abs(slow))

    def test_distinct_indices_sum_products_exactly(self, rng):
        form = random_form(rng, 6)
        idx = list(range(6))
        ref = sum(math.prod(form.inverse[idx[a], idx[b]] for a, b in p) for p in enumerate_pairings(6))
        assert moment_wick(form, idx, EUCLIDEAN).real == pytest.approx(ref, rel=1e-14)

    def test_oscillatory_phase(self, rng):
        form = random_form(rng, 3)
        for d in (2, 4, 6, 8):
            idx = [int(i) for i in rng.integers(0, 3, size=d)]
            assert moment_wick(form, idx, OSCILLATORY) == pytest.approx(
                1j ** (d // 2) * moment_wick(form, idx, EUCLIDEAN), rel=1e-13)

    def test_against_quadrature(self, rng):
        for _ in range(20):
            n = int(rng.integers(1, 4))
            form = random_form(rng, n)
            idx = [int(i) for i in rng.integers(0, n, size=2 * int(rng.integers(1, 5)))]
            wick = moment_wick(form, idx, EUCLIDEAN).real
            quad = oracles.monomial_moment_quadrature(form, idx)
            assert abs(wick - quad) <= 1e-8 * max(abs(wick), abs(quad))


class TestPairingToGraph:
    def test_one_loop_examples(self):
        assert graphs.canonical_form(pairing_to_graph(((0, 1), (3, 4), (2, 5)), 1)) == graphs.dumbbell()
        assert pairing_to_graph(((0, 3), (1, 4), (2, 5)), 1) == graphs.theta()

    def test_fifteen_split_nine_six(self):
        from collections import Counter
        counts = Counter(graphs.canonical_form(pairing_to_graph(p, 1)) for p in enumerate_pairings(6))
        assert counts == {graphs.dumbbell(): 9, graphs.theta(): 6}
