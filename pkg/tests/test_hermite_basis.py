import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial.hermite import hermgauss
from scipy.special import eval_hermite, gammaln

from hermite_sobolev.hermite_basis import (
    DimensionError,
    MultiIndex,
    ResolutionError,
    SpectralCoefficients,
    analyze,
    build_quadrature,
    eval_hermite_1d,
    eval_hermite_tensor,
    hermite_functions,
    log_abs_hermite,
    multi_indices,
    synthesize,
    synthesize_grid,
)


def closed_form(n, x):
    """h_n from the physicists' polynomial; fine for moderate n."""
    log_norm = 0.5 * (n * math.log(2.0) + gammaln(n + 1) + 0.5 * math.log(math.pi))
    return eval_hermite(n, x) * np.exp(-x * x / 2 - log_norm)


class TestMultiIndex:
    def test_order_and_units(self):
        a = MultiIndex((2, 0, 3))
        assert a.order == 5 and a.d == 3
        assert MultiIndex.unit(3, 2).degrees == (0, 1, 0)
        assert a.shifted(2, 1).degrees == (2, 1, 3)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            MultiIndex((1, -1))
        with pytest.raises(ValueError):
            MultiIndex((0, 0)).shifted(1, -1)

    def test_graded_lex_order(self):
        idx = multi_indices(2, 2)
        assert [a.degrees for a in idx] == [(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]

    @given(st.integers(1, 3), st.integers(0, 6))
    def test_count(self, d, n):
        assert len(multi_indices(d, n)) == math.comb(n + d, d)


class TestEvaluation:
    def test_h5_closed_form(self):
        x = 1.3
        h5 = (32 * x**5 - 160 * x**3 + 120 * x) * math.exp(-x * x / 2)
        h5 /= math.sqrt(2**5 * math.factorial(5) * math.sqrt(math.pi))
        assert eval_hermite_1d(5, x) == pytest.approx(h5, rel=1e-14)

    @pytest.mark.parametrize("n", [0, 1, 2, 7, 20, 40])
    def test_against_polynomial_oracle(self, n):
        x = np.linspace(-8, 8, 101)
        np.testing.assert_allclose(eval_hermite_1d(n, x), closed_form(n, x), rtol=1e-11, atol=1e-14)

    def test_table_matches_single(self):
        x = np.linspace(-5, 5, 33)
        tab = hermite_functions(15, x)
        assert tab.shape == (16, 33)
        np.testing.assert_allclose(tab[11], eval_hermite_1d(11, x), rtol=1e-14, atol=1e-300)

    def test_huge_degree_stays_finite(self):
        v = eval_hermite_1d(10000, np.array([0.0, 50.0, 150.0]))
        assert np.all(np.isfinite(v))
        assert abs(v[2]) < 1e-100

    def test_log_abs_far_tail(self):
        sign, logv = log_abs_hermite(3, np.array([60.0]))
        ref = math.log(8 * 60.0**3 - 12 * 60.0) - 1800 - 0.5 * math.log(2**3 * 6 * math.sqrt(math.pi))
        assert sign[0] == 1.0
        assert logv[0] == pytest.approx(ref, rel=1e-12)

    def test_parity(self):
        x = np.linspace(0.1, 4, 9)
        for n in range(6):
            np.testing.assert_allclose(eval_hermite_1d(n, -x), (-1) ** n * eval_hermite_1d(n, x), atol=1e-15)

    def test_tensor_product(self):
        x = np.array([[0.3, -1.1], [2.0, 0.5]])
        want = eval_hermite_1d(2, x[:, 0]) * eval_hermite_1d(3, x[:, 1])
        np.testing.assert_allclose(eval_hermite_tensor((2, 3), x), want)
        with pytest.raises(DimensionError):
            eval_hermite_tensor((1, 1, 1), x)

    def test_negative_degree(self):
        with pytest.raises(ValueError):
            eval_hermite_1d(-1, 0.0)


class TestQuadrature:
    @pytest.mark.parametrize("n", [1, 2, 5, 40, 100])
    def test_matches_numpy(self, n):
        x, w = hermgauss(n)
        rule = build_quadrature(n)
        np.testing.assert_allclose(rule.nodes, x, atol=1e-13 * max(1, n))
        np.testing.assert_allclose(rule.gaussian_weights(), w, rtol=1e-10 if n < 100 else 1e-7, atol=1e-300)

    def test_large_rule_weights_finite(self):
        rule = build_quadrature(800)
        assert np.all(np.isfinite(rule.log_weights))
        assert np.all(np.diff(rule.nodes) > 0)

    def test_orthonormality(self):
        rule = build_quadrature(80)
        tab = hermite_functions(30, rule.nodes)
        gram = rule.integrate((tab[:, None, :] * tab[None, :, :]).transpose(2, 0, 1))
        np.testing.assert_allclose(gram, np.eye(31), atol=1e-13)


class TestCoefficients:
    def test_validation(self):
        with pytest.raises(ValueError):
            SpectralCoefficients(np.ones((3, 3)))  # (2,2) has order 4 > 2
        with pytest.raises(ValueError):
            SpectralCoefficients(np.ones((2, 3)))
        c = SpectralCoefficients(np.array([1.0, 2.0]), max_order=4)
        assert c.max_order == 4 and c.values.shape == (5,)

    def test_read_only(self):
        c = SpectralCoefficients.basis((1, 0))
        with pytest.raises(ValueError):
            c.values[0, 0] = 1.0

    def test_arithmetic(self):
        a = SpectralCoefficients.from_entries(1, {0: 1.0, 2: 3.0})
        b = SpectralCoefficients.basis(4)
        s = a + 2 * b - a
        assert s == 2 * b
        assert (a / 2).norm() == pytest.approx(math.sqrt(10) / 2)
        assert a.inner(a) == pytest.approx(10.0)
        assert a.degree == 2 and len(a) == 2

    def test_partial_sum(self):
        c = SpectralCoefficients.from_entries(2, {(0, 0): 1.0, (1, 1): 2.0, (0, 3): 5.0})
        s = c.with_max_order(2)
        assert s.max_order == 2
        assert s[(1, 1)] == 2.0
        assert s.degree == 2

    @given(st.integers(1, 3), st.integers(0, 5), st.integers(0, 2**31 - 1))
    @settings(max_examples=30, deadline=None)
    def test_json_round_trip(self, d, n, seed):
        c = SpectralCoefficients.random(d, n, np.random.default_rng(seed))
        back = SpectralCoefficients.from_json(c.to_json())
        assert back.with_max_order(n) == c

    def test_complex_round_trip(self):
        c = SpectralCoefficients.from_entries(1, {1: 1 + 2j, 3: -0.5})
        back = SpectralCoefficients.from_json(c.to_json())
        assert back == c and back.is_complex


class TestTransforms:
    def test_basis_round_trip(self):
        for n in (0, 3, 17):
            c = analyze(lambda x, n=n: eval_hermite_1d(n, x), 20)
            np.testing.assert_allclose(c.values, np.eye(21)[n], atol=1e-13)

    def test_gaussian_coefficients(self):
        # e^{-x^2/2} = pi^{1/4} h_0
        c = analyze(lambda x: np.exp(-x * x / 2), 10)
        assert c[0] == pytest.approx(math.pi**0.25, rel=1e-14)
        assert np.max(np.abs(c.values[1:])) < 1e-14

    def test_two_dimensional(self):
        c = analyze(lambda x, y: eval_hermite_1d(1, x) * eval_hermite_1d(2, y), 4, d=2)
        assert c[(1, 2)] == pytest.approx(1.0, abs=1e-13)
        assert abs(np.sum(np.abs(c.values)) - 1.0) < 1e-12

    def test_resolution_probe(self):
        with pytest.raises(ResolutionError):
            analyze(np.cos, 30, rule=build_quadrature(20))
        # 31 nodes integrate h_30^2 exactly, so the probe accepts it
        analyze(np.cos, 30, rule=build_quadrature(31))

    @given(st.integers(0, 2**31 - 1), st.integers(0, 12))
    @settings(max_examples=25, deadline=None)
    def test_synthesize_analyze_identity(self, seed, n):
        c = SpectralCoefficients.random(1, n, np.random.default_rng(seed))
        back = analyze(lambda x: synthesize(c, x), n)
        np.testing.assert_allclose(back.values, c.values, atol=1e-12)

    def test_grid_matches_points(self):
        c = SpectralCoefficients.random(2, 4, np.random.default_rng(1))
        ax = np.linspace(-2, 2, 5)
        grid = synthesize_grid(c, ax)
        pts = np.stack(np.meshgrid(ax, ax, indexing="ij"), axis=-1)
        np.testing.assert_allclose(grid, synthesize(c, pts), atol=1e-14)
