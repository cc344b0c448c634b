import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from hermite_sobolev.function_spaces import (
    BoundaryDecayError,
    GridFunction,
    classical_sobolev_apply,
    default_grid,
    grid_lp_norm,
    hermite_sobolev_norm,
    hilbert_transform,
    lp_norm,
    potential_norm,
    sobolev_words,
)
from hermite_sobolev.hermite_basis import ResolutionError, SpectralCoefficients
from hermite_sobolev.spectral_operators import apply_word


class TestGridFunction:
    def test_validation(self):
        with pytest.raises(ValueError):
            GridFunction(3, 5.0, 0.5, np.zeros((21,) * 3))
        with pytest.raises(ValueError):
            GridFunction(1, 4.0, 0.5, np.zeros(17))
        with pytest.raises(ValueError):
            GridFunction(1, 5.0, 0.3, np.zeros(34))
        with pytest.raises(ValueError):
            GridFunction(1, 5.0, 0.5, np.zeros(20))

    def test_samples_read_only(self):
        g = GridFunction.from_callable(np.cos, L=5, h=0.5)
        with pytest.raises(ValueError):
            g.samples[0] = 1.0

    def test_axis_and_csv(self):
        g = GridFunction.from_callable(lambda x: x, L=5, h=2.5)
        assert list(g.axis) == [-5.0, -2.5, 0.0, 2.5, 5.0]
        text = g.to_csv()
        assert text.splitlines()[0] == "x,value"
        assert text.splitlines()[3] == "0,0"

    def test_two_dimensional(self):
        g = GridFunction.from_callable(lambda x, y: x + 2 * y, d=2, L=5, h=1.0)
        assert g.shape == (11, 11)
        assert g.samples[10, 0] == pytest.approx(5.0 - 10.0)
        assert g.to_csv().splitlines()[0] == "x,y,value"


class TestLpNorms:
    @pytest.mark.parametrize("p", [1.0, 2.0, 3.0, 8.0])
    def test_gaussian(self, p):
        g = GridFunction.from_callable(lambda x: np.exp(-x * x / 2))
        assert lp_norm(g, p) == pytest.approx((2 * math.pi / p) ** (1 / (2 * p)), rel=1e-12)

    def test_sup_norm_and_zero(self):
        assert grid_lp_norm(np.array([1.0, -3.0, 2.0]), 0.1, math.inf) == 3.0
        assert grid_lp_norm(np.zeros(5), 0.1, 2.0) == 0.0
        with pytest.raises(ValueError):
            grid_lp_norm(np.ones(3), 0.1, 0.5)

    def test_no_underflow_for_tiny_samples(self):
        s = 1e-200 * np.exp(-np.linspace(-5, 5, 101) ** 2)
        assert grid_lp_norm(s, 0.1, 8.0) > 0


class TestHermiteSobolev:
    def test_ground_state_terms(self):
        rep = hermite_sobolev_norm(SpectralCoefficients.basis(0), 1, 2.0)
        assert rep.terms[()] == pytest.approx(1.0, rel=1e-12)
        assert rep.terms[(-1,)] == pytest.approx(math.sqrt(2), rel=1e-12)
        assert rep.terms[(1,)] == 0.0

    def test_first_excited_total(self):
        rep = hermite_sobolev_norm(SpectralCoefficients.basis(1), 1, 2.0)
        assert rep.total == pytest.approx(3 + math.sqrt(2), rel=1e-12)

    def test_word_count(self):
        rep = hermite_sobolev_norm(SpectralCoefficients.basis((1, 0)), 2, 2.0)
        assert len(rep.terms) == 21
        assert len(sobolev_words(3, 2)) == 6 + 36

    @given(st.integers(0, 2**31 - 1), st.integers(0, 8), st.integers(1, 2))
    @settings(max_examples=15, deadline=None)
    def test_parseval(self, seed, n, k):
        c = SpectralCoefficients.random(1, n, np.random.default_rng(seed))
        rep = hermite_sobolev_norm(c, k, 2.0)
        want = c.norm() + sum(apply_word(w, c).norm() for w in sobolev_words(1, k))
        assert rep.total == pytest.approx(want, rel=1e-9)

    def test_resolution_error(self):
        with pytest.raises(ResolutionError):
            hermite_sobolev_norm(SpectralCoefficients.basis(200), 1, 2.0)

    def test_default_grids(self):
        assert default_grid(1) == (15.0, 0.01)
        assert default_grid(2) == (8.0, 0.05)


class TestPotentialNorm:
    def test_eigenfunction(self):
        assert potential_norm(SpectralCoefficients.basis(2), 1.0, 2.0) == pytest.approx(math.sqrt(5), rel=1e-12)

    @given(st.integers(0, 2**31 - 1), st.floats(-1.5, 2.0))
    @settings(max_examples=15, deadline=None)
    def test_parseval(self, seed, a):
        c = SpectralCoefficients.random(2, 5, np.random.default_rng(seed))
        want = math.sqrt(float(np.sum(c.eigenvalues() ** a * c.values**2)))
        assert potential_norm(c, a, 2.0) == pytest.approx(want, rel=1e-9)


class TestClassicalSobolev:
    def test_second_order_on_gaussian(self):
        g = GridFunction.from_callable(lambda x: np.exp(-x * x / 2))
        out = classical_sobolev_apply(g, 2.0)
        x = g.axis
        np.testing.assert_allclose(out.samples, (2 - x * x) * np.exp(-x * x / 2), atol=1e-9)

    def test_round_trip(self):
        g = GridFunction.from_callable(lambda x: np.exp(-x * x), L=40, h=0.02)
        back = classical_sobolev_apply(classical_sobolev_apply(g, 0.7), -0.7)
        np.testing.assert_allclose(back.samples, g.samples, atol=1e-10)

    def test_boundary_check(self):
        with pytest.raises(BoundaryDecayError):
            classical_sobolev_apply(GridFunction.from_callable(np.cos), 1.0)


class TestHilbert:
    def test_principal_value_is_dawson(self):
        g = GridFunction.from_callable(lambda x: np.exp(-x * x), L=20, h=0.01)
        out = hilbert_transform(g, 0.0)
        x = g.axis
        sel = np.abs(x) < 10
        np.testing.assert_allclose(out.samples[sel], 2 * math.sqrt(math.pi) * special.dawsn(x[sel]), atol=1e-4)

    def test_truncated_against_quad(self):
        h, eps = 0.01, 0.505
        g = GridFunction.from_callable(lambda x: np.exp(-x * x), L=20, h=h)
        out = hilbert_transform(g, eps)
        for x in (0.0, 0.7, 2.0):
            f = lambda y: math.exp(-(x - y) ** 2) / y  # noqa: E731
            ref = integrate.quad(f, eps, 40)[0] + integrate.quad(f, -40, -eps)[0]
            i = int(round((x + 20) / h))
            assert out.samples[i] == pytest.approx(ref, abs=1e-4)

    def test_spacing_guard(self):
        g = GridFunction.from_callable(np.exp, L=5, h=0.1)
        with pytest.raises(ValueError):
            hilbert_transform(g, 0.05)
        with pytest.raises(ValueError):
            hilbert_transform(g, -1.0)
