import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hermite_sobolev.hermite_basis import SpectralCoefficients, analyze, eval_hermite_1d, synthesize
from hermite_sobolev.spectral_operators import (
    LadderWord,
    MultiplierSpec,
    SymbolError,
    apply_H,
    apply_ladder,
    apply_multiplier,
    apply_word,
    heat_evolve,
    ladder_identity_constants,
    ladder_words,
    power,
    riesz,
    riesz_adjoint,
    riesz_higher,
    schrodinger_evolve,
)

coeffs = st.builds(
    lambda d, n, seed: SpectralCoefficients.random(d, n, np.random.default_rng(seed)),
    st.integers(1, 3),
    st.integers(0, 6),
    st.integers(0, 2**31 - 1),
)


def letters(d):
    return [j for j in range(-d, d + 1) if j]


class TestLadder:
    def test_lowering_and_raising(self):
        e = SpectralCoefficients.basis((2, 1))
        down = apply_ladder(1, e)
        assert down[(1, 1)] == pytest.approx(2.0)
        up = apply_ladder(-2, e)
        assert up[(2, 2)] == pytest.approx(2.0)
        assert apply_ladder(2, SpectralCoefficients.basis((3, 0))).norm() == 0.0

    def test_matches_derivative(self):
        # A_1 = d/dx + x, checked on the grid against a centred difference
        c = SpectralCoefficients.from_entries(1, {0: 0.3, 3: -1.0, 5: 0.5})
        x = np.linspace(-4, 4, 81)
        h = 1e-5
        deriv = (synthesize(c, x + h) - synthesize(c, x - h)) / (2 * h)
        np.testing.assert_allclose(synthesize(apply_ladder(1, c), x), deriv + x * synthesize(c, x), atol=1e-8)
        np.testing.assert_allclose(synthesize(apply_ladder(-1, c), x), -deriv + x * synthesize(c, x), atol=1e-8)

    @given(coeffs, st.integers(0, 2**31 - 1))
    @settings(max_examples=40, deadline=None)
    def test_adjoint_pairs(self, c, seed):
        g = SpectralCoefficients.random(c.d, c.max_order + 1, np.random.default_rng(seed))
        for j in letters(c.d):
            assert apply_ladder(j, c).inner(g) == pytest.approx(c.inner(apply_ladder(-j, g)), abs=1e-10)

    @given(coeffs)
    @settings(max_examples=40, deadline=None)
    def test_factorization(self, c):
        half = SpectralCoefficients.zeros(c.d)
        for j in range(1, c.d + 1):
            half = half + apply_ladder(j, apply_ladder(-j, c)) + apply_ladder(-j, apply_ladder(j, c))
        assert (half * 0.5).allclose(apply_H(c), atol=1e-10)

    @given(coeffs, st.floats(-2, 2))
    @settings(max_examples=40, deadline=None)
    def test_commutation(self, c, b):
        for j in range(1, c.d + 1):
            lhs = apply_ladder(j, apply_multiplier(power(b), c))
            rhs = apply_multiplier(power(b, 2), apply_ladder(j, c))
            assert lhs.allclose(rhs, atol=1e-10, rtol=1e-12)

    def test_word_order(self):
        # A_1 A_{-1} h_0 = 2 h_0, while A_{-1} A_1 h_0 = 0
        e = SpectralCoefficients.basis(0)
        assert apply_word((1, -1), e)[0] == pytest.approx(2.0)
        assert apply_word((-1, 1), e).norm() == 0.0
        assert LadderWord((1, -2)).adjoint().letters == (2, -1)
        assert len(ladder_words(2, 2)) == 16

    def test_bad_letters(self):
        with pytest.raises(ValueError):
            LadderWord((0,))
        with pytest.raises(ValueError):
            apply_ladder(3, SpectralCoefficients.basis((0, 0)))


class TestMultipliers:
    def test_singular_symbol_on_occupied_cell(self):
        c = SpectralCoefficients.basis(0)  # eigenvalue 1
        with pytest.raises(SymbolError):
            apply_multiplier(MultiplierSpec(lambda lam: 1.0 / (lam - 1.0)), c)
        with pytest.raises(SymbolError):
            apply_multiplier(power(-0.5, shift=-2), c)  # (1 - 2)^{-1/2}

    def test_unoccupied_poles_ignored(self):
        c = SpectralCoefficients.basis(3)
        out = apply_multiplier(MultiplierSpec(lambda lam: 1.0 / (lam - 1.0)), c)
        assert out[3] == pytest.approx(1 / 6)

    def test_shift_validation(self):
        with pytest.raises(ValueError):
            MultiplierSpec(np.sqrt, shift=1)

    def test_riesz_sum(self):
        rng = np.random.default_rng(5)
        c = SpectralCoefficients.random(2, 6, rng)
        total = SpectralCoefficients.zeros(2)
        for j in letters(2):
            total = total + riesz_adjoint(j, riesz(j, c))
        assert total.allclose(c * 2.0, atol=1e-12)

    def test_riesz_higher_example(self):
        out = riesz_higher((1, 1), SpectralCoefficients.basis(2))
        assert out[0] == pytest.approx(2 * math.sqrt(2) / 5, rel=1e-14)

    def test_power_inverse(self):
        c = SpectralCoefficients.random(1, 8, np.random.default_rng(2))
        back = apply_multiplier(power(0.7), apply_multiplier(power(-0.7), c))
        assert back.allclose(c, atol=1e-13)


class TestPropagators:
    @given(coeffs, st.floats(0, 3), st.floats(0, 3))
    @settings(max_examples=30, deadline=None)
    def test_heat_semigroup(self, c, s, t):
        assert heat_evolve(s, heat_evolve(t, c)).allclose(heat_evolve(s + t, c), atol=1e-12)

    def test_heat_rejects_negative_time(self):
        with pytest.raises(ValueError):
            heat_evolve(-0.1, SpectralCoefficients.basis(0))

    @given(coeffs, st.floats(-5, 5))
    @settings(max_examples=30, deadline=None)
    def test_schrodinger_unitary(self, c, t):
        out = schrodinger_evolve(t, c)
        assert out.is_complex
        assert out.norm() == pytest.approx(c.norm(), rel=1e-12, abs=1e-300)

    def test_heat_of_gaussian_closed_form(self):
        # e^{-tH} h_0 = e^{-t} h_0 in 1-D
        c = analyze(lambda x: eval_hermite_1d(0, x), 6)
        out = heat_evolve(0.3, c)
        assert out[0] == pytest.approx(math.exp(-0.3), rel=1e-13)


class TestLadderIdentity:
    def test_first_order(self):
        fit = ladder_identity_constants(1, 2)
        assert fit.constant_term == pytest.approx(0.0, abs=1e-10)
        assert fit.residual < 1e-12

    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_second_order_needs_constant(self, d):
        fit = ladder_identity_constants(2, d)
        assert fit.constant_term == pytest.approx(8.0 * d, rel=1e-10)
        assert fit.constants[0] == pytest.approx(0.0, abs=1e-9)
        assert fit.strict_residual > 1e-3

    def test_third_order(self):
        fit = ladder_identity_constants(3, 1)
        assert fit.constants == pytest.approx((80.0, 0.0), abs=1e-8)
        assert fit.constant_term == pytest.approx(0.0, abs=1e-8)

    def test_polynomial_reproduces_eigenvalues(self):
        fit = ladder_identity_constants(2, 1, probe_order=10)
        # h_3: sum over words of length 2 of ||A_w h_3||^2
        e = SpectralCoefficients.basis(3)
        mu = sum(apply_word(w, e).norm() ** 2 for w in ladder_words(1, 2))
        assert fit.polynomial(7.0) == pytest.approx(mu, rel=1e-12)
