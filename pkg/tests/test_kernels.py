import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from hermite_sobolev.hermite_basis import eval_hermite_1d, hermite_functions
from hermite_sobolev.kernels import (
    KernelEvalConfig,
    PhiProfile,
    SingularTimeError,
    bessel_kernel,
    complex_mehler,
    free_propagator,
    gaussian_heat,
    gaussian_potential,
    mehler_kernel,
    phi_a,
    potential_kernel,
    potential_kernel_invariants,
    scaled_unit_potential,
    zeta_a,
)


def mehler_textbook(t, x, y):
    """1-D Mehler kernel in its classical form."""
    sh = math.sinh(2 * t)
    return (2 * math.pi * sh) ** -0.5 * math.exp(-0.5 * (x * x + y * y) / math.tanh(2 * t) + x * y / sh)


def kernel_by_quad(a, x, y):
    """Gamma-integral of the textbook Mehler kernel with scipy's adaptive quadrature."""
    f = lambda t: t ** (a - 1) * mehler_textbook(t, x, y)  # noqa: E731
    head, _ = integrate.quad(f, 0, 1, limit=200, epsabs=0, epsrel=1e-12)
    tail, _ = integrate.quad(f, 1, 60, limit=200, epsabs=0, epsrel=1e-12)
    return (head + tail) / math.gamma(a)


class TestMehler:
    @pytest.mark.parametrize("t", [0.01, 0.3, 2.0, 15.0])
    def test_textbook_form(self, t):
        for x, y in [(0.2, -0.4), (1.5, 1.1), (-3.0, 2.0)]:
            assert mehler_kernel(t, x, y) == pytest.approx(mehler_textbook(t, x, y), rel=1e-12)

    def test_reproduces_eigenfunctions(self):
        y = np.linspace(-15, 15, 6001)
        for n in (0, 3):
            for x in (-0.8, 1.7):
                got = np.trapezoid(mehler_kernel(0.4, x, y, d=1) * eval_hermite_1d(n, y), y)
                assert got == pytest.approx(math.exp(-0.4 * (2 * n + 1)) * eval_hermite_1d(n, x), abs=1e-12)

    def test_tensor_structure(self):
        x, y = np.array([0.3, -1.0]), np.array([1.1, 0.4])
        want = mehler_kernel(0.7, 0.3, 1.1) * mehler_kernel(0.7, -1.0, 0.4)
        assert mehler_kernel(0.7, x, y) == pytest.approx(want, rel=1e-13)

    def test_complex_matches_real(self):
        assert complex_mehler(0.5, 0.3, -0.2) == pytest.approx(mehler_kernel(0.5, 0.3, -0.2), rel=1e-13)

    def test_complex_singular_times(self):
        with pytest.raises(SingularTimeError):
            complex_mehler(1j * math.pi / 2, 0.0, 0.0)
        with pytest.raises(SingularTimeError):
            free_propagator(0.0, 1.0)

    def test_free_heat_mass(self):
        x = np.linspace(-30, 30, 60001)
        assert np.trapezoid(free_propagator(1.3, x, d=1).real, x) == pytest.approx(1.0, rel=1e-12)

    def test_small_time_agreement(self):
        y = np.linspace(-1, 1, 201)
        diffs = [np.max(np.abs(free_propagator(1j * t, 3.0 - y, d=1) - complex_mehler(1j * t, 3.0, y, d=1)))
                 for t in (0.04, 0.01)]
        assert diffs[1] < diffs[0]


class TestPotentialKernel:
    @pytest.mark.parametrize("a", [0.25, 0.75, 1.0, 2.5])
    @pytest.mark.parametrize("xy", [(0.5, -0.3), (1.2, 1.0), (-2.0, 0.4)])
    def test_against_scipy_quadrature(self, a, xy):
        k = potential_kernel(a, *xy)
        assert k.value == pytest.approx(kernel_by_quad(a, *xy), rel=1e-8)
        assert k.value == pytest.approx(k.near + k.far, rel=1e-15)

    def test_two_dimensional_product_time_integral(self):
        x, y = np.array([0.5, -0.2]), np.array([-0.1, 0.6])
        f = lambda t: t ** 0.5 * mehler_kernel(t, x, y)  # noqa: E731
        ref = sum(integrate.quad(f, lo, hi, epsrel=1e-12, limit=200)[0] for lo, hi in ((0, 1), (1, 40)))
        assert potential_kernel(1.5, x, y).value == pytest.approx(ref / math.gamma(1.5), rel=1e-8)

    def test_riesz_singularity(self):
        # K_a ~ Gamma(d/2 - a) / (4^a pi^{d/2} Gamma(a)) |x - y|^{2a - d}
        a, d = 0.25, 1
        c = math.gamma(d / 2 - a) / (4**a * math.pi ** (d / 2) * math.gamma(a))
        r = 1e-9
        k = potential_kernel(a, 0.3, 0.3 + r).value
        assert k * r ** (d - 2 * a) == pytest.approx(c, rel=1e-4)

    def test_tiny_separation_log_path(self):
        a, d = 0.25, 1
        v, _, _ = potential_kernel_invariants(a, d, None, 1.0, log_dist2=-2000.0, log_weight=(0.5 - a) * -2000.0)
        c = math.gamma(d / 2 - a) / (4**a * math.pi ** (d / 2) * math.gamma(a))
        assert float(v) == pytest.approx(c, rel=1e-6)

    def test_diagonal(self):
        assert potential_kernel(0.5, 1.0, 1.0).divergent
        finite = potential_kernel(1.0, 1.0, 1.0)
        assert not finite.divergent and np.isfinite(finite.value)

    @given(st.floats(-3, 3), st.floats(-3, 3), st.sampled_from([0.25, 0.5, 1.0]))
    @settings(max_examples=25, deadline=None)
    def test_symmetric_and_positive(self, x, y, a):
        if abs(x - y) < 1e-6:
            return
        kxy = potential_kernel(a, x, y).value
        assert kxy > 0
        assert kxy == pytest.approx(potential_kernel(a, y, x).value, rel=1e-12)
        assert kxy == pytest.approx(potential_kernel(a, -x, -y).value, rel=1e-12)

    def test_eigen_expansion_trend(self):
        # partial sums of sum lambda^{-a} h_n(x) h_n(y) approach K_a
        a, x, y = 0.75, 0.5, -0.3
        k = potential_kernel(a, x, y).value
        tab = hermite_functions(3000, np.array([x, y]))
        terms = (2.0 * np.arange(3001) + 1) ** -a * tab[:, 0] * tab[:, 1]
        errs = [abs(np.sum(terms[: m + 1]) - k) for m in (100, 300, 1000, 3000)]
        assert errs[-1] < errs[0]
        assert errs[-1] < 2e-3

    def test_config_validation(self):
        with pytest.raises(ValueError):
            KernelEvalConfig(rel_tol=0.5)
        with pytest.raises(ValueError):
            KernelEvalConfig(split_point=1.0)

    def test_split_point_invariance(self):
        v1 = potential_kernel(0.75, 0.4, -1.0, KernelEvalConfig(split_point=0.3)).value
        v2 = potential_kernel(0.75, 0.4, -1.0, KernelEvalConfig(split_point=0.8)).value
        assert v1 == pytest.approx(v2, rel=1e-9)


class TestEnvelope:
    def test_regimes(self):
        assert PhiProfile(0.25, 1).regime == "subcritical"
        assert PhiProfile(0.5, 1).regime == "critical"
        assert PhiProfile(1.0, 1).regime == "supercritical"

    def test_values(self):
        assert phi_a(PhiProfile(0.25, 1), 0.25) == pytest.approx(2.0)
        assert phi_a(PhiProfile(0.5, 1), math.exp(-1)) == pytest.approx(2.0)
        assert phi_a(PhiProfile(0.75, 2), np.array([2.0, 0.0])) == pytest.approx(math.exp(-1))

    def test_zeta(self):
        assert zeta_a(1.0, 2, 0.5) == pytest.approx(1.0)
        with pytest.raises(ValueError):
            zeta_a(1.0, 1, 1.0)


class TestBessel:
    def test_one_dimensional_green(self):
        x = np.array([0.1, 1.0, 3.0])
        np.testing.assert_allclose(bessel_kernel(2.0, x), 0.5 * np.exp(-x), rtol=1e-9)

    def test_order_one_is_k0(self):
        x = np.array([0.05, 0.7, 4.0])
        np.testing.assert_allclose(bessel_kernel(1.0, x), special.k0(x) / math.pi, rtol=1e-9)

    def test_two_and_three_dimensions(self):
        r = 0.8
        assert bessel_kernel(2.0, np.array([r, 0.0]), d=2) == pytest.approx(special.k0(r) / (2 * math.pi), rel=1e-9)
        assert bessel_kernel(2.0, np.array([0.0, r, 0.0]), d=3) == pytest.approx(math.exp(-r) / (4 * math.pi * r),
                                                                           rel=1e-9)

    def test_origin(self):
        with pytest.raises(ValueError):
            bessel_kernel(0.5, 0.0)
        assert np.isfinite(bessel_kernel(1.5, 0.0))

    def test_unit_mass(self):
        y = np.concatenate([-np.geomspace(40, 1e-12, 4000), np.geomspace(1e-12, 40, 4000)])
        assert np.trapezoid(bessel_kernel(0.5, y), y) == pytest.approx(1.0, rel=2e-3)


class TestGaussianClosedForms:
    def test_heat_on_ground_state(self):
        x = np.linspace(-3, 3, 7)
        np.testing.assert_allclose(gaussian_heat(0.4, 1.0, x), math.exp(-0.4) * np.exp(-x * x / 2), rtol=1e-14)

    def test_heat_matches_mehler(self):
        y = np.linspace(-20, 20, 8001)
        for x in (0.0, 1.5):
            want = np.trapezoid(mehler_kernel(0.3, x, y, d=1) * np.exp(-2.0 * y * y), y)
            assert float(gaussian_heat(0.3, 4.0, x)) == pytest.approx(want, rel=1e-12)

    @pytest.mark.parametrize("a", [0.25, 0.5, 1.5])
    def test_potential_on_ground_state(self, a):
        x = np.array([0.0, 1.0, 2.5])
        np.testing.assert_allclose(gaussian_potential(a, 1.0, x), np.exp(-x * x / 2), rtol=1e-9)

    def test_unit_potential_matches_kernel_mass(self):
        a, x = 0.5, 1.3
        y = np.concatenate([x - np.geomspace(12, 1e-14, 3000), x + np.geomspace(1e-14, 12, 3000)])
        k, _, _ = potential_kernel_invariants(a, 1, (x - y) ** 2, (x + y) ** 2)
        mass = np.trapezoid(k, y)
        assert mass == pytest.approx(float(gaussian_potential(a, 0.0, x)), rel=1e-4)

    def test_scaled_unit_potential(self):
        a = 0.25
        for lx in (0.0, 1.0, 2.0):
            direct = float(gaussian_potential(a, 0.0, math.exp(lx))) * math.exp(2 * a * lx)
            assert float(scaled_unit_potential(a, lx)) == pytest.approx(direct, rel=1e-9)
        assert float(scaled_unit_potential(a, 600.0)) == pytest.approx(1.0, rel=1e-9)
