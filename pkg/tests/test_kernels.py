"""Kernels, Laplace transforms, and the in-house Bessel K1."""

import cmath
import math

import numpy as np
import pytest

from armould.bessel import BesselDomainError, bessel_k0, bessel_k1
from armould.kernels import (
    KernelDomainError,
    KernelParams,
    f_analytic_continuation,
    f_closed_form_oracle,
    f_eval,
    g_eval,
    g_sup_bound,
)
from armould.quadrature import de_halfline

# frozen multiprecision reference values for K1/K0
K1_REFS = {
    0.05: 19.909674325882506,
    0.3: 3.055992033457325,
    1.0: 0.6019072301972346,
    2.0: 0.13986588181652243,
    2.1: 0.12274641153350789,
    6.0: 0.001343919717735509,
    12.0: 2.290757464767188e-06,
    25.0: 3.5327780731999337e-12,
    (2 + 1j): (0.03629159240042704 - 0.12406383457283476j),
    (6 + 5j): (0.0007093907300846331 + 0.0009084519228286553j),
    (0.3 + 5j): (0.3769170969462769 + 0.18441992561363016j),
}
K0_REFS = {
    0.3: 1.3724600605442974,
    2.0: 0.11389387274953344,
    8.0: 0.0001464707052228154,
    (3 + 2.5j): (-0.02935661880868875 - 0.0094513031330961j),
}


class TestBessel:
    @pytest.mark.parametrize("w", sorted(K1_REFS, key=str))
    def test_k1_reference_values(self, w):
        assert abs(bessel_k1(w) - K1_REFS[w]) <= 1e-11 * abs(K1_REFS[w])

    @pytest.mark.parametrize("w", sorted(K0_REFS, key=str))
    def test_k0_reference_values(self, w):
        assert abs(bessel_k0(w) - K0_REFS[w]) <= 1e-11 * abs(K0_REFS[w])

    def test_integral_representation_oracle(self):
        # K1(w) = int_0^inf exp(-w cosh t) cosh t dt, Re w > 0
        for w in (0.7, 2.0, 3.3, 2 + 1.5j):
            val, _ = de_halfline(
                lambda u: np.exp(-w * np.cosh(np.log1p(u))) * np.cosh(np.log1p(u)) / (1.0 + u),
                scale=1.0,
            )
            # substitution t = log(1+u) maps (0,inf) to (0,inf)
            assert abs(bessel_k1(w) - val) <= 1e-9 * abs(val)

    def test_small_argument_pole(self):
        # w K1(w) -> 1
        for w in (1e-4, 1e-6):
            assert abs(w * bessel_k1(w) - 1.0) < 1e-7

    def test_left_half_plane_rejected(self):
        with pytest.raises(BesselDomainError):
            bessel_k1(-1.0 + 0.5j)


class TestKernelParams:
    def test_saddle_node_needs_positive_real_omega(self):
        with pytest.raises(KernelDomainError):
            KernelParams(1.0, -2.0)
        with pytest.raises(KernelDomainError):
            KernelParams(1.0, 1.0 + 1j)

    def test_negative_c_rejected(self):
        with pytest.raises(KernelDomainError):
            KernelParams(-0.5, 1.0)

    def test_sigma_only_for_ramified(self):
        with pytest.raises(KernelDomainError):
            KernelParams(1.0, 1.0, sigma=0.5)


class TestGEval:
    def test_symmetric_point_value(self):
        # at y = c the saddle-node kernel equals exp(-2 omega c)
        p = KernelParams(1.5, 2.0)
        assert abs(g_eval(p, 1.5) - math.exp(-2 * 2.0 * 1.5)) < 1e-15

    def test_c_zero_is_pure_exponential(self):
        p = KernelParams(0.0, 3.0)
        for y in (0.2, 1.0, 4.0):
            assert abs(g_eval(p, y) - math.exp(-3.0 * y)) < 1e-15

    def test_ramified_log_factor(self):
        p = KernelParams(0.0, 2.0, sigma=1.0, variant="ramified")
        assert abs(g_eval(p, 1.0) - cmath.exp(2.0)) < 1e-14
        # sigma log y multiplies by y^sigma
        assert abs(g_eval(p, 2.0) - 2.0 * cmath.exp(4.0)) < 1e-13

    def test_zero_rejected(self):
        with pytest.raises(KernelDomainError):
            g_eval(KernelParams(1.0, 1.0), 0.0)

    def test_general_variant_sign_convention(self):
        p = KernelParams(1.0, 1j, variant="general")
        y = 2.0
        expected = cmath.exp(1j * y - (1.0) * (-1j) / y)
        assert abs(g_eval(p, y) - expected) < 1e-14

    def test_dilation_covariance(self):
        # g_{c,om}(y) = g_{lc, om/l}(l y) for l > 0 (saddle-node, om/l real > 0)
        for l in (2.0, 0.5, 3.7):
            p1 = KernelParams(1.3, 2.0)
            p2 = KernelParams(l * 1.3, 2.0 / l)
            for y in (0.5, 1.0 + 0.7j, 3.0):
                assert abs(g_eval(p1, y) - g_eval(p2, l * y)) < 1e-14


class TestSupBound:
    def test_value(self):
        assert g_sup_bound(KernelParams(1.0, 1.0)) == pytest.approx(math.exp(-2))

    def test_c_zero(self):
        assert g_sup_bound(KernelParams(0.0, 5.0)) == 1.0

    def test_grid_never_exceeds(self):
        for (c, om) in [(1.0, 1.0), (3.0, 2.0), (0.25, 3.0)]:
            p = KernelParams(c, om)
            bound = g_sup_bound(p)
            ys = np.logspace(-3, 3, 2001)
            assert np.max(np.abs(g_eval(p, ys))) <= bound * (1 + 1e-12)

    def test_wrong_variant(self):
        with pytest.raises(KernelDomainError):
            g_sup_bound(KernelParams(1.0, 1j, variant="general"))


class TestFEval:
    def test_c_zero_elementary(self):
        p = KernelParams(0.0, 2.0)
        v, err = f_eval(p, 1.5)
        assert abs(v - 1.0 / 3.5) < 1e-10

    def test_spec_point_two_k1_two(self):
        v, err = f_eval(KernelParams(1.0, 1.0), 0.0)
        assert abs(v - 2.0 * bessel_k1(2.0)) < 1e-12

    def test_against_closed_form_grid(self):
        worst = 0.0
        for c in (0.25, 1.0, 2.3, 4.0):
            for om in (1.0, 2.0, 3.0):
                for x in (0.0, 0.6, 3.0, 10.0, 2.4j, -0.5 + 1j):
                    if (complex(x) + om).real < 0.25:
                        continue
                    p = KernelParams(c, om)
                    v, _ = f_eval(p, x)
                    ref = f_closed_form_oracle(p, x)
                    worst = max(worst, abs(v - ref) / abs(ref))
        assert worst <= 1e-10

    def test_large_x_matches_oracle(self):
        p = KernelParams(1.0, 1.0)
        v, _ = f_eval(p, 10.0)
        ref = f_closed_form_oracle(p, 10.0)
        assert abs(v - ref) <= 1e-8 * abs(ref)

    def test_divergent_domain_rejected(self):
        with pytest.raises(KernelDomainError):
            f_eval(KernelParams(1.0, 1.0), -2.0)

    def test_reality_on_real_axis(self):
        p = KernelParams(1.3, 2.0)
        v, _ = f_eval(p, 0.7)
        assert abs(v.imag) <= 1e-15 * abs(v)


class TestClosedForm:
    def test_c_to_zero_limit(self):
        x, om = 1.2, 2.0
        target = 1.0 / (x + om)
        for c in (1e-3, 1e-5):
            p = KernelParams(c, om)
            assert abs(f_closed_form_oracle(p, x) - target) < 1e-4

    def test_simple_pole_at_minus_omega(self):
        # (x + om) f -> 1 as x -> -om from the right
        p = KernelParams(1.0, 1.0)
        for rho in (1e-6, 1e-8):
            x = -1.0 + rho
            assert abs((x + 1.0) * f_closed_form_oracle(p, x) - 1.0) < 1e-4

    def test_continuation_branch(self):
        p = KernelParams(1.0, 1.0)
        v = f_analytic_continuation(p, -2.0 + 0.1j)
        assert v == v  # finite
        with pytest.raises(KernelDomainError):
            f_analytic_continuation(p, -2.0)
