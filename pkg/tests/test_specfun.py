"""Tests for the scalar special functions.

Derived expectations are computed by independent oracles (quadrature,
direct/blocked series, finite differences) rather than by the code under
test.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from jellium import specfun as sf
from jellium.errors import DomainError, PoleError


def gamma_quadrature_oracle(x):
    """Gamma(x) by quadrature; the endpoint singularity is removed by t = u^(1/x)."""
    # int_0^1 t^(x-1) e^-t dt  with t = u^(1/x):  (1/x) e^{-u^(1/x)} du
    head, _ = quad(lambda u: math.exp(-u ** (1.0 / x)) / x, 0.0, 1.0, epsabs=1e-15)
    tail, _ = quad(lambda t: t ** (x - 1.0) * math.exp(-t), 1.0, np.inf, epsabs=1e-15)
    return head + tail


def l3_blocked_series_oracle(s, blocks=200_000):
    """Mod-3 L-series summed in character-period blocks with tail corrections."""
    m = np.arange(blocks, dtype=float)
    total = float(np.sum((3 * m + 1) ** (-s) - (3 * m + 2) ** (-s)))
    big = float(blocks)

    def f(x):
        return (3 * x + 1) ** (-s) - (3 * x + 2) ** (-s)

    def fprime(x):
        return -3 * s * ((3 * x + 1) ** (-s - 1) - (3 * x + 2) ** (-s - 1))

    if s == 1.0:
        integral = math.log((3 * big + 2) / (3 * big + 1)) / 3.0
    else:
        integral = ((3 * big + 1) ** (1 - s) - (3 * big + 2) ** (1 - s)) / (3 * (s - 1))
    return total + integral + 0.5 * f(big) - fprime(big) / 12.0


class TestGamma:
    def test_identity_cases(self):
        assert sf.gamma(1.0) == 1.0
        assert sf.gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)

    def test_sixth_against_quadrature(self):
        assert sf.gamma(1.0 / 6.0) == pytest.approx(gamma_quadrature_oracle(1.0 / 6.0), rel=1e-12)

    def test_relative_accuracy_band(self):
        # functional relation Gamma(x+1) = x Gamma(x) across [1/6, 30]
        for x in np.linspace(1.0 / 6.0, 29.0, 120):
            assert sf.gamma(x + 1.0) == pytest.approx(x * sf.gamma(x), rel=1e-13)

    def test_pole_rejected(self):
        for x in (0.0, -1.0, -7.0):
            with pytest.raises(PoleError):
                sf.gamma(x)

    def test_log_gamma(self):
        assert sf.log_gamma(6.0) == pytest.approx(math.log(120.0), rel=1e-14)
        with pytest.raises(DomainError):
            sf.log_gamma(-1.0)


class TestRiemannZeta:
    def test_forced_values(self):
        assert sf.riemann_zeta(2.0) == pytest.approx(math.pi**2 / 6.0, abs=1e-13)
        assert sf.riemann_zeta(0.0) == pytest.approx(-0.5, abs=1e-14)
        assert sf.riemann_zeta(-1.0) == pytest.approx(-1.0 / 12.0, abs=1e-14)

    def test_deriv_at_zero(self):
        # zeta'(0) = -log(2 pi)/2
        assert sf.riemann_zeta_deriv(0.0) == pytest.approx(-0.5 * math.log(2 * math.pi), abs=1e-13)

    def test_matches_direct_series(self):
        # partial sum plus integral tail, independent of the shifted expansion
        for s in (2.0, 3.5, 6.0):
            n = 2_000_000 if s < 3 else 200_000
            k = np.arange(1, n, dtype=float)
            direct = float(np.sum(k ** (-s))) + n ** (1 - s) / (s - 1) + 0.5 * n ** (-s)
            assert sf.riemann_zeta(s) == pytest.approx(direct, abs=1e-10)

    def test_deriv_matches_finite_differences(self):
        # probe away from integers: the adaptive shift count switches there,
        # which would contaminate the finite-difference oracle itself
        h = 1e-5
        for s in (-2.2, -0.5, 0.5, 3.3, 7.7):
            fd = (sf.riemann_zeta(s + h) - sf.riemann_zeta(s - h)) / (2 * h)
            assert sf.riemann_zeta_deriv(s) == pytest.approx(fd, abs=5e-9)

    def test_pole(self):
        with pytest.raises(PoleError):
            sf.riemann_zeta(1.0)
        with pytest.raises(PoleError):
            sf.riemann_zeta_deriv(1.0)


class TestHurwitzZeta:
    def test_reduces_to_riemann(self):
        for s in (2.0, 3.0, -1.0):
            assert sf.hurwitz_zeta(s, 1.0) == pytest.approx(sf.riemann_zeta(s), abs=1e-13)

    def test_half_argument(self):
        assert sf.hurwitz_zeta(2.0, 0.5) == pytest.approx(math.pi**2 / 2.0, abs=1e-12)

    def test_forward_difference_identity(self):
        rng = np.random.default_rng(7)
        for _ in range(300):
            s = rng.uniform(-4.0, 6.0)
            a = rng.uniform(0.25, 3.0)
            if abs(s - 1.0) < 1e-3:
                continue
            lhs = sf.hurwitz_zeta(s, a) - sf.hurwitz_zeta(s, a + 1.0)
            assert lhs == pytest.approx(a ** (-s), abs=1e-11)

    def test_diff_feeding_l3(self):
        # independent oracle: sqrt(3) * blocked alternating series for L3(1/2)
        expected = 3.0**0.5 * l3_blocked_series_oracle(0.5)
        got = sf.hurwitz_zeta(0.5, 1.0 / 3.0) - sf.hurwitz_zeta(0.5, 2.0 / 3.0)
        assert got == pytest.approx(expected, abs=1e-10)
        assert math.isfinite(got)

    def test_domain_errors(self):
        with pytest.raises(PoleError):
            sf.hurwitz_zeta(1.0, 0.5)
        with pytest.raises(DomainError):
            sf.hurwitz_zeta(2.0, -1.0)


class TestDirichletL3:
    def test_at_zero(self):
        # zeta(0, a) = 1/2 - a gives 3^0 ((1/2 - 1/3) - (1/2 - 2/3)) = 1/3
        assert sf.dirichlet_l3(0.0) == pytest.approx(1.0 / 3.0, abs=1e-13)

    def test_at_one_against_series(self):
        assert sf.dirichlet_l3(1.0) == pytest.approx(l3_blocked_series_oracle(1.0), abs=1e-11)
        assert sf.dirichlet_l3(1.0) == pytest.approx(math.pi / 3.0**1.5, abs=1e-12)

    def test_at_two_against_series(self):
        assert sf.dirichlet_l3(2.0) == pytest.approx(l3_blocked_series_oracle(2.0), abs=1e-11)

    def test_entire_across_one(self):
        # no pole: smooth values across s = 1
        vals = [sf.dirichlet_l3(s) for s in (0.9999, 1.0, 1.0001)]
        assert all(math.isfinite(v) for v in vals)
        assert abs(vals[2] - 2 * vals[1] + vals[0]) < 1e-6

    def test_trivial_zeros(self):
        for s in (-1.0, -3.0, -5.0):
            assert abs(sf.dirichlet_l3(s)) < 1e-14

    def test_deriv_matches_finite_differences(self):
        h = 1e-6
        for s in (-2.5, -0.2, 0.0, 1.0, 4.0):
            fd = (sf.dirichlet_l3(s + h) - sf.dirichlet_l3(s - h)) / (2 * h)
            assert sf.dirichlet_l3_deriv(s) == pytest.approx(fd, abs=5e-9)

    def test_deriv_at_zero_closed_form(self):
        # L3'(0) = log Gamma(1/3) - log Gamma(2/3) - log(3)/3
        expected = math.lgamma(1.0 / 3.0) - math.lgamma(2.0 / 3.0) - math.log(3.0) / 3.0
        assert sf.dirichlet_l3_deriv(0.0) == pytest.approx(expected, abs=1e-12)


class TestUpperIncompleteGamma:
    def test_order_one_is_exponential(self):
        assert sf.upper_incomplete_gamma(1.0, 1.0) == pytest.approx(math.exp(-1.0), rel=1e-13)

    def test_half_order_against_quadrature(self):
        oracle, _ = quad(lambda t: t ** (-0.5) * math.exp(-t), 1.0, np.inf, epsabs=1e-15)
        assert sf.upper_incomplete_gamma(0.5, 1.0) == pytest.approx(oracle, rel=1e-12)
        assert sf.upper_incomplete_gamma(0.5, 1.0) == pytest.approx(
            math.sqrt(math.pi) * math.erfc(1.0), rel=1e-12
        )

    def test_negative_half_order_against_quadrature(self):
        oracle, _ = quad(lambda t: t ** (-1.5) * math.exp(-t), 1.0, np.inf, epsabs=1e-15)
        assert sf.upper_incomplete_gamma(-0.5, 1.0) == pytest.approx(oracle, rel=1e-12)

    def test_recurrence_identity(self):
        # Gamma(a+1, x) = a Gamma(a, x) + x^a e^-x on the supported box
        rng = np.random.default_rng(11)
        for _ in range(400):
            a = rng.uniform(-3.0, 3.0)
            x = math.exp(rng.uniform(math.log(0.05), math.log(50.0)))
            if abs(a) < 1e-6 or abs(a - round(a)) < 1e-6:
                continue
            lhs = sf.upper_incomplete_gamma(a + 1.0, x)
            rhs = a * sf.upper_incomplete_gamma(a, x) + math.exp(a * math.log(x) - x)
            assert abs(lhs - rhs) <= 1e-11 * max(1.0, abs(lhs))

    def test_domain_error(self):
        with pytest.raises(DomainError):
            sf.upper_incomplete_gamma(0.5, 0.0)
        with pytest.raises(DomainError):
            sf.upper_incomplete_gamma(0.5, -2.0)


class TestEulerGamma:
    def test_value(self):
        assert sf.euler_gamma() == pytest.approx(0.5772156649015329, abs=1e-14)


class TestPrecisionSpec:
    def test_validation(self):
        with pytest.raises(DomainError):
            sf.PrecisionSpec(abs_tol=0.0)
        with pytest.raises(DomainError):
            sf.PrecisionSpec(max_terms=0)
