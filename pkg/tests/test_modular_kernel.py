import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpc, mpf

from mock_radial.errors import DomainError, ParseError, PoleError
from mock_radial.exact_arith import Cusp
from mock_radial.modular_kernel import (
    EtaQuotient,
    K_fn,
    ModularPoint,
    big_theta,
    e,
    eta,
    eta_quotient_cusp_order,
    eta_quotient_value,
    mu,
    parse_eta_quotient,
    theta,
    theta_prime_zero,
)


def pentagonal_eta(tau, terms=200):
    q = e(tau)
    total = mpc(0)
    for n in range(-terms, terms + 1):
        total += (-1) ** n * q ** (mpf(n * (3 * n - 1)) / 2)
    return e(tau / 24) * total


def jacobi_theta(z, tau):
    # same normalization, through mpmath's own theta function
    return -mpmath.jtheta(1, mp.pi * z, mpmath.expjpi(tau))


def rand_tau(rng, lo=0.3, hi=2.0):
    return mpc(rng.uniform(-0.5, 0.5), rng.uniform(lo, hi))


taus = st.builds(lambda x, y: mpc(x, y), st.floats(-3, 3), st.floats(0.05, 3))


class TestEta:
    def test_at_i(self):
        v = eta(1j)
        assert abs(v.imag) < 1e-15 and v.real > 0
        assert abs(v - pentagonal_eta(mpc(0, 1))) < 1e-14
        # Gamma(1/4) / (2 pi^(3/4))
        assert abs(v - mpmath.gamma(0.25) / (2 * mp.pi ** 0.75)) < 1e-14

    def test_leading_term(self):
        v = eta(10j)
        assert abs(v / mpmath.exp(-2 * mp.pi * 10 / 24) - 1) < 1e-10

    def test_reduction_matches_series(self):
        rng = random.Random(1)
        for _ in range(100):
            tau = rand_tau(rng)
            assert abs(eta(tau) / pentagonal_eta(tau) - 1) < 1e-11

    @settings(max_examples=40)
    @given(taus)
    def test_transformations(self, tau):
        assert abs(eta(tau + 1) - e(mpf(1) / 24) * eta(tau)) < 1e-12 * abs(eta(tau)) + 1e-300
        lhs = eta(-1 / tau)
        rhs = mpmath.sqrt(-1j * tau) * eta(tau)
        assert abs(lhs - rhs) <= 1e-12 * abs(rhs) + 1e-300

    def test_domain(self):
        with pytest.raises(DomainError):
            eta(0.5)
        with pytest.raises(DomainError):
            ModularPoint(-1j)


class TestTheta:
    def test_zero(self):
        assert abs(theta(0, 0.3 + 0.8j)) < 1e-15

    def test_half(self):
        tau = mpc(0.1, 0.7)
        assert abs(theta(0.5, tau) + 2 * eta(2 * tau) ** 2 / eta(tau)) < 1e-13

    def test_tau_2tau(self):
        tau = mpc(-0.2, 0.6)
        rhs = -1j * e(-tau / 4) * eta(tau) ** 2 / eta(2 * tau)
        assert abs(theta(tau, 2 * tau) - rhs) < 1e-13

    def test_matches_mpmath(self):
        rng = random.Random(2)
        for _ in range(50):
            tau = rand_tau(rng, 0.4, 1.5)
            z = mpc(rng.uniform(-1, 1), rng.uniform(-0.5, 0.5) * tau.imag)
            assert abs(theta(z, tau) - jacobi_theta(z, tau)) < 1e-12

    def test_near_real_axis_matches_mpmath(self):
        with mpmath.workdps(40):
            tau = mpc(mpf(1) / 3, 0.02)
            z = mpf(1) / 5
            ref = jacobi_theta(z, tau)
            assert abs(theta(z, tau) - ref) < 1e-25 * max(1, abs(ref))

    def test_odd(self):
        rng = random.Random(3)
        for _ in range(50):
            tau = rand_tau(rng)
            z = mpc(rng.uniform(-1, 1), rng.uniform(-1, 1))
            assert abs(theta(-z, tau) + theta(z, tau)) < 1e-12 * max(1, abs(theta(z, tau)))

    def test_quasi_periodicity(self):
        rng = random.Random(4)
        for _ in range(20):
            tau = rand_tau(rng, 0.5, 1.5)
            z = mpc(rng.uniform(-1, 1), rng.uniform(-0.4, 0.4))
            shifted = -mpmath.expjpi(-tau - 2 * z) * theta(z, tau)
            assert abs(theta(z + tau, tau) - shifted) < 1e-12 * max(1, abs(shifted))
            assert abs(theta(z + 1, tau) + theta(z, tau)) < 1e-12 * max(1, abs(theta(z, tau)))

    def test_prime_zero(self):
        assert abs(theta_prime_zero(1j) + 2 * mp.pi * eta(1j) ** 3) < 1e-14
        h = mpf("1e-5")
        tau = mpc(0.2, 0.9)
        fd = (theta(h, tau) - theta(-h, tau)) / (2 * h)
        assert abs(fd - theta_prime_zero(tau)) < 1e-8
        assert abs(theta_prime_zero(2j)) < abs(theta_prime_zero(1j))


class TestMu:
    def _points(self, seed, n=20):
        rng = random.Random(seed)
        for _ in range(n):
            tau = rand_tau(rng, 0.5, 1.2)
            yield (
                mpc(rng.uniform(0.05, 0.95), rng.uniform(-0.2, 0.2)),
                mpc(rng.uniform(0.05, 0.95), rng.uniform(-0.2, 0.2)),
                tau,
            )

    def test_symmetric(self):
        for u, v, tau in self._points(5):
            assert abs(mu(u, v, tau) - mu(v, u, tau)) < 1e-10

    def test_tau_shift(self):
        for u, v, tau in self._points(6, 5):
            assert abs(mu(u, v, tau + 1) - e(mpf(-1) / 8) * mu(u, v, tau)) < 1e-10

    def test_shift_identity(self):
        rng = random.Random(7)
        for u, v, tau in self._points(7):
            z = mpc(rng.uniform(0.05, 0.4), rng.uniform(-0.1, 0.1))
            assert abs(mu(u + z, v + z, tau) - mu(u, v, tau) - big_theta(u, v, z, tau)) < 1e-10

    def test_lattice_rejected(self):
        with pytest.raises(PoleError):
            mu(0, 0.3, 1j)


class TestBigThetaAndK:
    def test_big_theta_zero(self):
        assert abs(big_theta(0.3 + 0.1j, 0.6, 0, 0.8j)) < 1e-15

    def test_big_theta_specialization(self):
        tau = mpc(0.1, 0.5)
        lhs = big_theta(2 * tau, 2 * tau, 0.5, 4 * tau)
        rhs = -4j * eta(8 * tau) ** 8 / eta(4 * tau) ** 7
        assert abs(lhs - rhs) < 1e-12 * abs(rhs)

    def test_K_at_tau_2tau(self):
        tau = mpc(-0.15, 0.45)
        rhs = e(-tau / 2) * eta(4 * tau) ** 5 / eta(2 * tau) ** 4
        assert abs(K_fn(tau, 2 * tau) - rhs) < 1e-12 * abs(rhs)

    def test_K_period(self):
        z, tau = mpc(0.3, 0.1), mpc(0.2, 0.7)
        assert abs(K_fn(z + 1, tau) - K_fn(z, tau)) < 1e-12

    def test_K_pole(self):
        with pytest.raises(PoleError):
            K_fn(0.5, 0.7j)


class TestEtaQuotient:
    def test_parse_N(self):
        quot = parse_eta_quotient("q^(-1/2)*eta(4)^5*eta(2)^-4")
        assert quot.q_power == Fraction(-1, 2)
        assert dict(quot.factors) == {4: 5, 2: -4}
        tau = mpc(0, 1)
        direct = 2 * e(-tau / 2) * eta(4 * tau) ** 5 / eta(2 * tau) ** 4
        assert abs(2 * eta_quotient_value(quot, tau) - direct) < 1e-12 * abs(direct)

    def test_parse_variants(self):
        a = parse_eta_quotient("eta(2)^(-4) * eta(4)^5 * q^(-1/2)")
        b = parse_eta_quotient("q^(-1/2) * eta(4)^5 * eta(2)^-4")
        assert dict(a.factors) == dict(b.factors) and a.q_power == b.q_power
        with pytest.raises(ParseError):
            parse_eta_quotient("q^(-1/2) eta(4)^5")
        assert dict(parse_eta_quotient("eta(1)").factors) == {1: 1}
        assert dict(parse_eta_quotient("eta(2)^3*eta(2)^-1").factors) == {2: 2}

    def test_trivial_quotients(self):
        tau = mpc(0.1, 0.9)
        assert abs(eta_quotient_value(EtaQuotient(((2, 0),), Fraction(1, 3)), tau) - e(tau / 3)) < 1e-15
        assert abs(eta_quotient_value(parse_eta_quotient("eta(2)^4*eta(2)^-4"), tau) - 1) < 1e-14

    @pytest.mark.parametrize(
        "text, pos",
        [("eta(4)^(5", 9), ("eta(x)", 4), ("q^(1/0)", 3), ("", 0), ("eta(4)^5 +", 9), ("eta(0)^2", 4)],
    )
    def test_parse_errors(self, text, pos):
        with pytest.raises(ParseError) as info:
            parse_eta_quotient(text)
        assert info.value.position == pos
        assert "^" in info.value.annotated()

    def test_cusp_orders(self):
        assert eta_quotient_cusp_order(parse_eta_quotient("eta(1)^1"), Cusp("0/1")) == Fraction(1, 24)
        N = parse_eta_quotient("q^(-1/2)*eta(4)^5*eta(2)^-4")
        for k in (1, 3, 5, 7):
            assert eta_quotient_cusp_order(N, Cusp(Fraction(1 if k > 1 else 0, k))) < 0
        vanishing = parse_eta_quotient("eta(4)^7*eta(1)^4*eta(2)^-6*eta(8)^-4")
        for k in (1, 3, 5, 9):
            assert eta_quotient_cusp_order(vanishing, Cusp(Fraction(1 if k > 1 else 0, k))) > 0
        for k in (4, 8, 12):
            assert eta_quotient_cusp_order(N, Cusp(Fraction(1, k))) > 0

    def test_cuspidal_decay(self):
        # every quotient reported cuspidal really decays along the radial path;
        # the local parameter is exp(-4 pi^2 / (k^2 t)), so t is scaled by 1/k^2
        quotients = [
            "eta(1)^1",
            "q^(-1/2)*eta(4)^5*eta(2)^-4",
            "eta(4)^7*eta(1)^4*eta(2)^-6*eta(8)^-4",
            "eta(8)^8*eta(4)^-7",
        ]
        for text in quotients:
            quot = parse_eta_quotient(text)
            for c in (Cusp("0/1"), Cusp("1/3"), Cusp("1/4"), Cusp("1/8")):
                if eta_quotient_cusp_order(quot, c) <= 0:
                    continue
                with mpmath.workdps(30):
                    mags = [
                        abs(eta_quotient_value(quot, mpf(c.h) / c.k + 1j * mpf(t) / (2 * mp.pi * c.k**2)))
                        for t in (0.2, 0.1, 0.05, 0.02)
                    ]
                assert all(b < a for a, b in zip(mags, mags[1:])), (text, c)
                assert mags[-1] < 1e-3
