"""q-series layer: g2 and its companions, Appell-Lerch sums and the corrections.

Series take ``zeta``/``q`` values; everything that involves fractional
powers (``zeta^(1/2)``, ``q^(-1/4)``, ...) takes the coordinates ``(z, tau)``
instead, so that the branch is fixed by ``e(z/2)``, ``e(-tau/4)`` rather
than by a principal root of a complex number.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp, mpc, mpf

from .errors import PoleProximityError, TruncationError
from .exact_arith import RootOfUnity, k_prime_of, pochhammer_rou, stripped_ratio
from .modular_kernel import K_fn, _require_off_lattice, big_theta, e, eta, theta

__all__ = [
    "SeriesAccuracy",
    "CorrectionId",
    "DEFAULT_ACCURACY",
    "g2_series",
    "appell_A",
    "L_series",
    "L_finite",
    "M_fn",
    "T_mortenson",
    "T_terms",
    "t_correction",
    "t_terms",
    "m_correction",
    "m_terms",
    "specialize",
    "f_series",
    "b_product",
    "b_eta",
    "B_series",
    "N_fn",
]

POLE_THRESHOLD = 1e-13


@dataclass(frozen=True)
class SeriesAccuracy:
    """Absolute tail tolerance and a hard term budget for every series."""

    tolerance: float = 1e-15
    max_terms: int = 10**5

    def __post_init__(self):
        if not self.tolerance >= 1e-15:
            raise ValueError("tolerance must be >= 1e-15")
        if not 0 < self.max_terms <= 10**6:
            raise ValueError("max_terms must be in (0, 1e6]")


DEFAULT_ACCURACY = SeriesAccuracy()


class CorrectionId(enum.Enum):
    """Which modular correction is subtracted before taking the radial limit."""

    MortensonT = "MortensonT"
    None_ = "None"
    SmallT = "SmallT"
    SmallM = "SmallM"

    def __str__(self):
        return self.value


def _factor(x, n, what):
    f = 1 - x
    if abs(f) < POLE_THRESHOLD:
        raise PoleProximityError(f"{what} factor vanishes at n={n}", index=n)
    return f


def _tolerance(acc):
    # never ask for more than the working precision can deliver
    return max(mpf(acc.tolerance), mp.eps) if mp.dps <= 16 else mp.eps


def _g2_sum(zeta, q, acc):
    zeta, q = mpmath.mpmathify(zeta), mpmath.mpmathify(q)
    if not abs(q) < 1:
        raise ValueError("g2 requires |q| < 1")
    tol = _tolerance(acc)
    zinv = 1 / zeta
    term = 1 / (_factor(zeta, 0, "(zeta)_{n+1}") * _factor(zinv * q, 0, "(q/zeta)_{n+1}"))
    total = term
    biggest = abs(term)
    qn = mpc(1)
    for n in range(1, acc.max_terms):
        qn *= q
        # ratio of consecutive terms
        term *= (1 + qn) * qn / (
            _factor(zeta * qn, n, "(zeta)_{n+1}") * _factor(zinv * qn * q, n, "(q/zeta)_{n+1}")
        )
        total += term
        size = abs(term)
        biggest = max(biggest, size)
        if size < tol and abs(qn) < 0.5:
            # later ratios are at most |q^n| (1 + |q^n|) / (1 - |q^n|)^2 < 1
            r = abs(qn) * (1 + abs(qn)) / (1 - abs(qn) * max(abs(zeta), abs(zinv * q))) ** 2
            if r < 1 and size * r / (1 - r) < tol:
                return total, biggest
    raise TruncationError(f"g2 series not converged after {acc.max_terms} terms")


def g2_series(zeta, q, acc=DEFAULT_ACCURACY):
    """Universal mock theta function ``g2(zeta; q)`` from its Eulerian series."""
    return _g2_sum(zeta, q, acc)[0]


def appell_A(zeta, q, acc=DEFAULT_ACCURACY):
    """``sum_{n in Z} (-1)^n q^{3n(n+1)/2} / (1 + zeta q^n)``."""
    zeta, q = mpmath.mpmathify(zeta), mpmath.mpmathify(q)
    if not abs(q) < 1:
        raise ValueError("appell_A requires |q| < 1")
    tol = _tolerance(acc)

    def term(n):
        den = 1 + zeta * q**n
        if abs(den) < POLE_THRESHOLD:
            raise PoleProximityError(f"1 + zeta q^n vanishes at n={n}", index=n)
        return (-1) ** n * q ** (3 * n * (n + 1) // 2) / den

    total = term(0)
    prev = None
    for n in range(1, acc.max_terms):
        size = abs(term(n)) + abs(term(-n))
        total += term(n) + term(-n)
        if prev is not None and size < tol and size <= prev:
            return total
        prev = size
    raise TruncationError(f"Appell sum not converged after {acc.max_terms} terms")


def L_series(zeta, q, acc=DEFAULT_ACCURACY):
    """``1/2 sum_{n>=0} q^n (q/zeta)_n (zeta)_n / (-q)_n``."""
    zeta, q = mpmath.mpmathify(zeta), mpmath.mpmathify(q)
    if not abs(q) < 1:
        raise ValueError("L_series requires |q| < 1")
    tol = _tolerance(acc)
    zinv = 1 / zeta
    term = mpc(1)
    total = mpc(1)
    qn = mpc(1)  # q^n
    for n in range(1, acc.max_terms):
        qprev = qn
        qn = qn * q
        term *= q * (1 - zinv * qn) * (1 - zeta * qprev) / (1 + qn)
        total += term
        if abs(term) < tol and abs(qn) < 0.5:
            r = abs(q) * (1 + abs(qn * zinv)) * (1 + abs(qn * zeta)) / (1 - abs(qn))
            if r < 1 and abs(term) * r / (1 - r) < tol:
                return total / 2
    raise TruncationError(f"L series not converged after {acc.max_terms} terms")


def _series_roots(params, x):
    zeta = RootOfUnity(params.a_over_b + params.A * x)
    step = RootOfUnity(params.B * x)
    zeta_inv_step = RootOfUnity(-params.a_over_b + (params.B - params.A) * x)
    return zeta, zeta_inv_step, step


def L_finite(params, cusp):
    """Terminating value of ``L(e(a/b) q^A; q^B)`` at ``q = e(h/k)`` for cusps in Q."""
    zeta, zeta_inv_step, step = _series_roots(params, cusp.h_over_k)
    total = 0j
    for n in range(k_prime_of(cusp, params.B)):
        num = pochhammer_rou(zeta, step, n) * pochhammer_rou(zeta_inv_step, step, n)
        den = pochhammer_rou(-step, step, n)
        _, value = stripped_ratio(num, den)
        total += (step**n).to_complex() * complex(value)
    return total / 2


def M_fn(z, tau, acc=DEFAULT_ACCURACY):
    """``-(i/2) zeta^(1/2) q^(-1/8) theta(z; tau) A(zeta; q) / ((q)_inf (q^2; q^2)_inf)``."""
    z, tau = mpc(z), mpc(tau)
    # q^(-1/8) / ((q)_inf (q^2;q^2)_inf) = 1 / (eta(tau) eta(2 tau))
    pref = -0.5j * e(z / 2) * theta(z, tau) / (eta(tau) * eta(2 * tau))
    return pref * appell_A(e(z), e(tau), acc)


def T_terms(z, tau):
    """The three summands of Mortenson's modular completion ``T(zeta; q)``."""
    z, tau = mpc(z), mpc(tau)
    h = mpf(1) / 2
    _require_off_lattice(2 * z, 2 * tau, "2z")
    _require_off_lattice(2 * z + tau + h, 2 * tau, "2z+tau+1/2")
    _require_off_lattice(z + h, tau, "z+1/2")
    z1, z2, z4 = eta(tau), eta(2 * tau), eta(4 * tau)
    zeta, zeta2, q4 = e(z), e(2 * z), e(tau / 4)
    th_2z = theta(2 * z, 2 * tau)
    th_shift = theta(2 * z + tau + h, 2 * tau)
    first = -1j * z2**4 / (zeta * z1**2 * th_2z)
    second = -1j * z2**10 * theta(2 * z + h, 2 * tau) / (
        2 * zeta2 * q4 * z1**4 * z4**4 * th_2z * th_shift
    )
    third = -1j * z2**4 * theta(z, tau) / (
        2 * q4 * zeta2 * z4**2 * theta(z + h, tau) * th_shift
    )
    return first, second, third


def T_mortenson(z, tau):
    return sum(T_terms(z, tau))


def t_terms(z, tau):
    z, tau = mpc(z), mpc(tau)
    h = mpf(1) / 2
    return (
        K_fn(z, tau),
        -1j * K_fn(z + h / 2, tau + h),
        1j * e(-tau / 4) * big_theta(2 * z, tau, h, 2 * tau),
    )


def t_correction(z, tau):
    """``K(z; tau) - i K(z + 1/4; tau + 1/2) + i q^(-1/4) Theta(2z, tau, 1/2; 2 tau)``."""
    return sum(t_terms(z, tau))


def specialize(params, tau):
    """Coordinates ``(z, tau_B)`` of ``g2(e(a/b) q^A; q^B)`` at ``q = e(tau)``."""
    tau = mpc(tau)
    a_b = mpf(params.a) / params.b
    return a_b + params.A * tau, params.B * tau


def m_terms(params, tau):
    z, tau_b = specialize(params, tau)
    h = mpf(1) / 2
    return t_terms(z, tau_b) + tuple(1j * x for x in T_terms(z + h / 2, tau_b + h))


def m_correction(params, tau):
    """``t(e(a/b) q^A; q^B) + i T(i e(a/b) q^A; -q^B)`` at ``q = e(tau)``."""
    return sum(m_terms(params, tau))


def f_series(q, acc=DEFAULT_ACCURACY):
    """Ramanujan's third order ``f(q) = sum q^{n^2} / (-q)_n^2``."""
    q = mpmath.mpmathify(q)
    if not abs(q) < 1:
        raise ValueError("f requires |q| < 1")
    tol = _tolerance(acc)
    term = mpc(1)
    total = mpc(1)
    for n in range(1, acc.max_terms):
        qn = q**n
        term *= q ** (2 * n - 1) / _factor(-qn, n, "(-q)_n") ** 2
        total += term
        if abs(term) < tol and abs(q) ** (2 * n) < 0.5:
            return total
    raise TruncationError(f"f series not converged after {acc.max_terms} terms")


def b_product(q, acc=DEFAULT_ACCURACY):
    """``(q)_inf / (-q)_inf^2``."""
    q = mpmath.mpmathify(q)
    if not abs(q) < 1:
        raise ValueError("b requires |q| < 1")
    tol = _tolerance(acc)
    value = mpc(1)
    qn = mpc(1)
    for n in range(1, acc.max_terms):
        qn *= q
        value *= (1 - qn) / (1 + qn) ** 2
        if abs(qn) < tol / 4:
            return value
    raise TruncationError(f"b product not converged after {acc.max_terms} factors")


def b_eta(tau):
    """``b`` through its eta quotient ``q^(1/24) eta(tau)^3 / eta(2 tau)^2``."""
    tau = mpc(tau)
    return e(tau / 24) * eta(tau) ** 3 / eta(2 * tau) ** 2


def B_series(q, acc=DEFAULT_ACCURACY):
    """Second order ``B(q) = sum q^n (-q; q^2)_n / (q; q^2)_{n+1}``."""
    q = mpmath.mpmathify(q)
    if not abs(q) < 1:
        raise ValueError("B requires |q| < 1")
    tol = _tolerance(acc)
    term = 1 / _factor(q, 0, "(q;q^2)_{n+1}")
    total = term
    for n in range(1, acc.max_terms):
        q2n = q ** (2 * n)
        term *= q * (1 + q2n / q) / _factor(q2n * q, n, "(q;q^2)_{n+1}")
        total += term
        if abs(term) < tol:
            r = abs(q) * (1 + abs(q2n)) / (1 - abs(q2n * q))
            if r < 1 and abs(term) * r / (1 - r) < tol:
                return total
    raise TruncationError(f"B series not converged after {acc.max_terms} terms")


def N_fn(tau):
    """``2 q^(-1/2) eta(4 tau)^5 / eta(2 tau)^4``."""
    tau = mpc(tau)
    return 2 * e(-tau / 2) * eta(4 * tau) ** 5 / eta(2 * tau) ** 4
