"""Named identity suites with seed-fixed sample points.

Each suite returns an :class:`IdentityReport` with the worst residual and
where it happened.  Analytic identities are sampled at random interior points
``Im(tau) in [0.4, 1.2]``; the root-of-unity identities run over fixed ranges
and ignore ``samples``/``seed``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import mpmath
from mpmath import mpc, mpf

from .mock_core import (
    B_series,
    L_series,
    M_fn,
    T_mortenson,
    g2_series,
    t_correction,
)
from .modular_kernel import K_fn, big_theta, e, eta, mu, theta
from .radial_limits import (
    curious_identity_odd,
    curious_identity_two_mod_four,
    watson_closed_form,
    watson_radial_limit,
)

__all__ = ["IDENTITIES", "IdentityReport", "run_identity"]

_DPS = 30


@dataclass(frozen=True)
class IdentityReport:
    name: str
    worst_residual: float
    worst_point: str
    tolerance: float
    count: int

    @property
    def passed(self):
        return self.worst_residual < self.tolerance


def _tau(rng):
    return mpc(rng.uniform(-0.5, 0.5), rng.uniform(0.4, 1.2))


def _z(rng, tau):
    # generic: away from the lattice, bounded imaginary part
    return mpf(rng.uniform(0.05, 0.95)) + rng.uniform(-0.3, 0.3) * tau.imag * 1j


def _mortenson(rng):
    tau = _tau(rng)
    z = _z(rng, tau)
    zeta, q = e(z), e(tau)
    lhs = g2_series(zeta, q) + L_series(zeta, q)
    return lhs - M_fn(z, tau) - T_mortenson(z, tau), (z, tau)


def _kang(rng):
    tau = _tau(rng)
    z = _z(rng, tau)
    rhs = K_fn(z, tau) - 1j * e(-tau / 4) * mu(2 * z, tau, 2 * tau)
    return g2_series(e(z), e(tau)) - rhs, (z, tau)


def _mu_shift(rng):
    tau = _tau(rng)
    z1, z2, z = _z(rng, tau), _z(rng, tau), _z(rng, tau) / 2
    lhs = mu(z1 + z, z2 + z, tau) - mu(z1, z2, tau)
    return lhs - big_theta(z1, z2, z, tau), (z1, z2, z, tau)


def _half_shift(rng):
    tau = _tau(rng)
    z = _z(rng, tau)
    h = mpf(1) / 2
    lhs = g2_series(e(z + h / 2), e(tau + h))
    rhs = K_fn(z + h / 2, tau + h) - e(-tau / 4) * mu(2 * z + h, tau + h, 2 * tau)
    return lhs - rhs, (z, tau)


def _decompose(rng):
    tau = _tau(rng)
    z = _z(rng, tau)
    h = mpf(1) / 2
    rhs = t_correction(z, tau) + 1j * g2_series(e(z + h / 2), e(tau + h))
    return g2_series(e(z), e(tau)) - rhs, (z, tau)


def _theta_2_2(rng):
    tau = _tau(rng)
    rhs = -1j * e(-tau / 4) * eta(tau) ** 2 / eta(2 * tau)
    return theta(tau, 2 * tau) - rhs, (tau,)


def _theta_6_4(rng):
    tau = _tau(rng)
    z = _z(rng, tau)
    h = mpf(1) / 2
    r1 = theta(z + tau, tau) + mpmath.expjpi(-tau - 2 * z) * theta(z, tau)
    r2 = theta(h, tau) + 2 * eta(2 * tau) ** 2 / eta(tau)
    r3 = theta(tau + h, 2 * tau) + e(-tau / 4) * eta(2 * tau) ** 5 / (
        eta(tau) ** 2 * eta(4 * tau) ** 2
    )
    return max(abs(r1), abs(r2), abs(r3)), (z, tau)


def _conj_B(rng):
    tau = _tau(rng)
    q = e(tau)
    return B_series(q) - g2_series(q, q * q), (tau,)


_RANDOM = {
    "mortenson": (_mortenson, 1e-9),
    "kang": (_kang, 1e-9),
    "mu-shift": (_mu_shift, 1e-9),
    "half-shift": (_half_shift, 1e-9),
    "decompose": (_decompose, 1e-9),
    "theta-2-2": (_theta_2_2, 1e-9),
    "theta-6-4": (_theta_6_4, 1e-9),
    "mock-theta-conj-B": (_conj_B, 1e-11),
}


def _fmt(point):
    return "(" + ", ".join(mpmath.nstr(p, 8) for p in point) + ")"


def _run_random(name, samples, seed):
    fn, tol = _RANDOM[name]
    rng = random.Random(f"{name}:{seed}")
    worst, where = -1.0, ""
    with mpmath.workdps(_DPS):
        for _ in range(samples):
            residual, point = fn(rng)
            r = float(abs(residual))
            if r > worst:
                worst, where = r, _fmt(point)
    return IdentityReport(name, worst, where, tol, samples)


def _coprime(k):
    return [h for h in range(k) if math.gcd(h, k) == 1]


def _run_curious(name):
    if name == "curious-odd":
        cases = [(h, k) for k in range(1, 16, 2) for h in _coprime(k)]
        fn = curious_identity_odd
    else:
        cases = [(h, k) for k in (2, 6, 10, 14) for h in _coprime(k)]
        fn = curious_identity_two_mod_four
    worst, where = -1.0, ""
    for h, k in cases:
        d = fn(h, k)[2]
        if d > worst:
            worst, where = d, f"{h}/{k}"
    return IdentityReport(name, worst, where, 1e-10, len(cases))


def _run_watson():
    worst, where = -1.0, ""
    cases = [(1, 1), (1, 2)]
    for h, k in cases:
        d = abs(watson_radial_limit(h, k).value - watson_closed_form(h, k))
        if d > worst:
            worst, where = d, f"xi=e({h}/{2 * k})"
    return IdentityReport("watson", worst, where, 1e-3, len(cases))


IDENTITIES = tuple(sorted(list(_RANDOM) + ["curious-odd", "curious-2mod4", "watson"]))


def run_identity(name, samples=20, seed=0):
    """Run the suite called ``name``; raises ``KeyError`` for unknown names."""
    if name in _RANDOM:
        if samples < 1:
            raise ValueError("samples must be positive")
        return _run_random(name, samples, seed)
    if name in ("curious-odd", "curious-2mod4"):
        return _run_curious(name)
    if name == "watson":
        return _run_watson()
    raise KeyError(name)
