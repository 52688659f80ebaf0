"""Dedekind eta, Jacobi theta, Zwegers' mu and the quotients built from them.

All functions work in ``mpmath`` at the ambient ``mp.dps`` and return
``mpc``.  Wrap calls in ``mpmath.workdps(n)`` when more digits are needed,
e.g. close to the real line where large terms cancel.

Conventions: ``q = e(tau)``, ``zeta = e(z)`` and ``e(x) = exp(2 pi i x)``.
Theta is the odd Jacobi form

    theta(z; tau) = -i q^(1/8) zeta^(-1/2) (q)_inf (zeta)_inf (q/zeta)_inf
                  = sum_{nu in 1/2 + Z} e(nu^2 tau / 2 + nu (z + 1/2)).

Eta and theta are evaluated after reducing ``tau`` to the standard
fundamental domain with ``tau -> tau + 1`` and ``tau -> -1/tau``; the elliptic
variable is then moved into the period parallelogram with quasi-periodicity.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import mp, mpc, mpf

from .errors import DomainError, ParseError, PoleError, TruncationError

__all__ = [
    "ModularPoint",
    "EtaQuotient",
    "e",
    "eta",
    "theta",
    "theta_prime_zero",
    "mu",
    "big_theta",
    "K_fn",
    "eta_quotient_value",
    "eta_quotient_cusp_order",
    "parse_eta_quotient",
    "MAX_TERMS",
]

MAX_TERMS = 10**5
_MAX_REDUCTIONS = 10**4


def e(x):
    """``exp(2 pi i x)``."""
    return mpmath.expjpi(2 * mpmath.mpmathify(x))


@dataclass(frozen=True)
class ModularPoint:
    """A point ``tau`` of the upper half-plane with an optional elliptic variable."""

    tau: complex
    z: complex = 0j

    def __post_init__(self):
        _check_tau(self.tau)

    @property
    def q(self):
        return e(self.tau)

    @property
    def zeta(self):
        return e(self.z)


def _check_tau(tau):
    tau = mpc(tau)
    if not tau.imag > 0:
        raise DomainError(f"tau={tau} is not in the upper half-plane")
    return tau


def _reduce_tau(tau):
    """Yield the sequence of moves bringing ``tau`` into the fundamental domain.

    Returns ``(tau_reduced, moves)`` where each move is ``("T", n)`` for
    ``tau -> tau - n`` or ``("S", tau_before)`` for ``tau -> -1/tau``.
    """
    moves = []
    for _ in range(_MAX_REDUCTIONS):
        n = int(mpmath.nint(tau.real))
        if n:
            tau = tau - n
            moves.append(("T", n))
        if abs(tau) < 1 - mpf(10) ** (-mp.dps // 2):
            moves.append(("S", tau))
            tau = -1 / tau
        else:
            return tau, moves
    raise TruncationError("modular reduction did not terminate")


def _eta_series(tau):
    # pentagonal number theorem; Im(tau) >= sqrt(3)/2 here
    q = e(tau)
    total = mpc(1)
    eps = mp.eps
    for n in range(1, MAX_TERMS):
        sign = -1 if n % 2 else 1
        t1 = q ** (n * (3 * n - 1) // 2)
        t2 = t1 * q**n
        total += sign * (t1 + t2)
        if abs(t1) < eps:
            return e(tau / 24) * total
    raise TruncationError("eta series did not converge")


def eta(tau):
    """Dedekind eta ``q^(1/24) (q; q)_inf``."""
    tau = _check_tau(tau)
    tau, moves = _reduce_tau(tau)
    value = _eta_series(tau)
    for kind, data in reversed(moves):
        if kind == "T":
            value *= e(mpf(data) / 24)
        else:
            value /= mpmath.sqrt(-1j * data)
    return value


def _theta_series(z, tau):
    # z already reduced: |Im z| <= Im(tau)/2, |Re z| <= 1/2
    nome = mpmath.expjpi(tau)
    total = mpc(0)
    scale = mpf(0)
    eps = mp.eps
    w = z + mpf(1) / 2
    for m in range(MAX_TERMS):
        nu = mpf(2 * m + 1) / 2
        g = nome ** (nu * nu)
        plus = g * mpmath.expjpi(2 * nu * w)
        minus = g * mpmath.expjpi(-2 * nu * w)
        total += plus + minus
        size = abs(plus) + abs(minus)
        scale = max(scale, size)
        if m > 1 and size < eps * scale:
            return total
    raise TruncationError("theta series did not converge")


def theta(z, tau):
    """Jacobi theta ``theta(z; tau)`` (odd in ``z``, zero on ``Z tau + Z``)."""
    tau = _check_tau(tau)
    z = mpc(z)
    mult = mpc(1)
    for _ in range(_MAX_REDUCTIONS):
        n = int(mpmath.nint(tau.real))
        if n:
            # theta(z; tau) = e(n/8) theta(z; tau - n)
            tau = tau - n
            mult *= e(mpf(n) / 8)
        if abs(tau) < 1 - mpf(10) ** (-mp.dps // 2):
            # theta(z; tau) = theta(z/tau; -1/tau) / (-i sqrt(-i tau) e^{pi i z^2 / tau})
            mult /= -1j * mpmath.sqrt(-1j * tau) * mpmath.expjpi(z * z / tau)
            z = z / tau
            tau = -1 / tau
        else:
            break
    else:
        raise TruncationError("modular reduction did not terminate")
    m = int(mpmath.nint(z.imag / tau.imag))
    z0 = z - m * tau
    n = int(mpmath.nint(z0.real))
    z0 = z0 - n
    # theta(z0 + m tau + n) = (-1)^(m+n) e^{-pi i m^2 tau - 2 pi i m z0} theta(z0)
    if m or n:
        sign = -1 if (m + n) % 2 else 1
        mult *= sign * mpmath.expjpi(-(m * m) * tau - 2 * m * z0)
    return mult * _theta_series(z0, tau)


def _lattice_distance(z, tau):
    """Distance (in reduced coordinates) from ``z`` to the lattice ``Z tau + Z``."""
    tau = mpc(tau)
    z = mpc(z)
    m = z.imag / tau.imag
    w = z - mpmath.nint(m) * tau
    return max(abs(m - mpmath.nint(m)), abs(w.real - mpmath.nint(w.real)))


def _require_off_lattice(z, tau, label):
    if _lattice_distance(z, tau) < 1e-13:
        raise PoleError(f"{label} lies on the period lattice (theta vanishes)", term=label)


def theta_prime_zero(tau):
    """``d/dz theta(z; tau)`` at ``z = 0``, equal to ``-2 pi eta(tau)^3``."""
    return -2 * mp.pi * eta(tau) ** 3


def mu(z1, z2, tau):
    """Zwegers' ``mu(z1, z2; tau)`` from its defining bilateral sum."""
    tau = _check_tau(tau)
    z1, z2 = mpc(z1), mpc(z2)
    _require_off_lattice(z1, tau, "z1")
    _require_off_lattice(z2, tau, "z2")
    a, b, q = e(z1), e(z2), e(tau)
    y = tau.imag
    eps = mp.eps
    # the Gaussian dominates once |n| exceeds this
    n_min = int(2 * (abs(z1.imag) + abs(z2.imag)) / y) + 3

    def term(n):
        return (-b) ** n * q ** (mpf(n * n + n) / 2) / (1 - a * q**n)

    total = term(0)
    for n in range(1, MAX_TERMS):
        tp, tm = term(n), term(-n)
        total += tp + tm
        if n > n_min and abs(tp) + abs(tm) < eps * max(abs(total), eps):
            return e(z1 / 2) / theta(z2, tau) * total
    raise TruncationError("mu series did not converge")


def big_theta(z1, z2, z, tau):
    """The theta quotient measuring the defect of ``mu`` under a common shift."""
    tau = _check_tau(tau)
    z1, z2, z = mpc(z1), mpc(z2), mpc(z)
    for label, w in (("z1", z1), ("z2", z2), ("z1+z", z1 + z), ("z2+z", z2 + z)):
        _require_off_lattice(w, tau, label)
    num = theta_prime_zero(tau) * theta(z1 + z2 + z, tau) * theta(z, tau)
    den = theta(z1, tau) * theta(z2, tau) * theta(z1 + z, tau) * theta(z2 + z, tau)
    return num / (2j * mp.pi * den)


def K_fn(z, tau):
    """``eta(2 tau)^4 / (i zeta eta(tau)^2 theta(2z; 2tau))``."""
    tau = _check_tau(tau)
    z = mpc(z)
    _require_off_lattice(2 * z, 2 * tau, "2z")
    return eta(2 * tau) ** 4 / (1j * e(z) * eta(tau) ** 2 * theta(2 * z, 2 * tau))


@dataclass(frozen=True)
class EtaQuotient:
    """``q^q_power * prod eta(n tau)^r`` over ``factors = ((n, r), ...)``."""

    factors: tuple
    q_power: Fraction = field(default=Fraction(0))

    def __post_init__(self):
        factors = tuple((int(n), int(r)) for n, r in self.factors)
        if not factors:
            raise ValueError("an eta quotient needs at least one factor")
        scales = [n for n, _ in factors]
        if len(set(scales)) != len(scales):
            raise ValueError("eta quotient scales must be distinct")
        if any(n <= 0 for n in scales):
            raise ValueError("eta quotient scales must be positive")
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "q_power", Fraction(self.q_power))

    def __str__(self):
        parts = []
        if self.q_power:
            parts.append(f"q^({self.q_power})")
        parts.extend(f"eta({n})^{r}" for n, r in self.factors)
        return "*".join(parts)


def eta_quotient_value(quot, tau):
    tau = _check_tau(tau)
    value = e(mpmath.mpf(quot.q_power.numerator) / quot.q_power.denominator * tau)
    for n, r in quot.factors:
        if r:
            value *= eta(n * tau) ** r
    return value


def eta_quotient_cusp_order(quot, cusp):
    """Order of ``quot`` at the cusp ``h/k``.

    Measured in powers of the local parameter ``exp(-2 pi / (k^2 y))`` along
    ``tau = h/k + i y``: ``eta(n tau)`` contributes ``gcd(n, k)^2 / (24 n)`` per
    unit exponent.  The ``q^p`` prefix tends to the root of unity ``e(hp/k)``
    and contributes nothing.  Positive means the quotient vanishes there,
    negative means it blows up.
    """
    k = cusp.k
    return sum(
        (Fraction(r * math.gcd(n, k) ** 2, 24 * n) for n, r in quot.factors),
        Fraction(0),
    )


_TOKEN = re.compile(
    r"\s*(?:(?P<eta>eta)|(?P<q>q)|(?P<num>[+-]?\d+(?:/\d+)?)|(?P<op>[()*^/])|(?P<bad>\S))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        kind = m.lastgroup
        start = m.start(kind)
        if kind == "bad":
            raise ParseError(f"unexpected character {m.group(kind)!r}", text, start)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind, value=None):
        tok = self.peek()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            got = tok[1] or "end of input"
            raise ParseError(f"expected {want!r}, found {got!r}", self.text, tok[2])
        self.i += 1
        return tok

    def rational(self):
        if self.peek()[1] == "(":
            self.take("op", "(")
            tok = self.take("num")
            self.take("op", ")")
        else:
            tok = self.take("num")
        num, _, den = tok[1].partition("/")
        if den and int(den) == 0:
            raise ParseError("zero denominator", self.text, tok[2])
        return Fraction(int(num), int(den) if den else 1), tok[2]

    def exponent(self):
        if self.peek()[1] == "^":
            self.take("op", "^")
            return self.rational()
        return Fraction(1), self.peek()[2]

    def parse(self):
        q_power = Fraction(0)
        factors = {}
        while True:
            tok = self.peek()
            if tok[0] == "q":
                self.take("q")
                p, _ = self.exponent()
                q_power += p
            elif tok[0] == "eta":
                self.take("eta")
                self.take("op", "(")
                ntok = self.take("num")
                if "/" in ntok[1] or int(ntok[1]) <= 0:
                    raise ParseError("eta scale must be a positive integer", self.text, ntok[2])
                self.take("op", ")")
                r, rpos = self.exponent()
                if r.denominator != 1:
                    raise ParseError("eta exponent must be an integer", self.text, rpos)
                n = int(ntok[1])
                factors[n] = factors.get(n, 0) + int(r)
            else:
                raise ParseError(
                    f"expected 'eta' or 'q', found {tok[1] or 'end of input'!r}", self.text, tok[2]
                )
            if self.peek()[0] == "end":
                break
            self.take("op", "*")
        if not factors:
            raise ParseError("no eta factor given", self.text, len(self.text))
        return EtaQuotient(tuple(sorted(factors.items())), q_power)


def parse_eta_quotient(text):
    """Parse ``q^(p)*eta(n1)^r1*eta(n2)^r2...`` into an :class:`EtaQuotient`."""
    return _Parser(text).parse()
