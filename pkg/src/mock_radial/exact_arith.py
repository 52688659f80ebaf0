"""Exact arithmetic on reduced fractions and roots of unity.

Roots of unity are stored by their angle ``x`` in ``[0, 1)`` so that
``e(x) = exp(2*pi*i*x)``.  Products of roots of unity are then fraction
additions, and deciding whether a factor ``1 - x`` of a q-Pochhammer symbol
vanishes is an exact test rather than a floating point comparison.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "Fraction",
    "RootOfUnity",
    "SpecParams",
    "Cusp",
    "StrippedProduct",
    "make_fraction",
    "mod1",
    "ord2",
    "pochhammer_rou",
    "alpha_order",
    "alpha_orders",
    "beta_order",
    "beta_orders",
    "zero_profile",
    "in_Q",
    "in_Qprime",
    "k2_of",
    "k_prime_of",
    "stripped_ratio",
]


def make_fraction(num, den=1):
    """Reduced fraction with positive denominator.

    >>> make_fraction(2, 4)
    Fraction(1, 2)
    """
    if den == 0:
        raise ZeroDivisionError("fraction with zero denominator")
    return Fraction(num, den)


def mod1(x):
    """Reduce a fraction into ``[0, 1)``."""
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


def ord2(m):
    """2-adic valuation of a nonzero integer."""
    m = abs(int(m))
    if m == 0:
        raise ValueError("ord2(0) is undefined")
    return (m & -m).bit_length() - 1


def _parse_fraction(value):
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            return make_fraction(int(num), int(den))
        return Fraction(int(text))
    if isinstance(value, tuple):
        return make_fraction(*value)
    return Fraction(value)


@dataclass(frozen=True)
class RootOfUnity:
    """The root of unity ``e(angle)`` with ``angle`` reduced into ``[0, 1)``."""

    angle: Fraction

    def __post_init__(self):
        object.__setattr__(self, "angle", mod1(self.angle))

    @classmethod
    def from_fraction(cls, num, den=1):
        return cls(make_fraction(num, den))

    @property
    def order(self):
        return self.angle.denominator

    def is_one(self):
        return self.angle == 0

    def __mul__(self, other):
        if not isinstance(other, RootOfUnity):
            return NotImplemented
        return RootOfUnity(self.angle + other.angle)

    def __pow__(self, n):
        return RootOfUnity(self.angle * int(n))

    def __neg__(self):
        return RootOfUnity(self.angle + Fraction(1, 2))

    def inverse(self):
        return RootOfUnity(-self.angle)

    def __complex__(self):
        return self.to_complex()

    def to_mp(self):
        """Value as an ``mpmath.mpc`` at the ambient precision."""
        import mpmath

        x = self.angle
        if 4 % x.denominator == 0:
            return mpmath.mpc(self.to_complex())
        return mpmath.expjpi(2 * mpmath.mpf(x.numerator) / x.denominator)

    def to_complex(self):
        # exact values at the quarter points keep 1 - x clean for i, -1, -i
        x = self.angle
        if 4 % x.denominator == 0:
            return {0: 1 + 0j, 1: 1j, 2: -1 + 0j, 3: -1j}[int(x * 4)]
        return cmath.exp(2j * math.pi * x.numerator / x.denominator)


@dataclass(frozen=True)
class SpecParams:
    """The specialization ``g2(e(a/b) q^A; q^B)``, both fractions in ``[0, 1)``."""

    a_over_b: Fraction
    A_over_B: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a_over_b", mod1(_parse_fraction(self.a_over_b)))
        object.__setattr__(self, "A_over_B", mod1(_parse_fraction(self.A_over_B)))

    @property
    def a(self):
        return self.a_over_b.numerator

    @property
    def b(self):
        return self.a_over_b.denominator

    @property
    def A(self):
        return self.A_over_B.numerator

    @property
    def B(self):
        return self.A_over_B.denominator

    def __str__(self):
        return f"({self.a}/{self.b}, {self.A}/{self.B})"


@dataclass(frozen=True, order=True)
class Cusp:
    """The rational point ``h/k`` in ``[0, 1)``, approached through ``e(h/k)``."""

    h_over_k: Fraction

    def __post_init__(self):
        object.__setattr__(self, "h_over_k", mod1(_parse_fraction(self.h_over_k)))

    @property
    def h(self):
        return self.h_over_k.numerator

    @property
    def k(self):
        return self.h_over_k.denominator

    def root(self):
        return RootOfUnity(self.h_over_k)

    def __str__(self):
        return f"{self.h}/{self.k}"


@dataclass(frozen=True)
class StrippedProduct:
    """A product split as ``0**vanishing_order * unit_part`` with ``unit_part != 0``."""

    vanishing_order: int
    unit_part: complex

    @property
    def value(self):
        return 0j if self.vanishing_order > 0 else self.unit_part

    def __mul__(self, other):
        return StrippedProduct(
            self.vanishing_order + other.vanishing_order,
            self.unit_part * other.unit_part,
        )


def stripped_ratio(num, den):
    """Value of ``num / den`` for stripped products.

    Returns ``(net_order, value)``; a positive net order means the ratio is an
    exact zero.  A negative net order means a genuine pole and raises.
    """
    from .errors import ClassificationError

    net = num.vanishing_order - den.vanishing_order
    if net < 0:
        raise ClassificationError(
            f"denominator vanishes to order {den.vanishing_order} "
            f"but numerator only to order {num.vanishing_order}"
        )
    if net > 0:
        return net, 0j
    return 0, num.unit_part / den.unit_part


def pochhammer_rou(start, step, n, precise=False):
    """``(start; step)_n`` at roots of unity, with its exact zeros stripped out.

    With ``precise`` the unit part is an mpmath number at the ambient precision.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    order = 0
    unit = 1 + 0j
    if precise:
        import mpmath

        unit = mpmath.mpc(1)
    x = start
    for _ in range(n):
        if x.is_one():
            order += 1
        else:
            unit *= 1 - (x.to_mp() if precise else x.to_complex())
        x = x * step
    return StrippedProduct(order, unit)


def _denominator_roots(params, cusp):
    """The three roots ``zeta, zeta^{-1} q^B, q^B`` at ``q = e(h/k)``."""
    x = cusp.h_over_k
    zeta = RootOfUnity(params.a_over_b + params.A * x)
    step = RootOfUnity(params.B * x)
    zeta_inv_step = RootOfUnity(-params.a_over_b + (params.B - params.A) * x)
    return zeta, zeta_inv_step, step


def zero_profile(start, step, n_max):
    """Vanishing orders of ``(start; step)_n`` for ``n = 0..n_max``, cumulatively."""
    out = [0]
    x = start
    for _ in range(n_max):
        out.append(out[-1] + x.is_one())
        x = x * step
    return out


def alpha_orders(params, cusp, n_max):
    """``[alpha_order(params, cusp, n) for n in range(n_max + 1)]`` in one pass."""
    zeta, zeta_inv_step, step = _denominator_roots(params, cusp)
    p1 = zero_profile(zeta, step, n_max + 1)
    p2 = zero_profile(zeta_inv_step, step, n_max + 1)
    return [p1[n + 1] + p2[n + 1] for n in range(n_max + 1)]


def beta_orders(cusp, B, n_max):
    """``[beta_order(cusp, B, n) for n in range(n_max + 1)]`` in one pass."""
    step = RootOfUnity(B * cusp.h_over_k)
    return zero_profile(-step, step, n_max)


def alpha_order(params, cusp, n):
    """Order of the zero of the ``n``-th g2 denominator at ``q = e(h/k)``."""
    zeta, zeta_inv_step, step = _denominator_roots(params, cusp)
    return (
        pochhammer_rou(zeta, step, n + 1).vanishing_order
        + pochhammer_rou(zeta_inv_step, step, n + 1).vanishing_order
    )


def beta_order(cusp, B, n):
    """Order of the zero of ``(-q^B; q^B)_n`` at ``q = e(h/k)``."""
    step = RootOfUnity(B * cusp.h_over_k)
    return pochhammer_rou(-step, step, n).vanishing_order


def in_Q(params, cusp):
    """Whether the g2 denominator has a zero as ``q -> e(h/k)``."""
    a, b, A, B = params.a, params.b, params.A, params.B
    h, k = cusp.h, cusp.k
    if k % b:
        return False
    return (a * k // b + h * A) % math.gcd(B, k) == 0


def in_Qprime(params, cusp):
    """Whether the half-shifted series ``g2(i zeta; -q)`` has a denominator zero."""
    a, b, A, B = params.a, params.b, params.A, params.B
    h, k = cusp.h, cusp.k
    if (2 * k) % b or k % 2:
        return False
    return (2 * A * h + 2 * a * k // b + k // 2) % math.gcd(B, k) == 0


def k_prime_of(cusp, B):
    """``k / gcd(k, B)``: the order of ``e(hB/k)``."""
    return cusp.k // math.gcd(cusp.k, B)


def k2_of(cusp, B):
    """Denominator ``k2`` of ``h/k + 1/(2B)`` and ``k2' = k2 / gcd(k2, B)``."""
    k2 = (cusp.h_over_k + Fraction(1, 2 * B)).denominator
    return k2, k2 // math.gcd(k2, B)
