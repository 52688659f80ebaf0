"""Radial limits of ``g2(e(a/b) q^A; q^B)`` at every rational cusp.

A cusp ``h/k`` falls into exactly one of four cases:

=====================  ===========================  ==================
case                   hypothesis                   correction
=====================  ===========================  ==================
DenominatorPole        h/k in Q                     Mortenson's T
EvenTerminating        not in Q, ord2(k) > ord2(B)  none
ShiftedPole            ord2(k) <= ord2(B), in Q'    m
ShiftedTerminating     ord2(k) <= ord2(B), not Q'   t
=====================  ===========================  ==================

The shifted cases are reduced to the first two through
``g2(zeta; q) = t(zeta; q) + i g2(i zeta; -q)``, i.e. by moving
``h/k -> h/k + 1/(2B)`` and ``a/b -> a/b + 1/4 - A/(2B)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

from concurrent.futures import ProcessPoolExecutor

import mpmath
import numpy as np
from mpmath import mp, mpc, mpf

from .errors import (
    ClassificationError,
    DomainError,
    InsufficientDataError,
    MockRadialError,
    PoleError,
)
from .exact_arith import (
    Cusp,
    RootOfUnity,
    SpecParams,
    in_Q,
    in_Qprime,
    k2_of,
    k_prime_of,
    ord2,
    pochhammer_rou,
    stripped_ratio,
)
from .mock_core import (
    DEFAULT_ACCURACY,
    CorrectionId,
    SeriesAccuracy,
    T_terms,
    _g2_sum,
    b_eta,
    f_series,
    m_terms,
    specialize,
    t_terms,
)
from .modular_kernel import e

__all__ = [
    "CaseTag",
    "DEFAULT_T_GRID",
    "RadialEstimate",
    "RadialLimitResult",
    "SweepRow",
    "VerificationReport",
    "classify",
    "closed_form",
    "correction_for",
    "correction_value",
    "curious_identity_odd",
    "curious_identity_two_mod_four",
    "B_closed_form",
    "numeric_radial_limit",
    "reduced_cusps",
    "shifted",
    "sweep",
    "verify",
    "watson_closed_form",
    "watson_radial_limit",
]


class CaseTag(enum.Enum):
    DenominatorPole = "DenominatorPole"
    EvenTerminating = "EvenTerminating"
    ShiftedPole = "ShiftedPole"
    ShiftedTerminating = "ShiftedTerminating"

    def __str__(self):
        return self.value


_CORRECTIONS = {
    CaseTag.DenominatorPole: CorrectionId.MortensonT,
    CaseTag.EvenTerminating: CorrectionId.None_,
    CaseTag.ShiftedPole: CorrectionId.SmallM,
    CaseTag.ShiftedTerminating: CorrectionId.SmallT,
}


def correction_for(case):
    return _CORRECTIONS[case]


@dataclass(frozen=True)
class RadialLimitResult:
    """Closed-form radial limit: ``constant_Q == sum(terms)``."""

    case: CaseTag
    correction: CorrectionId
    constant_Q: complex
    terms: tuple = field(default=())
    k_effective: int = 1


def classify(params, cusp):
    if in_Q(params, cusp):
        return CaseTag.DenominatorPole
    if ord2(cusp.k) > ord2(params.B):
        return CaseTag.EvenTerminating
    if in_Qprime(params, cusp):
        return CaseTag.ShiftedPole
    return CaseTag.ShiftedTerminating


def shifted(params, cusp):
    """Parameters and cusp of ``g2(i e(a/b) q^A; -q^B)`` seen as an unshifted problem."""
    A, B = params.A, params.B
    new_params = SpecParams(params.a_over_b + Fraction(1, 4) - Fraction(A, 2 * B), params.A_over_B)
    new_cusp = Cusp(cusp.h_over_k + Fraction(1, 2 * B))
    return new_params, new_cusp


_SUM_DPS = 40


def _roots(params, cusp):
    x = cusp.h_over_k
    zeta = RootOfUnity(params.a_over_b + params.A * x)
    zeta_inv_step = RootOfUnity(-params.a_over_b + (params.B - params.A) * x)
    step = RootOfUnity(params.B * x)
    return zeta, zeta_inv_step, step


def _pole_terms(params, cusp):
    # -1/2 sum_{n < k'} q^n (zeta, q/zeta; q)_n / (-q; q)_n   at q = e(hB/k)
    zeta, zeta_inv_step, step = _roots(params, cusp)
    terms = []
    with mpmath.workdps(_SUM_DPS):
        for n in range(k_prime_of(cusp, params.B)):
            num = pochhammer_rou(zeta, step, n, True) * pochhammer_rou(zeta_inv_step, step, n, True)
            _, ratio = stripped_ratio(num, pochhammer_rou(-step, step, n, True))
            terms.append(complex(-(step**n).to_mp() * ratio / 2))
    return terms


def _terminating_terms(params, cusp):
    # sum_{n < k'/2} q^{n(n+1)/2} (-q; q)_n / (zeta, q/zeta; q)_{n+1}
    kp = k_prime_of(cusp, params.B)
    if kp % 2:
        raise ClassificationError(f"terminating sum needs even k' but k'={kp}")
    zeta, zeta_inv_step, step = _roots(params, cusp)
    terms = []
    with mpmath.workdps(_SUM_DPS):
        for n in range(kp // 2):
            den = pochhammer_rou(zeta, step, n + 1, True) * pochhammer_rou(zeta_inv_step, step, n + 1, True)
            _, ratio = stripped_ratio(pochhammer_rou(-step, step, n, True), den)
            terms.append(complex((step ** (n * (n + 1) // 2)).to_mp() * ratio))
    return terms


def closed_form(params, cusp):
    """Exact finite-sum value of the radial limit constant at ``h/k``."""
    case = classify(params, cusp)
    if case is CaseTag.DenominatorPole:
        terms = _pole_terms(params, cusp)
        k_eff = k_prime_of(cusp, params.B)
    elif case is CaseTag.EvenTerminating:
        terms = _terminating_terms(params, cusp)
        k_eff = k_prime_of(cusp, params.B)
    else:
        s_params, s_cusp = shifted(params, cusp)
        if case is CaseTag.ShiftedPole:
            inner = _pole_terms(s_params, s_cusp)
        else:
            inner = _terminating_terms(s_params, s_cusp)
        terms = [1j * x for x in inner]
        k_eff = k2_of(cusp, params.B)[1]
    return RadialLimitResult(
        case=case,
        correction=correction_for(case),
        constant_Q=complex(sum(terms)),
        terms=tuple(terms),
        k_effective=k_eff,
    )


# ---------------------------------------------------------------------------
# numerics along the radial path

DEFAULT_T_GRID = (0.20, 0.16, 0.12, 0.09, 0.06, 0.04, 0.03, 0.02)
DEFAULT_TOLERANCE = 1e-3
# grid points are DEFAULT_T_GRID / (GRID_SHRINK * k^2) for the effective denominator k
GRID_SHRINK = 2
_BASE_DPS = 40
_SAFE_DIGITS = 20


@dataclass(frozen=True)
class RadialEstimate:
    """Extrapolated value at ``t = 0`` of samples ``D(t)`` along the radial path."""

    value: complex
    error_estimate: float
    t_grid: tuple
    samples: tuple
    dropped: tuple = ()


def radial_tau(cusp, t):
    """``tau`` with ``e(tau) = e(h/k) exp(-t)``."""
    return mpf(cusp.h) / cusp.k + 1j * mpf(t) / (2 * mp.pi)


def correction_terms(correction, params, tau):
    """Summands of the subtracted modular correction at ``q = e(tau)``."""
    correction = CorrectionId(correction)
    if correction is CorrectionId.None_:
        return ()
    if correction is CorrectionId.SmallM:
        return m_terms(params, tau)
    z, tau_b = specialize(params, tau)
    if correction is CorrectionId.MortensonT:
        return T_terms(z, tau_b)
    return t_terms(z, tau_b)


def correction_value(correction, params, tau):
    """Value of the correction at ``q = e(tau)``; ``tau`` fixes every fractional power."""
    return sum(correction_terms(correction, params, tau), mpc(0))


def g2_minus_correction(params, cusp, correction, t, acc=DEFAULT_ACCURACY):
    """``D(t) = g2(e(a/b) q^A; q^B) - correction`` at ``q = e(h/k) exp(-t)``.

    Near a cusp both pieces grow exponentially while their difference stays
    bounded, so the evaluation is repeated with enough digits to absorb the
    cancellation.
    """
    acc = SeriesAccuracy(acc.tolerance, max(acc.max_terms, 10**6))

    def attempt(dps):
        with mpmath.workdps(dps):
            tau = radial_tau(cusp, t)
            z, tau_b = specialize(params, tau)
            g2, biggest = _g2_sum(e(z), e(tau_b), acc)
            terms = correction_terms(correction, params, tau)
            scale = max([biggest, abs(g2)] + [abs(x) for x in terms])
            digits = float(mpmath.log10(scale)) if scale > 0 else 0.0
            return complex(g2 - sum(terms, mpc(0))), digits

    value, digits = attempt(_BASE_DPS)
    if digits > _SAFE_DIGITS:
        value, digits = attempt(int(digits) + _BASE_DPS - 10)
    return value


def default_grid(params, cusp):
    """Default grid shrunk by the square of the effective cusp denominator.

    The unscaled grid is still far from the limit once ``k >= 3``: the
    approach to the constant happens on the scale ``t ~ 1/k^2``.
    """
    case = classify(params, cusp)
    if case in (CaseTag.ShiftedPole, CaseTag.ShiftedTerminating):
        k = k2_of(cusp, params.B)[0]
    else:
        k = cusp.k
    return tuple(t / (GRID_SHRINK * k**2) for t in DEFAULT_T_GRID)


def extrapolate(t_grid, samples):
    """Quadratic least-squares fit in ``t``; returns ``(c0, error_estimate)``."""
    ts = np.asarray(t_grid, dtype=float)
    ys = np.asarray(samples, dtype=complex)
    if len(ts) < 4:
        raise InsufficientDataError(f"need at least 4 usable points, got {len(ts)}")

    def fit(x, y):
        coeffs, *_ = np.linalg.lstsq(np.vander(x, 3, increasing=True), y, rcond=None)
        return coeffs

    full = fit(ts, ys)
    residual = np.max(np.abs(np.vander(ts, 3, increasing=True) @ full - ys))
    keep = ts != ts.min()
    reduced = fit(ts[keep], ys[keep])
    return complex(full[0]), float(residual + abs(full[0] - reduced[0]))


def _check_grid(t_grid):
    t_grid = tuple(float(t) for t in t_grid)
    if any(t <= 0 for t in t_grid):
        raise DomainError("radial grid points must be positive")
    if any(b >= a for a, b in zip(t_grid, t_grid[1:])):
        raise DomainError("radial grid must be strictly decreasing")
    return t_grid


def numeric_radial_limit(params, cusp, correction, t_grid=None, acc=DEFAULT_ACCURACY):
    """Estimate ``lim_{t -> 0} D(t)`` by quadratic extrapolation.

    Points where a series hits a pole of its denominator are dropped and
    reported in ``dropped``.
    """
    t_grid = default_grid(params, cusp) if t_grid is None else _check_grid(t_grid)
    used, samples, dropped = [], [], []
    for t in t_grid:
        try:
            samples.append(g2_minus_correction(params, cusp, correction, t, acc))
        except PoleError:
            dropped.append(t)
            continue
        used.append(t)
    value, err = extrapolate(used, samples)
    return RadialEstimate(value, err, tuple(used), tuple(samples), tuple(dropped))


@dataclass(frozen=True)
class VerificationReport:
    params: SpecParams
    cusp: Cusp
    result: RadialLimitResult
    estimate: RadialEstimate
    abs_diff: float
    tolerance: float

    @property
    def passed(self):
        return self.abs_diff < self.tolerance


def verify(params, cusp, tolerance=DEFAULT_TOLERANCE, t_grid=None, correction=None):
    """Compare the closed form against the radial numerics.

    ``correction`` overrides the matched correction (useful to show that a
    wrong choice does not converge).
    """
    result = closed_form(params, cusp)
    corr = result.correction if correction is None else CorrectionId(correction)
    estimate = numeric_radial_limit(params, cusp, corr, t_grid)
    diff = abs(estimate.value - result.constant_Q)
    return VerificationReport(params, cusp, result, estimate, diff, tolerance)


# ---------------------------------------------------------------------------
# B(q) = g2(q; q^2) and its two curious identities

_B_PARAMS = SpecParams(Fraction(0), Fraction(1, 2))


def _coprime_cusp(h, k):
    if k <= 0 or math.gcd(h, k) != 1:
        raise DomainError(f"need gcd(h, k) = 1 and k > 0, got h={h}, k={k}")
    return Cusp(Fraction(h, k))


def _ratio(num, den):
    net, value = stripped_ratio(num, den)
    return value


def _B_odd(h, k):
    x = Fraction(h, k)
    s, s2 = RootOfUnity(x), RootOfUnity(2 * x)
    with mpmath.workdps(_SUM_DPS):
        total = mpc(0)
        for n in range((k - 1) // 2 + 1):
            num = pochhammer_rou(s, s2, n, precise=True)
            den = pochhammer_rou(-s2, s2, n, precise=True)
            total += (s2**n).to_mp() * _ratio(num * num, den)
        return complex(-total / 2)


def _B_four(h, k):
    x = Fraction(h, k)
    s, s2 = RootOfUnity(x), RootOfUnity(2 * x)
    with mpmath.workdps(_SUM_DPS):
        total = mpc(0)
        for n in range(k // 4):
            den = pochhammer_rou(s, s2, n + 1, precise=True)
            num = pochhammer_rou(-s2, s2, n, precise=True)
            total += RootOfUnity(x * n * (n + 1)).to_mp() * _ratio(num, den * den)
        return complex(total)


def _half_shift_sum(h, k, count):
    # i sum (-1)^{n(n+1)/2} e(h n(n+1)/k) (s2; -s2)_n / (i s; -s2)_{n+1}^2
    x = Fraction(h, k)
    s, s2 = RootOfUnity(x), RootOfUnity(2 * x)
    i = RootOfUnity(Fraction(1, 4))
    with mpmath.workdps(_SUM_DPS):
        total = mpc(0)
        for n in range(count):
            sign = RootOfUnity(Fraction(n * (n + 1), 4) + x * n * (n + 1))
            den = pochhammer_rou(i * s, -s2, n + 1, precise=True)
            num = pochhammer_rou(s2, -s2, n, precise=True)
            total += sign.to_mp() * _ratio(num, den * den)
        return complex(1j * total)


def B_closed_form(cusp):
    """Radial limit constant of ``B(q)`` at ``h/k`` from the three B-specific sums.

    For odd ``k`` the value is the limit of ``B - N``; otherwise of ``B`` itself.
    """
    cusp = Cusp(cusp) if not isinstance(cusp, Cusp) else cusp
    h, k = cusp.h, cusp.k
    if k % 2:
        return _B_odd(h, k)
    if k % 4 == 0:
        return _B_four(h, k)
    return _half_shift_sum(h, k, k // 2)


def curious_identity_odd(h, k):
    """Both sides of the odd-``k`` identity and their distance."""
    if k % 2 == 0:
        raise DomainError(f"k must be odd, got {k}")
    _coprime_cusp(h, k)
    lhs = _B_odd(h, k)
    rhs = _half_shift_sum(h, k, k)
    return lhs, rhs, abs(lhs - rhs)


def curious_identity_two_mod_four(h, k):
    """Both sides of the ``k = 2 mod 4`` identity and their distance."""
    if k % 4 != 2:
        raise DomainError(f"k must be 2 mod 4, got {k}")
    _coprime_cusp(h, k)
    x = Fraction(h, k)
    s, s2 = RootOfUnity(x), RootOfUnity(2 * x)
    with mpmath.workdps(_SUM_DPS):
        lhs = mpc(0)
        for n in range((k - 2) // 4 + 1):
            num = pochhammer_rou(-s, s2, n, precise=True)
            den = pochhammer_rou(s, s2, n + 1, precise=True)
            lhs += (s**n).to_mp() * _ratio(num, den)
        lhs = complex(lhs)
    rhs = _half_shift_sum(h, k, k // 2)
    return lhs, rhs, abs(lhs - rhs)


# ---------------------------------------------------------------------------
# Ramanujan's f(q) at even order roots of unity


def watson_closed_form(h, k):
    """``-4 sum_{n<k} (-xi; xi)_n^2 xi^{n+1}`` for the primitive ``2k``-th root ``xi = e(h/2k)``."""
    if h % 2 == 0 or math.gcd(h, 2 * k) != 1:
        raise DomainError(f"e({h}/{2 * k}) is not a primitive root of order {2 * k}")
    xi = RootOfUnity(Fraction(h, 2 * k))
    total = 0j
    for n in range(k):
        p = pochhammer_rou(-xi, xi, n)
        total += complex(p.value) ** 2 * (xi ** (n + 1)).to_complex()
    return -4 * total


def watson_difference(h, k, t):
    """``f(q) - (-1)^k b(q)`` at ``q = e(h/2k) exp(-t)``."""

    def attempt(dps):
        with mpmath.workdps(dps):
            tau = radial_tau(Cusp(Fraction(h, 2 * k)), t)
            f, b = f_series(e(tau), SeriesAccuracy(max_terms=10**6)), b_eta(tau)
            scale = max(abs(f), abs(b), mpf(1))
            return complex(f - (-1) ** k * b), float(mpmath.log10(scale))

    value, digits = attempt(_BASE_DPS)
    if digits > _SAFE_DIGITS:
        value, _ = attempt(int(digits) + _BASE_DPS - 10)
    return value


def watson_radial_limit(h, k, t_grid=None):
    t_grid = tuple(t / (GRID_SHRINK * (2 * k) ** 2) for t in DEFAULT_T_GRID) if t_grid is None else _check_grid(t_grid)
    samples = [watson_difference(h, k, t) for t in t_grid]
    value, err = extrapolate(t_grid, samples)
    return RadialEstimate(value, err, tuple(t_grid), tuple(samples))


# ---------------------------------------------------------------------------
# sweeps


def reduced_cusps(k_max):
    """Reduced ``h/k`` in ``[0, 1)`` with ``k <= k_max``, sorted by ``k`` then ``h``."""
    return [Cusp(Fraction(h, k)) for k in range(1, k_max + 1) for h in range(k) if math.gcd(h, k) == 1]


@dataclass(frozen=True)
class SweepRow:
    cusp: Cusp
    case: CaseTag
    correction: CorrectionId
    constant_Q: complex
    numeric: complex | None
    abs_diff: float | None
    status: str


def _sweep_one(params, cusp, tolerance, numeric):
    try:
        result = closed_form(params, cusp)
    except ClassificationError as exc:
        case = classify(params, cusp)
        nan = complex(float("nan"), float("nan"))
        return SweepRow(cusp, case, correction_for(case), nan, None, None, f"error:{type(exc).__name__}")
    if not numeric:
        return SweepRow(cusp, result.case, result.correction, result.constant_Q, None, None, "skipped")
    try:
        estimate = numeric_radial_limit(params, cusp, result.correction)
    except (MockRadialError, ArithmeticError) as exc:
        return SweepRow(cusp, result.case, result.correction, result.constant_Q, None, None, f"error:{type(exc).__name__}")
    diff = abs(estimate.value - result.constant_Q)
    status = "pass" if diff < tolerance else "fail"
    return SweepRow(cusp, result.case, result.correction, result.constant_Q, estimate.value, diff, status)


def _sweep_task(args):
    return _sweep_one(*args)


def sweep(params, k_max, tolerance=DEFAULT_TOLERANCE, numeric=True, jobs=1, on_row=None):
    """Classify, evaluate and (optionally) verify every reduced cusp with ``k <= k_max``.

    Rows come back sorted by ``k`` then ``h`` whatever ``jobs`` is; ``on_row``
    sees them in that order as soon as each one is available.
    """
    if k_max > 24:
        raise DomainError(f"k_max must be <= 24, got {k_max}")
    cusps = reduced_cusps(k_max)
    tasks = [(params, c, tolerance, numeric) for c in cusps]
    rows = []
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for row in pool.map(_sweep_task, tasks):
                rows.append(row)
                if on_row:
                    on_row(row)
    else:
        for task in tasks:
            row = _sweep_task(task)
            rows.append(row)
            if on_row:
                on_row(row)
    distinct = {r.correction for r in rows}
    if len(distinct) > 3:
        raise ClassificationError(f"{len(distinct)} distinct corrections: {sorted(map(str, distinct))}")
    return rows
