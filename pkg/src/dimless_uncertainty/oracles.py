"""Closed-form reference values used to validate the numerical modules.

Half wave functions are symmetric-oscillator eigenfunctions restricted to
x >= 0 with doubled normalisation; positions are scaled by the classical
amplitude A_n of the full oscillator state, so y = sqrt(2n + 1) X.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from scipy import integrate

from .model import Family, Frame
from .quantum_moments import MomentSet
from .special import central_binomial_ratio, hermite, hermite_coefficients

SQRT_PI = math.sqrt(math.pi)
OSCILLATOR_OMEGA = math.sqrt(2.0)  # U = x**2 with m = 1


class Method(str, enum.Enum):
    CLOSED_FORM = "closed-form"
    QUADRATURE = "quadrature"


@dataclass(frozen=True)
class HalfMomentResult:
    n: int
    k: int
    value: float
    method: Method


def _half_prefactor(n: int, k: int) -> float:
    # (2n+1)**(-k/2) / (sqrt(pi) 2**(n-1) n!)
    log = -0.5 * k * math.log(2 * n + 1) - (n - 1) * math.log(2.0) - math.lgamma(n + 1)
    return math.exp(log) / SQRT_PI


def half_moment_integral(n: int, k: int) -> float:
    """Adaptive quadrature of the y**k e^{-y^2} H_n(y)^2 integral over [0, inf)."""
    upper = math.sqrt(2 * n + 1) + 12.0
    val, _ = integrate.quad(
        lambda y: y**k * math.exp(-y * y) * hermite(n, y) ** 2,
        0.0,
        upper,
        limit=400,
        epsabs=0.0,
        epsrel=2e-14,
    )
    return val


def half_moment_integral_exact(n: int, k: int) -> float:
    """Same integral summed term by term from the tabled Gaussian moments.

    integral_0^inf y**m e^{-y^2} dy = Gamma((m+1)/2) / 2, with the H_n**2
    coefficients kept as exact integers.
    """
    c = hermite_coefficients(n)
    rational = Fraction(0)  # coefficient of 1 (odd total degree)
    with_root_pi = Fraction(0)  # coefficient of sqrt(pi) (even total degree)
    for i, ci in enumerate(c):
        if ci == 0:
            continue
        for j, cj in enumerate(c):
            if cj == 0:
                continue
            m = i + j + k
            if m % 2:
                rational += Fraction(ci * cj * math.factorial((m - 1) // 2), 2)
            else:
                # Gamma(q + 1/2) = (2q)! sqrt(pi) / (4**q q!)
                q = m // 2
                with_root_pi += Fraction(ci * cj * math.factorial(2 * q), 2 * 4**q * math.factorial(q))
    return float(rational) + float(with_root_pi) * SQRT_PI


def printed_first_moment(n: int) -> float:
    """Published closed form of <X> for half wave function ``n`` (any n >= 0).

    Correct for odd ``n``; for even ``n`` see :func:`even_first_moment_corrected`.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    m = n // 2
    c = central_binomial_ratio(m)
    if n % 2 == 0:
        return 2.0 / SQRT_PI * (2 * m + 1) / math.sqrt(4 * m + 1) * c
    return 2.0 / SQRT_PI * (2 * m + 1) / math.sqrt(4 * m + 3) * c


def printed_fourth_moment(n: int) -> float:
    """<X^4> = (3/2)(n^2 + n + 1/2) / (2n + 1)^2 for half wave function ``n``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return 1.5 * (n * n + n + 0.5) / (2 * n + 1) ** 2


def even_first_moment_corrected(m: int) -> float:
    """<X> of the half wave function with even index 2m, from the integral identities."""
    return math.sqrt(4 * m + 1) * central_binomial_ratio(m) / SQRT_PI


def even_first_moment_discrepancy(m: int) -> float:
    """Ratio of the published even-state <X> formula to the quadrature value.

    Analytically 2(2m+1)/(4m+1); 2 at m = 0.
    """
    truth = half_oscillator_moment(2 * m, 1, Method.QUADRATURE).value
    return printed_first_moment(2 * m) / truth


def half_oscillator_moment(n: int, k: int, method: Method | str = Method.CLOSED_FORM) -> HalfMomentResult:
    """<X**k> of the half wave function built from oscillator state ``n``.

    ``n`` is the index of the full-line oscillator state; the half-line
    oscillator ground state is ``n = 1``.  The closed form for odd ``k=1``
    and even ``n`` reproduces the published expression as printed, which
    overstates the true value by 2(2m+1)/(4m+1); see
    :func:`even_first_moment_corrected`.
    """
    method = Method(method)
    if not 0 <= n <= 20:
        raise ValueError("n must lie in 0..20")
    if k not in (1, 2, 4):
        raise ValueError(f"unsupported moment order {k}; use 1, 2 or 4")
    if method is Method.QUADRATURE:
        value = _half_prefactor(n, k) * half_moment_integral(n, k)
    elif k == 1:
        value = printed_first_moment(n)
    elif k == 2:
        value = 0.5
    else:
        value = printed_fourth_moment(n)
    return HalfMomentResult(n, k, value, method)


def half_line_oscillator_moment(j: int, k: int, method: Method | str = Method.CLOSED_FORM) -> HalfMomentResult:
    """<X**k> for state ``j`` of U = x**2 on x >= 0 (odd full-line state 2j+1)."""
    return half_oscillator_moment(2 * j + 1, k, method)


def half_oscillator_first_moment_limit() -> float:
    return 2.0 / math.pi


def central_binomial_limit_check(n: int = 500) -> float:
    """sqrt(n) (2n)! / (2**(2n) (n!)**2), which tends to 1/sqrt(pi)."""
    return math.sqrt(n) * central_binomial_ratio(n)


def half_oscillator_fourth_moment_limit() -> float:
    return 3.0 / 8.0


# Airy zeros.  Ai is summed from its Maclaurin series in extended precision
# (the series cancels catastrophically for large negative arguments) and
# the zeros are Newton-polished from their asymptotic expansions.

_AIRY_DPS = 60


def _airy_series(z):
    """Ai(z) and Ai'(z) for an mpmath number z."""
    c1 = 1 / (mpmath.cbrt(9) * mpmath.gamma(mpmath.mpf(2) / 3))
    c2 = 1 / (mpmath.cbrt(3) * mpmath.gamma(mpmath.mpf(1) / 3))
    z3 = z**3
    f = df = g = dg = mpmath.mpf(0)
    tf, tg = mpmath.mpf(1), z
    k = 0
    eps = mpmath.mpf(10) ** (-_AIRY_DPS)
    while True:
        f += tf
        g += tg
        if k:
            df += tf * 3 * k / z
        dg += tg * (3 * k + 1) / z
        if abs(tf) < eps and abs(tg) < eps and k > 3:
            break
        tf = tf * z3 / ((3 * k + 2) * (3 * k + 3))
        tg = tg * z3 / ((3 * k + 3) * (3 * k + 4))
        k += 1
    return c1 * f - c2 * g, c1 * df - c2 * dg


def _asymptotic_zero(t: float, derivative: bool) -> float:
    if derivative:
        series = 1 - 7 / 48 * t**-2 + 35 / 288 * t**-4 - 181223 / 207360 * t**-6
    else:
        series = 1 + 5 / 48 * t**-2 - 5 / 36 * t**-4 + 77125 / 82944 * t**-6
    return -(t ** (2.0 / 3.0)) * series


def airy_zero(j: int, *, derivative: bool = False) -> float:
    """j-th negative zero of Ai (or of Ai' with ``derivative``), j >= 1."""
    if j < 1:
        raise ValueError("zeros are numbered from 1")
    phase = 3 * math.pi * (4 * j - (3 if derivative else 1)) / 8
    with mpmath.workdps(_AIRY_DPS):
        z = mpmath.mpf(_asymptotic_zero(phase, derivative))
        for _ in range(50):
            ai, dai = _airy_series(z)
            # Newton on Ai, or on Ai' using Ai'' = z Ai
            step = ai / dai if not derivative else dai / (z * ai)
            z -= step
            if abs(step) < mpmath.mpf(10) ** -30:
                break
        return float(z)


def bouncing_energies(count: int) -> list[float]:
    """Energies of U = x (x >= 0, hard wall at 0): E_n = |a_{n+1}| / 2**(1/3)."""
    if not 1 <= count <= 20:
        raise ValueError("count must lie in 1..20")
    return [-airy_zero(j) / 2 ** (1 / 3) for j in range(1, count + 1)]


def linear_symmetric_energies(count: int) -> list[float]:
    """Energies of U = |x|: Ai' zeros for even states, Ai zeros for odd ones."""
    out = []
    for n in range(count):
        j = n // 2 + 1
        out.append(-airy_zero(j, derivative=(n % 2 == 0)) / 2 ** (1 / 3))
    return out


def harmonic_energies(count: int) -> list[float]:
    """E_n = (n + 1/2) sqrt(2) for U = x**2, hbar = m = 1."""
    return [(n + 0.5) * OSCILLATOR_OMEGA for n in range(count)]


def harmonic_product_original(n: int) -> float:
    """(dx)^2 (dp)^2 = (n + 1/2)^2 hbar^2 for the symmetric oscillator."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return (n + 0.5) ** 2


def box_energy(n: int, family: Family | str, half_width: float = 1.0) -> float:
    """Energy of box state ``n`` (counted from 1)."""
    family = Family(family)
    width = 2.0 * half_width if family is Family.SYMMETRIC_BOX else half_width
    return n**2 * math.pi**2 / (2.0 * width**2)


def box_moments(n: int, family: Family | str, half_width: float = 1.0) -> MomentSet:
    """Dimensionless moments of infinite-well state ``n`` (counted from 1)."""
    family = Family(family)
    if not family.is_box:
        raise ValueError("box_moments needs a box family")
    if n < 1:
        raise ValueError("box states are counted from n = 1")
    energy = box_energy(n, family, half_width)
    frame = Frame(x_max=half_width, p_max=math.sqrt(2.0 * energy), energy=energy)
    s = n * n * math.pi**2
    if family is Family.SYMMETRIC_BOX:
        x_mean, x2 = 0.0, 1.0 / 3.0 - 2.0 / s
        # <X^4> on [-1, 1] for sin/cos standing waves
        x4 = 1.0 / 5.0 - 4.0 / s + 24.0 / s**2
    else:
        x_mean, x2 = 0.5, 1.0 / 3.0 - 1.0 / (2.0 * s)
        x4 = 1.0 / 5.0 - 1.0 / s + 1.5 / s**2
    return MomentSet(x_mean=x_mean, x2=x2, x4=x4, p_mean=0.0, p2=1.0, frame=frame, n=n)


def box_product(n: int, family: Family | str) -> float:
    return box_moments(n, family).product


__all__ = [
    "Method",
    "HalfMomentResult",
    "half_oscillator_moment",
    "half_line_oscillator_moment",
    "half_moment_integral",
    "half_moment_integral_exact",
    "printed_first_moment",
    "printed_fourth_moment",
    "even_first_moment_corrected",
    "even_first_moment_discrepancy",
    "half_oscillator_first_moment_limit",
    "half_oscillator_fourth_moment_limit",
    "central_binomial_limit_check",
    "airy_zero",
    "bouncing_energies",
    "linear_symmetric_energies",
    "harmonic_energies",
    "harmonic_product_original",
    "box_energy",
    "box_moments",
    "box_product",
]
