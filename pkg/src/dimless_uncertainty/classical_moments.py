"""Classical dispersions from the time-spent density p(x) ~ 1/sqrt(E - U(x)).

Phase-space averages at fixed energy reduce to position integrals,

    <f(x, p)> = 1/2 * integral dx p(x) [f(x, -p(x)) + f(x, +p(x))],

with p(x) = sqrt(2m (E - U(x))).  The inverse square-root singularity at
the turning points is handled by tanh-sinh quadrature.  Power-law moments
also have Beta-function closed forms, used here as independent checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .model import MASS, Family, Frame, PotentialSpec, dimensionless_frame
from .quadrature import QuadratureError, tanh_sinh
from .quantum_moments import MomentSet, UncertaintyRecord
from .special import beta, beta_ratio

NORMALIZATION_CHECK = 1e-10


def one_minus_power(x: np.ndarray, xc: np.ndarray, b: int) -> np.ndarray:
    """1 - x**b for x in (0, 1), accurate when x is close to 1 (xc = 1 - x)."""
    log_x = np.where(xc < 0.5, np.log1p(-np.minimum(xc, 0.5)), np.log(np.maximum(x, 1e-300)))
    return -np.expm1(b * log_x)


@dataclass(frozen=True)
class ClassicalDensity:
    """Normalised classical position density of one energy shell.

    Quadrature runs over X in [0, 1]; symmetric potentials are folded so the
    averaged function is evaluated at +X and -X with equal weight.
    """

    spec: PotentialSpec
    energy: float
    frame: Frame
    normalization: float

    @property
    def support(self) -> tuple[float, float]:
        return (-1.0, 1.0) if self.spec.is_symmetric else (0.0, 1.0)

    def _gap(self, X: np.ndarray, Xc: np.ndarray) -> np.ndarray:
        # E - U(x) at x = X * x_max
        if self.spec.is_box:
            return np.full_like(X, self.energy)
        return self.energy * one_minus_power(X, Xc, self.spec.b)

    def _raw(self, f: Callable | None) -> float:
        def integrand(X, Xc):
            gap = self._gap(X, Xc)
            weight = self.frame.x_max / np.sqrt(gap)
            if f is None:
                return weight
            P = np.sqrt(2.0 * MASS * gap) / self.frame.p_max
            value = 0.5 * (f(X, -P) + f(X, P))
            if self.spec.is_symmetric:
                value = 0.5 * (value + 0.5 * (f(-X, -P) + f(-X, P)))
            return weight * value

        return tanh_sinh(integrand)

    def pdf(self, X) -> np.ndarray:
        """Density in the dimensionless position X (zero outside the support)."""
        X = np.asarray(X, dtype=float)
        lo, hi = self.support
        # the wall of a half-line well belongs to the support; turning points do not
        above = X > lo if self.spec.is_symmetric else X >= lo
        inside = above & (X < hi)
        ax = np.where(inside, np.abs(X), 0.5)
        gap = self._gap(ax, 1.0 - ax)
        return np.where(inside, self.frame.x_max / np.sqrt(gap) / self._support_factor() / self.normalization, 0.0)

    def _support_factor(self) -> float:
        return 2.0 if self.spec.is_symmetric else 1.0

    def average(self, f: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> float:
        """Phase-space average of ``f(X, P)`` on this energy shell."""
        return self._raw(f) / self.normalization

    def moment(self, k: int) -> float:
        return self.average(lambda X, P: X**k)


def _closed_form_normalization(spec: PotentialSpec, energy: float, frame: Frame) -> float:
    if spec.is_box:
        return frame.x_max / math.sqrt(energy)
    return frame.x_max / math.sqrt(energy) * beta(1.0 / spec.b, 0.5) / spec.b


def classical_density(spec: PotentialSpec, energy: float) -> ClassicalDensity:
    frame = dimensionless_frame(spec, energy)
    unnormalized = ClassicalDensity(spec, frame.energy, frame, 1.0)
    norm = unnormalized._raw(None)
    expected = _closed_form_normalization(spec, frame.energy, frame)
    if abs(norm - expected) > NORMALIZATION_CHECK * expected:
        raise QuadratureError(
            f"classical normalisation {norm!r} differs from closed form {expected!r}"
        )
    return ClassicalDensity(spec, frame.energy, frame, norm)


def classical_average(spec: PotentialSpec, energy: float, f: Callable) -> float:
    return classical_density(spec, energy).average(f)


def classical_moment_closed_form(b: int, family: Family | str, k: int) -> float:
    """<X**k> on the classical energy shell of a ``|x|**b`` potential.

    <X**k> = B((k+1)/b, 1/2) / B(1/b, 1/2); odd moments of symmetric
    potentials vanish.
    """
    family = Family(family)
    if family.is_box:
        raise ValueError("closed form is for power-law families")
    if k < 0:
        raise ValueError("moment order must be non-negative")
    if family is Family.SYMMETRIC_POWER and k % 2:
        return 0.0
    return beta_ratio((k + 1) / b, 0.5, 1.0 / b, 0.5)


def classical_moments(spec: PotentialSpec, energy: float) -> MomentSet:
    density = classical_density(spec, energy)
    return MomentSet(
        x_mean=density.moment(1),
        x2=density.moment(2),
        x4=density.moment(4),
        p_mean=density.average(lambda X, P: P),
        p2=density.average(lambda X, P: P**2),
        frame=density.frame,
    )


def classical_dispersion_product(
    spec: PotentialSpec, energy: float, record: UncertaintyRecord | None = None
) -> UncertaintyRecord:
    """Fill the classical side of ``record`` (or a new one) at energy E."""
    moments = classical_moments(spec, energy)
    if record is None:
        return UncertaintyRecord(potential=spec.label, classical=moments)
    return UncertaintyRecord(record.potential, record.n, record.quantum, moments)


@dataclass(frozen=True)
class ClassicalMomentumDensity:
    """Classical density of P = p/p_max, proportional to 1/|F(x(P))|."""

    spec: PotentialSpec
    energy: float
    frame: Frame
    normalization: float

    def _weight(self, P: np.ndarray, Pc: np.ndarray) -> np.ndarray:
        # |F| = a b x**(b-1) with x = x_max (1 - P**2)**(1/b)
        b, a = self.spec.b, self.spec.a
        if b == 1:
            return np.full_like(P, 1.0 / a)
        shell = Pc * (1.0 + P)  # 1 - P**2
        x_pow = self.frame.x_max ** (b - 1) * shell ** ((b - 1) / b)
        return 1.0 / (a * b * x_pow)

    def _raw(self, g: Callable | None) -> float:
        def integrand(P, Pc):
            w = self._weight(P, Pc)
            if g is None:
                return w
            return w * 0.5 * (g(P) + g(-P))

        return tanh_sinh(integrand)

    def pdf(self, P) -> np.ndarray:
        P = np.asarray(P, dtype=float)
        inside = np.abs(P) < 1
        ap = np.where(inside, np.abs(P), 0.5)
        return np.where(inside, self._weight(ap, 1.0 - ap) / (2.0 * self.normalization), 0.0)

    def average(self, g: Callable[[np.ndarray], np.ndarray]) -> float:
        return self._raw(g) / self.normalization

    def moment(self, k: int) -> float:
        return self.average(lambda P: P**k)


def classical_momentum_density(spec: PotentialSpec, energy: float) -> ClassicalMomentumDensity:
    """Momentum-space classical density for a power-law potential.

    Box potentials are rejected: their force is an impulse at the walls.
    """
    if spec.is_box:
        raise ValueError("momentum density needs a finite force; box walls are impulsive")
    frame = dimensionless_frame(spec, energy)
    density = ClassicalMomentumDensity(spec, frame.energy, frame, 1.0)
    return ClassicalMomentumDensity(spec, frame.energy, frame, density._raw(None))
