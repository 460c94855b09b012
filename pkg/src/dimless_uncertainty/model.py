"""Potential families, unit conventions and per-state dimensionless frames.

Units are fixed to hbar = m = 1 and the potential coupling a = 1.  With
these choices a state of energy E has classical turning point x_max with
U(x_max) = E and maximal classical momentum p_max = sqrt(2 E).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

HBAR = 1.0
MASS = 1.0
COUPLING = 1.0

# Finite stand-in for U = +inf outside the allowed region.  The eigensolver
# never assembles these points; the wall is imposed as a Dirichlet boundary.
WALL = 1.0e30


class Family(str, enum.Enum):
    SYMMETRIC_POWER = "symmetric"
    HALF_LINE_POWER = "half-line"
    SYMMETRIC_BOX = "symmetric-box"
    HALF_LINE_BOX = "half-line-box"

    @property
    def is_box(self) -> bool:
        return self in (Family.SYMMETRIC_BOX, Family.HALF_LINE_BOX)

    @property
    def is_symmetric(self) -> bool:
        return self in (Family.SYMMETRIC_POWER, Family.SYMMETRIC_BOX)


@dataclass(frozen=True)
class PotentialSpec:
    """A power-law or box potential.

    ``SYMMETRIC_POWER`` is ``a |x|**b`` on the whole line, ``HALF_LINE_POWER``
    is ``a x**b`` for ``x >= 0`` with a hard wall at the origin.  The box
    families are flat on ``[-A, A]`` or ``[0, A]``.
    """

    family: Family
    b: int | None = None
    a: float = COUPLING
    half_width: float = 1.0

    def __post_init__(self):
        if self.family.is_box:
            if not self.half_width > 0:
                raise ValueError(f"box half-width must be positive, got {self.half_width}")
        else:
            if self.b is None or int(self.b) != self.b or self.b < 1:
                raise ValueError(f"power exponent b must be a positive integer, got {self.b!r}")
            if not self.a > 0:
                raise ValueError(f"coupling must be positive, got {self.a}")

    @property
    def is_box(self) -> bool:
        return self.family.is_box

    @property
    def is_symmetric(self) -> bool:
        return self.family.is_symmetric

    @property
    def label(self) -> str:
        if self.is_box:
            return self.family.value
        return f"{self.family.value}(b={self.b})"

    def evaluate(self, x):
        """Potential energy at ``x``; ``WALL`` where the particle is excluded."""
        x = np.asarray(x, dtype=float)
        if self.family is Family.SYMMETRIC_POWER:
            out = self.a * np.abs(x) ** self.b
        elif self.family is Family.HALF_LINE_POWER:
            out = np.where(x >= 0, self.a * np.abs(x) ** self.b, WALL)
        elif self.family is Family.SYMMETRIC_BOX:
            out = np.where(np.abs(x) <= self.half_width, 0.0, WALL)
        else:
            out = np.where((x >= 0) & (x <= self.half_width), 0.0, WALL)
        return float(out) if out.ndim == 0 else out

    def __call__(self, x):
        return self.evaluate(x)


def make_potential(family: Family | str, b: int | None = None, *, half_width: float = 1.0) -> PotentialSpec:
    """Build a potential of the given family.

    >>> make_potential("symmetric", 2).evaluate(-1.5)
    2.25
    """
    family = Family(family)
    if family.is_box:
        return PotentialSpec(family, None, half_width=half_width)
    return PotentialSpec(family, b)


@dataclass(frozen=True)
class Frame:
    """Scales that make position and momentum dimensionless for one energy."""

    x_max: float
    p_max: float
    energy: float

    def X(self, x):
        return np.asarray(x) / self.x_max

    def P(self, p):
        return np.asarray(p) / self.p_max


def _check_energy(energy: float) -> float:
    energy = float(energy)
    if not energy > 0 or not math.isfinite(energy):
        raise ValueError(f"energy must be positive and finite, got {energy}")
    return energy


def turning_point(spec: PotentialSpec, energy: float) -> float:
    """Classical return point x_max > 0 with U(x_max) = E."""
    energy = _check_energy(energy)
    if spec.is_box:
        return float(spec.half_width)
    return (energy / spec.a) ** (1.0 / spec.b)


def dimensionless_frame(spec: PotentialSpec, energy: float) -> Frame:
    energy = _check_energy(energy)
    return Frame(
        x_max=turning_point(spec, energy),
        p_max=math.sqrt(2.0 * MASS * energy),
        energy=energy,
    )
