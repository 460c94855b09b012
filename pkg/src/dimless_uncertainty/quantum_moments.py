"""Dimensionless quantum moments and uncertainty products of grid eigenstates.

Expectation values use the grid weight ``dx`` on interior points (the
Dirichlet end points carry zero), the same weight used to normalise the
eigenvectors.  Integrals run over the whole truncated grid, so the
classically forbidden tails with ``|X| > 1`` are included.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .eigensolver import Grid, Spectrum, refine
from .model import HBAR, MASS, Frame, PotentialSpec, dimensionless_frame

NORM_TOL = 1e-6
ROUTE_TOL = 1e-4


class Route(str, enum.Enum):
    KINETIC = "kinetic"
    DERIVATIVE = "derivative"


class DiscretizationError(RuntimeError):
    """Independent routes to the same moment disagree."""


@dataclass(frozen=True)
class MomentSet:
    """Dimensionless moments of X = x/x_max and P = p/p_max."""

    x_mean: float
    x2: float
    p_mean: float
    p2: float
    frame: Frame
    n: int | None = None
    x4: float | None = None

    @property
    def x_variance(self) -> float:
        return self.x2 - self.x_mean**2

    @property
    def p_variance(self) -> float:
        return self.p2 - self.p_mean**2

    @property
    def product(self) -> float:
        return self.x_variance * self.p_variance


@dataclass(frozen=True)
class UncertaintyRecord:
    """Quantum and classical dispersions of one state of one potential."""

    potential: str
    n: int | None = None
    quantum: MomentSet | None = None
    classical: MomentSet | None = None

    @property
    def product_qm(self) -> float:
        return self.quantum.product

    @property
    def product_cl(self) -> float:
        return self.classical.product


def _norm(psi: np.ndarray, grid: Grid) -> float:
    return float(np.sum(np.abs(psi) ** 2) * grid.dx)


def _check_normalized(psi: np.ndarray, grid: Grid) -> None:
    norm = _norm(psi, grid)
    if not abs(norm - 1.0) <= NORM_TOL:
        raise ValueError(f"state is not normalised on the grid (norm {norm:.3g})")


def position_moment(psi: np.ndarray, grid: Grid, frame: Frame, k: int) -> float:
    """<X**k> = sum (x_i / x_max)**k |psi_i|**2 dx."""
    if k < 1:
        raise ValueError("moment order must be at least 1")
    _check_normalized(psi, grid)
    X = grid.interior / frame.x_max
    return float(np.sum(X**k * np.abs(psi) ** 2) * grid.dx)


def momentum_second_moment(
    energy: float,
    psi: np.ndarray,
    potential,
    grid: Grid,
    frame: Frame,
    route: Route | str = Route.KINETIC,
) -> float:
    """<P**2> in units of p_max**2.

    The kinetic route uses <p**2> = 2m(E - <U>); the derivative route sums
    squared forward differences of psi (end points included as zeros).
    ``potential`` is a spec or the U values on the interior points.
    """
    if not energy > 0:
        raise ValueError(f"energy must be positive, got {energy}")
    _check_normalized(psi, grid)
    route = Route(route)
    if route is Route.KINETIC:
        u = potential.evaluate(grid.interior) if isinstance(potential, PotentialSpec) else np.asarray(potential)
        mean_u = float(np.sum(u * np.abs(psi) ** 2) * grid.dx)
        p2 = 2.0 * MASS * (energy - mean_u)
    else:
        padded = np.concatenate(([0.0], psi, [0.0]))
        p2 = HBAR**2 * float(np.sum(np.abs(np.diff(padded)) ** 2) / grid.dx)
    return p2 / frame.p_max**2


def momentum_first_moment(psi: np.ndarray, grid: Grid, frame: Frame) -> float:
    """<P> from the central-difference momentum operator -i hbar d/dx.

    The operator is Hermitian, so the imaginary part vanishes to rounding
    and only the real part is returned.  Real states give zero.
    """
    _check_normalized(psi, grid)
    padded = np.concatenate(([0.0], psi, [0.0]))
    dpsi = (padded[2:] - padded[:-2]) / (2.0 * grid.dx)
    p = -1j * HBAR * np.sum(np.conj(psi) * dpsi) * grid.dx
    return float(p.real) / frame.p_max


def quantum_moments(
    spectrum: Spectrum,
    n: int,
    frame: Frame | None = None,
    *,
    route: Route | str = Route.KINETIC,
    check_routes: bool = True,
) -> MomentSet:
    """Dimensionless moments of state ``n``.

    ``frame`` defaults to the analytic frame of ``spectrum.spec`` at E_n.
    """
    energy, psi = spectrum.state(n)
    if frame is None:
        frame = dimensionless_frame(spectrum.spec, energy)
    grid = spectrum.grid
    p2 = momentum_second_moment(energy, psi, spectrum.potential, grid, frame, route)
    if check_routes:
        other = Route.DERIVATIVE if Route(route) is Route.KINETIC else Route.KINETIC
        p2_other = momentum_second_moment(energy, psi, spectrum.potential, grid, frame, other)
        if abs(p2 - p2_other) > ROUTE_TOL * abs(p2):
            raise DiscretizationError(
                f"<P^2> routes disagree for state {n}: {p2!r} vs {p2_other!r}"
            )
    return MomentSet(
        x_mean=position_moment(psi, grid, frame, 1),
        x2=position_moment(psi, grid, frame, 2),
        x4=position_moment(psi, grid, frame, 4),
        p_mean=momentum_first_moment(psi, grid, frame),
        p2=p2,
        frame=frame,
        n=n,
    )


def uncertainty_product(
    spectrum: Spectrum,
    n: int,
    frame: Frame | None = None,
    *,
    label: str | None = None,
) -> UncertaintyRecord:
    """Record with the quantum side of (dX)^2 (dP)^2 filled for state ``n``."""
    moments = quantum_moments(spectrum, n, frame)
    if label is None:
        label = spectrum.spec.label if spectrum.spec is not None else "tabulated"
    return UncertaintyRecord(potential=label, n=n, quantum=moments)


def _raw_product(spectrum: Spectrum, n: int) -> float:
    energy, psi = spectrum.state(n)
    weight = psi**2 * spectrum.grid.dx
    x = spectrum.grid.interior
    var_x = np.sum(x**2 * weight) - np.sum(x * weight) ** 2
    p2 = 2.0 * MASS * (energy - np.sum(spectrum.potential * weight))
    return float(var_x * p2)


def original_variable_product(spectrum: Spectrum, n: int, *, extrapolate: bool = True) -> float:
    """(dx)^2 (dp)^2 of state ``n`` in units of hbar^2.

    The grid value carries an O(dx^2) error of either sign.  With
    ``extrapolate`` the state is re-solved at half the spacing and the two
    values Richardson-combined, which removes the leading error term.
    """
    coarse = _raw_product(spectrum, n)
    if not extrapolate:
        return coarse
    fine = _raw_product(refine(spectrum), n)
    return (4.0 * fine - coarse) / 3.0


def uncertainty_bound() -> float:
    return HBAR**2 / 4.0


__all__ = [
    "MomentSet",
    "UncertaintyRecord",
    "Route",
    "DiscretizationError",
    "position_moment",
    "momentum_second_moment",
    "momentum_first_moment",
    "quantum_moments",
    "uncertainty_product",
    "original_variable_product",
    "uncertainty_bound",
]
