"""Supersymmetric partner potentials built from a numerical ground state.

With hbar = m = 1 the Hamiltonian factorises as H - E_0 = A^+ A with
superpotential W = -psi_0' / (sqrt(2) psi_0), so that

    V_1 - E_0 = W**2 - W' / sqrt(2),   V_2 - E_0 = W**2 + W' / sqrt(2).

The partner spectrum is then the base spectrum without its ground level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import interpolate, optimize

from .eigensolver import (
    DEFAULT_C_LAMBDA,
    DEFAULT_POINTS,
    Grid,
    Spectrum,
    assemble_hamiltonian,
    solve,
    solve_on_grid,
    solve_spectrum,
)
from .model import HBAR, MASS, Family, Frame, PotentialSpec, make_potential
from .quantum_moments import MomentSet, UncertaintyRecord, quantum_moments

MASK_THRESHOLD = 1e-8
TAIL_FIT_POINTS = 10
CLASSICAL_NODES = 4000
# d/dx prefactor hbar / sqrt(2m) in the factorisation
_SCALE = HBAR / math.sqrt(2.0 * MASS)


class SusyError(RuntimeError):
    pass


@dataclass(frozen=True)
class Superpotential:
    """W sampled on the interior grid points.

    ``valid`` marks points where psi_0 is large enough for the log-derivative
    to be trusted; elsewhere W is extended linearly from the adjacent valid
    points.
    """

    grid: Grid
    values: np.ndarray
    valid: np.ndarray
    ground_energy: float

    @property
    def x(self) -> np.ndarray:
        return self.grid.interior

    def derivative(self) -> np.ndarray:
        return np.gradient(self.values, self.grid.dx)


@dataclass(frozen=True)
class PartnerPotential:
    base: PotentialSpec
    superpotential: Superpotential
    v1: np.ndarray
    v2: np.ndarray

    @property
    def grid(self) -> Grid:
        return self.superpotential.grid

    @property
    def ground_energy(self) -> float:
        return self.superpotential.ground_energy

    def factorization_residual(self, fraction: float = 1.0) -> float:
        """max |V1 - E0 - (W^2 - W'/sqrt 2)| over resolved points.

        Points whose derivative stencil touches the extrapolated tail are
        skipped, as is the cusp of |x| (b = 1), where W'' jumps and the
        central difference for W' is only first-order accurate.
        """
        w = self.superpotential
        stencil = w.valid.copy()
        stencil[1:-1] &= w.valid[:-2] & w.valid[2:]
        stencil[[0, -1]] = False
        region = central_region(self.grid, fraction) & stencil
        if self.base.is_symmetric and self.base.b == 1:
            region &= np.abs(w.x) > 1.5 * self.grid.dx
        rhs = w.values**2 - _SCALE * w.derivative()
        return float(np.max(np.abs(self.v1 - self.ground_energy - rhs)[region]))

    def shift(self, fraction: float = 0.8) -> tuple[float, float]:
        """Mean and standard deviation of V2 - V1 over the central region."""
        diff = (self.v2 - self.v1)[central_region(self.grid, fraction)]
        return float(diff.mean()), float(diff.std())


def central_region(grid: Grid, fraction: float = 0.8) -> np.ndarray:
    """Interior points inside the central ``fraction`` of the grid extent."""
    x = grid.interior
    lo, hi = grid.x[0], grid.x[-1]
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    return np.abs(x - mid) <= fraction * half


def _extend_linearly(x: np.ndarray, w: np.ndarray, valid: np.ndarray) -> np.ndarray:
    idx = np.flatnonzero(valid)
    first, last = idx[0], idx[-1]
    out = w.copy()
    for edge, sl in ((first, slice(first, first + TAIL_FIT_POINTS)), (last, slice(last - TAIL_FIT_POINTS + 1, last + 1))):
        slope, intercept = np.polyfit(x[sl], w[sl], 1)
        side = np.arange(len(x)) < edge if edge == first else np.arange(len(x)) > edge
        out[side] = slope * x[side] + intercept
    return out


def _log_derivative(psi: np.ndarray, grid: Grid) -> tuple[np.ndarray, np.ndarray]:
    """-(hbar / sqrt(2m)) d(log psi)/dx by central differences, with its mask.

    The log form is exact for Gaussian tails and much less sensitive to
    the stencil error than psi'/psi.
    """
    valid = np.abs(psi) >= MASK_THRESHOLD * np.max(np.abs(psi))
    idx = np.flatnonzero(valid)
    core = psi[idx[0] : idx[-1] + 1]
    if np.any(core <= 0) or len(idx) != idx[-1] - idx[0] + 1:
        raise SusyError("ground state has a node; superpotential needs a nodeless state")
    if len(idx) < 2 * TAIL_FIT_POINTS:
        raise SusyError("too few resolved points in the ground state")
    inner = np.zeros_like(valid)
    inner[1:-1] = valid[1:-1] & valid[:-2] & valid[2:]
    log_psi = np.log(np.where(valid, psi, 1.0))
    w = np.zeros_like(psi)
    w[1:-1] = -_SCALE * (log_psi[2:] - log_psi[:-2]) / (2.0 * grid.dx)
    return w, inner


def superpotential_from_ground_state(
    spectrum: Spectrum, n: int = 0, *, extrapolate: bool = True
) -> Superpotential:
    """W = -(hbar / sqrt(2m)) psi_0' / psi_0 on the interior grid points.

    With ``extrapolate`` (and an analytic base potential) the ground state is
    re-solved at half the spacing and W, E_0 are Richardson-combined.  This
    removes the O(dx^2 W^4) mismatch between the discrete eigenvector and the
    Riccati equation, which otherwise dominates deep in the tails.

    Raises
    ------
    SusyError
        If state ``n`` (normally 0) changes sign where it is significant.
    """
    energy, psi = spectrum.state(n)
    grid = spectrum.grid
    w, valid = _log_derivative(psi, grid)
    if extrapolate and spectrum.spec is not None:
        fine = solve_on_grid(spectrum.spec, grid.refined(), n + 1)
        fine_energy, fine_psi = fine.state(n)
        w_fine, valid_fine = _log_derivative(fine_psi, fine.grid)
        # coarse interior point i sits at fine interior point 2i + 1
        w = (4.0 * w_fine[1::2] - w) / 3.0
        valid = valid & valid_fine[1::2]
        energy = (4.0 * fine_energy - energy) / 3.0
    w = _extend_linearly(grid.interior, w, valid)
    w.setflags(write=False)
    valid.setflags(write=False)
    return Superpotential(grid, w, valid, float(energy))


def partner_potential(spec: PotentialSpec, superpotential: Superpotential) -> PartnerPotential:
    """Tabulate V1 and its partner V2 = W^2 + W'/sqrt(2) + E0 on the grid."""
    w = superpotential
    v1 = spec.evaluate(w.x)
    v2 = w.values**2 + _SCALE * w.derivative() + w.ground_energy
    return PartnerPotential(spec, w, v1, v2)


def partner_spectrum(partner: PartnerPotential, k: int, *, method: str = "lapack") -> Spectrum:
    H = assemble_hamiltonian(partner.v2, partner.grid)
    return solve_spectrum(H, k, partner.grid, method=method, potential=partner.v2)


def turning_points(x: np.ndarray, v: np.ndarray, energy: float) -> tuple[float, float]:
    """Outermost crossings of a tabulated potential with ``energy``.

    Raises
    ------
    SusyError
        If the classically allowed region is not a single interval.
    """
    allowed = v < energy
    idx = np.flatnonzero(allowed)
    if len(idx) == 0:
        raise SusyError("energy lies below the tabulated potential")
    if len(idx) != idx[-1] - idx[0] + 1:
        raise SusyError("classically allowed region is not connected; cannot invert V2")
    if idx[0] == 0 or idx[-1] == len(x) - 1:
        raise SusyError("turning point lies outside the tabulated grid")
    spline = interpolate.CubicSpline(x, v - energy)
    left = optimize.brentq(spline, x[idx[0] - 1], x[idx[0]], xtol=1e-14)
    right = optimize.brentq(spline, x[idx[-1]], x[idx[-1] + 1], xtol=1e-14)
    return float(left), float(right)


def partner_frame(partner: PartnerPotential, energy: float, momentum_scale: str = "energy") -> Frame:
    """Dimensionless frame of a partner level.

    ``momentum_scale="energy"`` uses p_max = sqrt(2 m E), so the constant
    offset of the partner potential shows up in <P^2>.  ``"kinetic"`` uses
    the largest classical momentum sqrt(2 m (E - min V2)).
    """
    left, right = turning_points(partner.grid.interior, partner.v2, energy)
    x_max = max(-left, right) if partner.base.is_symmetric else right
    if momentum_scale == "energy":
        p_max = math.sqrt(2.0 * MASS * energy)
    elif momentum_scale == "kinetic":
        p_max = math.sqrt(2.0 * MASS * (energy - float(np.min(partner.v2))))
    else:
        raise ValueError(f"unknown momentum scale {momentum_scale!r}")
    return Frame(x_max=x_max, p_max=p_max, energy=energy)


def tabulated_classical_moments(
    x: np.ndarray, v: np.ndarray, energy: float, frame: Frame, nodes: int = CLASSICAL_NODES
) -> MomentSet:
    """Classical moments for a tabulated potential.

    The substitution x = c - h cos(theta) between the turning points cancels
    the 1/sqrt(E - V) end-point singularity; the smooth remainder is
    integrated with the midpoint rule in theta.
    """
    left, right = turning_points(x, v, energy)
    spline = interpolate.CubicSpline(x, v)
    c, h = 0.5 * (left + right), 0.5 * (right - left)
    theta = (np.arange(nodes) + 0.5) * math.pi / nodes
    xs = c - h * np.cos(theta)
    gap = energy - spline(xs)
    if np.any(gap <= 0):
        raise SusyError("tabulated potential exceeds the energy between its turning points")
    weight = h * np.sin(theta) / np.sqrt(gap)
    weight /= weight.sum()
    X = xs / frame.x_max
    return MomentSet(
        x_mean=float(np.sum(weight * X)),
        x2=float(np.sum(weight * X**2)),
        x4=float(np.sum(weight * X**4)),
        p_mean=0.0,
        p2=float(np.sum(weight * 2.0 * MASS * gap)) / frame.p_max**2,
        frame=frame,
    )


def build_partner(
    spec: PotentialSpec,
    levels: int,
    points: int = DEFAULT_POINTS,
    c_lambda: float = DEFAULT_C_LAMBDA,
) -> tuple[Spectrum, PartnerPotential, Spectrum]:
    """Base spectrum, partner potential and partner spectrum (``levels`` states)."""
    base = solve(spec, levels + 1, points, c_lambda)
    partner = partner_potential(spec, superpotential_from_ground_state(base))
    return base, partner, partner_spectrum(partner, levels)


def partner_uncertainty_sweep(
    b_list,
    levels: int = 3,
    points: int = DEFAULT_POINTS,
    c_lambda: float = DEFAULT_C_LAMBDA,
    *,
    momentum_scale: str = "energy",
) -> list[UncertaintyRecord]:
    """Quantum and classical products on the partners of ``|x|**b`` potentials."""
    if not 1 <= levels <= 5:
        raise ValueError("levels must lie in 1..5")
    records = []
    for b in b_list:
        spec = make_potential(Family.SYMMETRIC_POWER, b)
        _, partner, spectrum = build_partner(spec, levels, points, c_lambda)
        for n in range(levels):
            energy = float(spectrum.energies[n])
            frame = partner_frame(partner, energy, momentum_scale)
            q = quantum_moments(spectrum, n, frame)
            cl = tabulated_classical_moments(partner.grid.interior, partner.v2, energy, frame)
            records.append(UncertaintyRecord(f"partner(b={b})", n, q, cl))
    return records
