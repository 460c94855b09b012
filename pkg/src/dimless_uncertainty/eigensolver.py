"""Finite-difference Hamiltonians on truncated grids and their low spectra.

The Hamiltonian ``-1/2 d^2/dx^2 + U`` is discretised with the centred
three-point stencil on the interior points of a uniform grid whose end points
carry Dirichlet conditions, giving a real symmetric tridiagonal matrix.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, linalg, optimize

from .model import MASS, HBAR, PotentialSpec, turning_point
from .special import beta

DEFAULT_POINTS = 4001
DEFAULT_C_LAMBDA = 3.0
# WKB decay exponent required between the highest turning point and the grid
# edge; psi**2 at the wall is then ~exp(-2 * 12) of its bulk value.
DEFAULT_TAIL_ACTION = 12.0
MAX_ITERATIONS = 10_000
CONVERGENCE_TOL = 1e-12
MIN_POINTS = 101
STATE_FRACTION = 0.05


class EigensolverError(RuntimeError):
    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class Boundary(str, enum.Enum):
    SYMMETRIC = "symmetric"
    HALF_LINE = "half-line"


@dataclass(frozen=True)
class Grid:
    """Uniform mesh including both Dirichlet end points."""

    x: np.ndarray
    boundary: Boundary
    extent: float
    dx: float = field(init=False)

    def __post_init__(self):
        x = np.array(self.x, dtype=float)
        x.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "dx", float((x[-1] - x[0]) / (len(x) - 1)))

    @property
    def points(self) -> int:
        return len(self.x)

    @property
    def interior(self) -> np.ndarray:
        return self.x[1:-1]

    def refined(self) -> "Grid":
        """Same extent, half the spacing."""
        return Grid(np.linspace(self.x[0], self.x[-1], 2 * self.points - 1), self.boundary, self.extent)


@dataclass(frozen=True)
class Tridiagonal:
    diagonal: np.ndarray
    off_diagonal: np.ndarray

    def toarray(self) -> np.ndarray:
        return (
            np.diag(self.diagonal)
            + np.diag(self.off_diagonal, 1)
            + np.diag(self.off_diagonal, -1)
        )

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diagonal * v
        out[:-1] += self.off_diagonal * v[1:]
        out[1:] += self.off_diagonal * v[:-1]
        return out


@dataclass(frozen=True)
class Spectrum:
    """Lowest eigenpairs on a grid.

    ``states[n]`` holds psi_n on the interior points, normalised so that
    ``sum(psi**2) * dx == 1`` and with its first significant component
    positive.  ``potential`` is U on the interior points.
    """

    energies: np.ndarray
    states: np.ndarray
    grid: Grid
    potential: np.ndarray
    spec: PotentialSpec | None = None

    def __len__(self) -> int:
        return len(self.energies)

    def state(self, n: int) -> tuple[float, np.ndarray]:
        if not 0 <= n < len(self):
            raise IndexError(f"state {n} not in spectrum of {len(self)} states")
        return float(self.energies[n]), self.states[n]


def _check_points(points: int, symmetric: bool) -> None:
    if points < MIN_POINTS:
        raise ValueError(f"need at least {MIN_POINTS} grid points, got {points}")
    if symmetric and points % 2 == 0:
        raise ValueError("symmetric grids need an odd point count so that x = 0 is a node")


def wkb_energy(spec: PotentialSpec, n: int) -> float:
    """Bohr-Sommerfeld estimate of E_n for a power-law potential.

    Exact for the symmetric oscillator; within a few per cent otherwise,
    which is all grid sizing needs.
    """
    b = spec.b
    shape = beta(1.0 / b, 1.5) / b  # integral of sqrt(1 - t**b) over [0, 1]
    if spec.is_symmetric:
        rhs = math.pi * HBAR * (n + 0.5) / (2.0 * math.sqrt(2.0 * MASS) * shape)
    else:
        rhs = math.pi * HBAR * (n + 0.75) / (math.sqrt(2.0 * MASS) * shape)
    return (rhs * spec.a ** (1.0 / b)) ** (2.0 * b / (b + 2.0))


def box_energy(spec: PotentialSpec, n: int) -> float:
    width = 2.0 * spec.half_width if spec.is_symmetric else spec.half_width
    return (n + 1) ** 2 * math.pi**2 * HBAR**2 / (2.0 * MASS * width**2)


def tail_extent(spec: PotentialSpec, energy: float, action: float) -> float:
    """Smallest x beyond the turning point where the WKB tail exponent reaches ``action``."""
    x_t = turning_point(spec, energy)
    scale = x_t * math.sqrt(2.0 * MASS * energy) / HBAR

    def exponent(u):
        val, _ = integrate.quad(lambda s: math.sqrt(s**spec.b - 1.0), 1.0, u)
        return scale * val - action

    hi = 2.0
    while exponent(hi) < 0:
        hi *= 2.0
    return x_t * optimize.brentq(exponent, 1.0, hi, xtol=1e-10)


def grid_extent(spec: PotentialSpec, energy: float, c_lambda: float, tail_action: float | None) -> float:
    extent = c_lambda * turning_point(spec, energy)
    if tail_action is not None:
        extent = max(extent, tail_extent(spec, energy, tail_action))
    return extent


def build_grid(
    spec: PotentialSpec,
    n_max: int,
    points: int = DEFAULT_POINTS,
    c_lambda: float = DEFAULT_C_LAMBDA,
    *,
    energy: float | None = None,
    extent: float | None = None,
    tail_action: float | None = None,
) -> Grid:
    """Uniform grid sized for states up to ``n_max``.

    The extent is ``c_lambda`` times the turning point of an estimate of
    E_{n_max} (WKB unless ``energy`` is given).  ``tail_action`` optionally
    widens it so the WKB tail of the top state has decayed by
    ``exp(-tail_action)`` at the edge.  Box grids end on the walls.
    """
    _check_points(points, spec.is_symmetric)
    if c_lambda < 2:
        raise ValueError(f"c_lambda must be at least 2, got {c_lambda}")
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    if spec.is_box:
        extent = spec.half_width
    elif extent is None:
        if energy is None:
            energy = wkb_energy(spec, n_max)
        extent = grid_extent(spec, energy, c_lambda, tail_action)
    left = -extent if spec.is_symmetric else 0.0
    boundary = Boundary.SYMMETRIC if spec.is_symmetric else Boundary.HALF_LINE
    return Grid(np.linspace(left, extent, points), boundary, float(extent))


def assemble_hamiltonian(potential, grid: Grid) -> Tridiagonal:
    """Centred-difference Hamiltonian on the interior points.

    ``potential`` is a :class:`PotentialSpec` or an array of U values on the
    interior points.
    """
    if isinstance(potential, PotentialSpec):
        u = potential.evaluate(grid.interior)
    else:
        u = np.asarray(potential, dtype=float)
        if u.shape != grid.interior.shape:
            raise ValueError("tabulated potential must match the interior grid")
    kinetic = HBAR**2 / (2.0 * MASS * grid.dx**2)
    diagonal = 2.0 * kinetic + u
    off = np.full(len(u) - 1, -kinetic)
    return Tridiagonal(diagonal, off)


def _sturm_counts(d: np.ndarray, e2: np.ndarray, shifts: np.ndarray) -> np.ndarray:
    """Number of eigenvalues below each shift (LDL^T inertia)."""
    tiny = np.finfo(float).tiny
    q = d[0] - shifts
    count = (q < 0).astype(int)
    for i in range(1, len(d)):
        q = np.where(q == 0.0, -tiny, q)
        q = d[i] - shifts - e2[i - 1] / q
        count += q < 0
    return count


def _bisection_eigenpairs(H: Tridiagonal, k: int, max_iter: int, tol: float):
    d, e = H.diagonal, H.off_diagonal
    radius = np.zeros_like(d)
    radius[:-1] += np.abs(e)
    radius[1:] += np.abs(e)
    lo = np.full(k, np.min(d - radius))
    hi = np.full(k, np.max(d + radius))
    norm = max(abs(lo[0]), abs(hi[0]))
    e2 = e**2
    targets = np.arange(k)
    eps = np.finfo(float).eps
    for _ in range(max_iter):
        width = hi - lo
        active = width > np.maximum(tol * np.maximum(np.abs(lo), np.abs(hi)), 4 * eps * norm)
        if not active.any():
            break
        mid = 0.5 * (lo + hi)
        counts = _sturm_counts(d, e2, mid)
        above = counts >= targets + 1
        hi = np.where(active & above, mid, hi)
        lo = np.where(active & ~above, mid, lo)
    else:
        bad = int(np.argmax(hi - lo > 4 * eps * norm))
        raise EigensolverError(f"bisection did not converge for eigenvalue {bad}", bad)
    values = 0.5 * (lo + hi)

    n = len(d)
    rng = np.random.default_rng(0)
    start = 1.0 + 0.01 * rng.standard_normal(n)
    vectors = np.empty((k, n))
    for j, lam in enumerate(values):
        shift = lam + 8 * eps * norm
        ab = np.zeros((3, n))
        ab[0, 1:] = e
        ab[1] = d - shift
        ab[2, :-1] = e
        v = start / np.linalg.norm(start)
        for _ in range(4):
            v = linalg.solve_banded((1, 1), ab, v)
            v /= np.linalg.norm(v)
        residual = np.linalg.norm(H.matvec(v) - lam * v)
        if residual > 1e-8 * norm:
            raise EigensolverError(f"inverse iteration did not converge for eigenvalue {j}", j)
        vectors[j] = v
    return values, vectors


def max_states(points: int) -> int:
    """Largest state count resolvable on a grid of ``points`` (5% of the interior)."""
    return int(STATE_FRACTION * (points - 2) + 1e-9)


def solve_spectrum(
    H: Tridiagonal,
    k: int,
    grid: Grid,
    *,
    method: str = "lapack",
    max_iter: int = MAX_ITERATIONS,
    tol: float = CONVERGENCE_TOL,
    potential: np.ndarray | None = None,
    spec: PotentialSpec | None = None,
) -> Spectrum:
    """Lowest ``k`` eigenpairs, sorted, grid-normalised and sign-fixed.

    ``method`` is ``"lapack"`` (MRRR via scipy) or ``"bisection"`` (Sturm
    bisection plus inverse iteration, pure numpy).
    """
    n_interior = len(H.diagonal)
    if k < 1:
        raise ValueError("need at least one eigenpair")
    if k > max_states(n_interior + 2):
        raise ValueError(
            f"k={k} exceeds 5% of the {n_interior} interior points; refine the grid"
        )
    if method == "lapack":
        try:
            values, vecs = linalg.eigh_tridiagonal(
                H.diagonal, H.off_diagonal, select="i", select_range=(0, k - 1)
            )
        except linalg.LinAlgError as exc:
            raise EigensolverError(f"tridiagonal eigensolver failed: {exc}") from exc
        vectors = vecs.T.copy()
    elif method == "bisection":
        values, vectors = _bisection_eigenpairs(H, k, max_iter, tol)
    else:
        raise ValueError(f"unknown method {method!r}")

    if np.any(np.diff(values) <= 0):
        bad = int(np.argmax(np.diff(values) <= 0))
        raise EigensolverError(f"eigenvalues {bad} and {bad + 1} are not strictly ordered", bad)

    vectors /= np.sqrt(np.sum(vectors**2, axis=1) * grid.dx)[:, None]
    for v in vectors:
        big = np.abs(v) > 1e-6 * np.max(np.abs(v))
        if v[np.argmax(big)] < 0:
            v *= -1.0
    values.setflags(write=False)
    vectors.setflags(write=False)
    if potential is None:
        potential = H.diagonal - HBAR**2 / (MASS * grid.dx**2)
    return Spectrum(values, vectors, grid, np.asarray(potential), spec)


def solve_on_grid(spec: PotentialSpec, grid: Grid, n_states: int, *, method: str = "lapack") -> Spectrum:
    H = assemble_hamiltonian(spec, grid)
    return solve_spectrum(H, n_states, grid, method=method, potential=spec.evaluate(grid.interior), spec=spec)


def solve(
    spec: PotentialSpec,
    n_states: int,
    points: int = DEFAULT_POINTS,
    c_lambda: float = DEFAULT_C_LAMBDA,
    *,
    tail_action: float | None = DEFAULT_TAIL_ACTION,
    method: str = "lapack",
) -> Spectrum:
    """Solve for the lowest ``n_states`` states of ``spec``.

    The grid is first sized from the WKB estimate of the top energy, then
    resized once from the computed top energy and solved again.
    """
    n_max = n_states - 1
    grid = build_grid(spec, n_max, points, c_lambda, tail_action=tail_action)
    spectrum = solve_on_grid(spec, grid, n_states, method=method)
    if spec.is_box:
        return spectrum
    grid = build_grid(
        spec, n_max, points, c_lambda, energy=float(spectrum.energies[-1]), tail_action=tail_action
    )
    return solve_on_grid(spec, grid, n_states, method=method)


def refine(spectrum: Spectrum, *, method: str = "lapack") -> Spectrum:
    """Re-solve on a grid with the same extent and half the spacing."""
    if spectrum.spec is None:
        raise ValueError("refinement needs the analytic potential")
    return solve_on_grid(spectrum.spec, spectrum.grid.refined(), len(spectrum), method=method)
