"""Parameter sweeps, figure data and oracle self-checks.

Rows are computed per (family, b) group, optionally on a thread pool, and
merged in a fixed order so serialised output does not depend on the
schedule.  Numbers are written with 12 significant digits.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import oracles
from .classical_moments import classical_moment_closed_form, classical_moments
from .eigensolver import DEFAULT_C_LAMBDA, DEFAULT_POINTS, EigensolverError, Spectrum, max_states, solve
from .model import Family, PotentialSpec, dimensionless_frame, make_potential
from .quantum_moments import quantum_moments
from .susy import partner_uncertainty_sweep

B_CEILING = 16
B_VALIDATED_RANGE = 10
SIGNIFICANT_DIGITS = 12


class OutputFormat(str, enum.Enum):
    CSV = "csv"
    JSON = "json"


class ConfigError(ValueError):
    pass


class SweepError(RuntimeError):
    """A solver failure, tagged with the row that triggered it."""


@dataclass(frozen=True)
class SweepConfig:
    families: tuple[Family, ...]
    b_values: tuple[int, ...]
    n_values: tuple[int, ...]
    points: int = DEFAULT_POINTS
    c_lambda: float = DEFAULT_C_LAMBDA
    out: Path | None = None
    format: OutputFormat = OutputFormat.CSV
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "families", tuple(Family(f) for f in self.families))
        object.__setattr__(self, "format", OutputFormat(self.format))
        if not self.families:
            raise ConfigError("no potential family given")
        if not self.n_values or min(self.n_values) < 0:
            raise ConfigError("n range must be non-empty and non-negative")
        needs_b = any(not f.is_box for f in self.families)
        if needs_b and not self.b_values:
            raise ConfigError("b range must be non-empty")
        if self.b_values and (min(self.b_values) < 1 or max(self.b_values) > B_CEILING):
            raise ConfigError(f"b must lie in 1..{B_CEILING}")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if self.b_values and max(self.b_values) > B_VALIDATED_RANGE:
            warnings.warn(
                f"b > {B_VALIDATED_RANGE}: states crowd towards the walls of a box-like well; "
                "check convergence by raising --points",
                stacklevel=2,
            )


@dataclass(frozen=True)
class ReportRow:
    family: str
    b: int | None
    n: int
    E: float
    x_max: float
    p_max: float
    q_x_mean: float
    q_x2: float
    q_p2: float
    q_product: float
    c_x_mean: float
    c_x2: float
    c_p2: float
    c_product: float
    abs_gap: float


COLUMNS = tuple(f.name for f in fields(ReportRow))


def _groups(config: SweepConfig) -> list[PotentialSpec]:
    specs = []
    for family in config.families:
        if family.is_box:
            specs.append(make_potential(family))
        else:
            specs.extend(make_potential(family, b) for b in config.b_values)
    return specs


def row_for_state(spec: PotentialSpec, spectrum: Spectrum, n: int) -> ReportRow:
    energy = float(spectrum.energies[n])
    q = quantum_moments(spectrum, n)
    c = classical_moments(spec, energy)
    return ReportRow(
        family=spec.family.value,
        b=spec.b,
        n=n,
        E=energy,
        x_max=q.frame.x_max,
        p_max=q.frame.p_max,
        q_x_mean=q.x_mean,
        q_x2=q.x2,
        q_p2=q.p2,
        q_product=q.product,
        c_x_mean=c.x_mean,
        c_x2=c.x2,
        c_p2=c.p2,
        c_product=c.product,
        abs_gap=abs(q.product - c.product),
    )


def _rows_for_spec(spec: PotentialSpec, config: SweepConfig) -> list[ReportRow]:
    n_values = sorted(set(config.n_values))
    try:
        spectrum = solve(spec, n_values[-1] + 1, config.points, config.c_lambda)
        return [row_for_state(spec, spectrum, n) for n in n_values]
    except (EigensolverError, ArithmeticError, RuntimeError) as exc:
        raise SweepError(f"{spec.label}, n <= {n_values[-1]}: {exc}") from exc


def run_sweep(config: SweepConfig) -> list[ReportRow]:
    """One row per (family, b, n), ordered by family, b, n."""
    specs = _groups(config)
    if config.workers == 1:
        groups = [_rows_for_spec(s, config) for s in specs]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            groups = list(pool.map(lambda s: _rows_for_spec(s, config), specs))
    return [row for group in groups for row in group]


# -- serialisation ---------------------------------------------------------


def format_number(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return f"{float(value):.{SIGNIFICANT_DIGITS}g}"


def _json_value(value):
    if value is None or isinstance(value, (str, int)):
        return value
    return float(format_number(value))


def render_table(columns: Sequence[str], records: Iterable[Sequence], fmt: OutputFormat | str) -> str:
    """CSV (LF line endings, header always present) or a JSON array of objects."""
    fmt = OutputFormat(fmt)
    records = list(records)
    if fmt is OutputFormat.CSV:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for rec in records:
            writer.writerow([v if isinstance(v, str) else format_number(v) for v in rec])
        return buf.getvalue()
    objects = [{c: _json_value(v) for c, v in zip(columns, rec)} for rec in records]
    return json.dumps(objects, indent=2) + "\n"


def render_rows(rows: Iterable[ReportRow], fmt: OutputFormat | str = OutputFormat.CSV) -> str:
    return render_table(COLUMNS, (tuple(asdict(r).values()) for r in rows), fmt)


def write_text(text: str, path: Path | None) -> None:
    if path is None:
        print(text, end="")
        return
    Path(path).write_text(text, encoding="utf-8", newline="\n")


# -- figure data -----------------------------------------------------------


class FigureId(str, enum.Enum):
    F1A = "F1a"
    F1B = "F1b"
    F1C = "F1c"
    F1D = "F1d"
    F2A = "F2a"
    F2B = "F2b"
    F2C = "F2c"
    F2D = "F2d"
    F3A = "F3a"
    F3B = "F3b"
    SUPP = "SUPP"


_PANEL_N = {"a": 0, "b": 1, "c": 2, "d": 10}
F3_STATES = 26


@dataclass(frozen=True)
class FigureData:
    figure_id: FigureId
    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)

    def render(self, fmt: OutputFormat | str = OutputFormat.CSV) -> str:
        return render_table(self.columns, self.rows, fmt)


def emit_figure_data(
    figure_id: FigureId | str,
    points: int = DEFAULT_POINTS,
    c_lambda: float = DEFAULT_C_LAMBDA,
    *,
    workers: int = 1,
) -> FigureData:
    """Classical and quantum series on the axes of one figure panel.

    F1*/F2*: product against b = 1..10 for the symmetric / half-line family
    at n = 0, 1, 2, 10 (panels a-d).  F3a: <X^2> against n = 0..25 for |x|;
    F3b: the same without the ground state.  SUPP: partner products against
    b = 1..4 for levels 0..2.
    """
    figure_id = FigureId(figure_id)
    name = figure_id.value
    if name.startswith(("F1", "F2")):
        family = Family.SYMMETRIC_POWER if name.startswith("F1") else Family.HALF_LINE_POWER
        n = _PANEL_N[name[-1]]
        config = SweepConfig((family,), tuple(range(1, B_VALIDATED_RANGE + 1)), (n,), points, c_lambda, workers=workers)
        rows = [(r.b, r.c_product, r.q_product) for r in run_sweep(config)]
        return FigureData(figure_id, ("b", "classical", "quantum"), rows)
    if name.startswith("F3"):
        spec = make_potential(Family.SYMMETRIC_POWER, 1)
        spectrum = solve(spec, F3_STATES, points, c_lambda)
        classical = classical_moment_closed_form(1, Family.SYMMETRIC_POWER, 2)
        start = 0 if figure_id is FigureId.F3A else 1
        rows = [(n, classical, quantum_moments(spectrum, n).x2) for n in range(start, F3_STATES)]
        return FigureData(figure_id, ("n", "classical", "quantum"), rows)
    records = partner_uncertainty_sweep([1, 2, 3, 4], levels=3, points=points, c_lambda=c_lambda)
    b_of = {f"partner(b={b})": b for b in (1, 2, 3, 4)}
    rows = [(b_of[r.potential], r.n, r.product_cl, r.product_qm) for r in records]
    return FigureData(figure_id, ("b", "level", "classical", "quantum"), rows)


# -- oracle self-check -----------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    delta: float
    tolerance: float
    note: str = ""

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.delta)) and self.delta <= self.tolerance


def _max_rel(a, b) -> float:
    a, b = np.asarray(a, float), np.asarray(b, float)
    return float(np.max(np.abs(a - b) / np.abs(b)))


def _guarded(name: str, tolerance: float, compute) -> CheckResult:
    try:
        delta, note = compute()
    except (EigensolverError, ArithmeticError, RuntimeError, ValueError) as exc:
        return CheckResult(name, math.inf, tolerance, f"error: {exc}")
    return CheckResult(name, delta, tolerance, note)


def oracle_check(points: int = DEFAULT_POINTS, c_lambda: float = DEFAULT_C_LAMBDA) -> list[CheckResult]:
    """Analytic references against the numerical modules."""
    checks = []

    def beta_vs_quadrature():
        worst = 0.0
        for family in (Family.SYMMETRIC_POWER, Family.HALF_LINE_POWER):
            for b in range(1, 11):
                m = classical_moments(make_potential(family, b), 1.0)
                for k, val in ((1, m.x_mean), (2, m.x2), (4, m.x4)):
                    worst = max(worst, abs(val - classical_moment_closed_form(b, family, k)))
                worst = max(worst, abs(m.p2 - b / (b + 2)))
        return worst, "classical <X>, <X^2>, <X^4>, <P^2>; b = 1..10"

    checks.append(_guarded("beta closed form vs tanh-sinh", 1e-10, beta_vs_quadrature))

    # coarse grids cannot carry every requested state; check what they can
    resolvable = max_states(points)

    def spectrum_check(family, b, reference, requested):
        def run():
            count = min(requested, resolvable)
            spectrum = solve(make_potential(family, b), count, points, c_lambda)
            return _max_rel(spectrum.energies, reference(count)), f"n = 0..{count - 1}, relative"

        return run

    checks.append(_guarded("airy zeros vs bouncing-ball spectrum", 1e-3,
                           spectrum_check(Family.HALF_LINE_POWER, 1, oracles.bouncing_energies, 11)))
    checks.append(_guarded("airy zeros vs |x| spectrum", 1e-3,
                           spectrum_check(Family.SYMMETRIC_POWER, 1, oracles.linear_symmetric_energies, 11)))
    checks.append(_guarded("oscillator spectrum", 1e-4,
                           spectrum_check(Family.SYMMETRIC_POWER, 2, oracles.harmonic_energies, 11)))

    def box_spectrum():
        worst = 0.0
        for family in (Family.SYMMETRIC_BOX, Family.HALF_LINE_BOX):
            count = min(10, resolvable)
            spectrum = solve(make_potential(family), count, points, c_lambda)
            exact = [oracles.box_energy(n + 1, family) for n in range(count)]
            worst = max(worst, _max_rel(spectrum.energies, exact))
        return worst, f"n = 1..{count}, relative"

    checks.append(_guarded("box spectrum", 1e-3, box_spectrum))

    def half_moments(k, parity):
        def run():
            worst = 0.0
            for n in range(parity, 21, 2) if parity is not None else range(0, 11):
                closed = oracles.half_oscillator_moment(n, k).value
                quad = oracles.half_oscillator_moment(n, k, oracles.Method.QUADRATURE).value
                worst = max(worst, abs(closed - quad))
            return worst, "closed form vs quadrature"

        return run

    checks.append(_guarded("half wave <X^4>, n <= 10", 1e-10, half_moments(4, None)))
    checks.append(_guarded("half wave odd <X>, n <= 20", 1e-10, half_moments(1, 1)))

    def erratum():
        ratio = oracles.even_first_moment_discrepancy(0)
        return abs(ratio - 2.0), f"printed even <X> / quadrature at n = 0: {ratio:.6f} (erratum, expected 2(2n+1)/(4n+1))"

    checks.append(_guarded("even <X> erratum ratio", 1e-6, erratum))

    def half_oscillator_numeric():
        spectrum = solve(make_potential(Family.HALF_LINE_POWER, 2), 1, points, c_lambda)
        q = quantum_moments(spectrum, 0)
        exact = oracles.half_line_oscillator_moment(0, 1).value
        return abs(q.x_mean - exact), f"<X>_0 = {q.x_mean:.6f} vs 2/sqrt(3 pi)"

    checks.append(_guarded("half-line oscillator <X>_0", 5e-4, half_oscillator_numeric))

    def frame_scaling():
        spec = make_potential(Family.SYMMETRIC_POWER, 3)
        a, b = classical_moments(spec, 1.0), classical_moments(spec, 2.0)
        frame = dimensionless_frame(spec, 2.0)
        return abs(a.product - b.product), f"x_max(E=2) = {frame.x_max:.6f}"

    checks.append(_guarded("classical products independent of E", 1e-12, frame_scaling))
    return checks


def render_checks(checks: Sequence[CheckResult]) -> str:
    width = max(len(c.name) for c in checks)
    lines = []
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        lines.append(f"{status}  {c.name:<{width}}  delta={c.delta:.3e}  tol={c.tolerance:.1e}  {c.note}")
    failed = sum(not c.passed for c in checks)
    lines.append(f"{len(checks) - failed}/{len(checks)} checks passed")
    return "\n".join(lines) + "\n"
