"""Acceptance gate: one pass/fail line per criterion at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v`` or directly as a script.
"""

from __future__ import annotations

import math
import sys
import time

import numpy as np
import pytest

from dimless_uncertainty import oracles
from dimless_uncertainty.classical_moments import classical_moments
from dimless_uncertainty.eigensolver import build_grid, solve, solve_on_grid
from dimless_uncertainty.model import make_potential
from dimless_uncertainty.oracles import Method
from dimless_uncertainty.quantum_moments import original_variable_product, quantum_moments, uncertainty_bound
from dimless_uncertainty.susy import build_partner

STATES = range(11)


def _spectrum(family, b=None, count=11):
    spec = make_potential(family) if b is None else make_potential(family, b)
    return solve(spec, count)


def criterion_1():
    start = time.perf_counter()
    s = _spectrum("symmetric", 2)
    q = max(abs(quantum_moments(s, n).product - 0.25) for n in STATES)
    c = max(abs(classical_moments(s.spec, float(s.energies[n])).product - 0.25) for n in STATES)
    elapsed = time.perf_counter() - start
    ok = q <= 1e-4 and c <= 1e-8 and elapsed < 5.0
    return ok, f"oscillator products n=0..10: max|q-1/4|={q:.2e} (tol 1e-4), max|c-1/4|={c:.2e} (tol 1e-8), {elapsed:.2f}s (limit 5s)"


def criterion_2():
    s = _spectrum("half-line", 1)
    target = 4 / 135
    q = max(abs(quantum_moments(s, n).product - target) for n in STATES)
    c = max(abs(classical_moments(s.spec, float(s.energies[n])).product - target) for n in STATES)
    return q <= 2e-4 and c <= 1e-8, f"bouncing-ball products n=0..10: max|q-4/135|={q:.2e} (tol 2e-4), max|c-4/135|={c:.2e} (tol 1e-8)"


def criterion_3():
    worst, limits = 0.0, []
    for family, limit in (("symmetric-box", 1 / 3), ("half-line-box", 1 / 12)):
        s = _spectrum(family, count=50)
        for n in range(1, 11):
            worst = max(worst, abs(quantum_moments(s, n - 1).product - oracles.box_product(n, family)))
        limits.append(abs(quantum_moments(s, 49).product - limit))
    ok = worst <= 5e-4 and max(limits) <= 1e-3
    return ok, (
        f"box products n=1..10 vs closed form: max gap {worst:.2e} (tol 5e-4); "
        f"n=50 vs 1/3, 1/12: {limits[0]:.2e}, {limits[1]:.2e} (tol 1e-3)"
    )


def criterion_4():
    s = _spectrum("half-line", 2, 1)
    m = quantum_moments(s, 0)
    dp = abs(m.product - 0.037793)
    dx = abs(m.x_mean - 2 / math.sqrt(3 * math.pi))
    return dp <= 5e-4 and dx <= 5e-4, f"half oscillator n=0: product {m.product:.6f} (|d|={dp:.2e}), <X>_0 {m.x_mean:.6f} vs 2/sqrt(3pi) (|d|={dx:.2e}), tol 5e-4"


def criterion_5():
    s = _spectrum("symmetric", 1, 26)
    x2 = [quantum_moments(s, n).x2 for n in range(26)]
    ground = abs(x2[0] - 0.72)
    odd = max(abs(x2[n] - 8 / 15) for n in range(1, 26, 2))
    chain = all(x2[n] > x2[n + 2] for n in (0, 2, 4, 6))
    late = max(abs(x2[n] - 8 / 15) for n in range(10, 26, 2))
    ok = ground <= 0.01 and odd <= 1e-3 and chain and late <= 0.01
    return ok, (
        f"|x| potential: <X^2>_0={x2[0]:.4f} (|d-0.72|={ground:.1e}, tol 0.01); odd max|d-8/15|={odd:.1e} (tol 1e-3); "
        f"chain 0>2>4>6>8 {'holds' if chain else 'broken'}; even n>=10 max|d-8/15|={late:.1e} (tol 0.01)"
    )


def criterion_6():
    q, c = 0.0, 0.0
    for family in ("symmetric", "half-line"):
        for b in range(1, 11):
            s = _spectrum(family, b)
            for n in STATES:
                q = max(q, abs(quantum_moments(s, n).p2 - b / (b + 2)))
                c = max(c, abs(classical_moments(s.spec, float(s.energies[n])).p2 - b / (b + 2)))
    return q <= 2e-3 and c <= 1e-8, f"virial <P^2>=b/(b+2), b=1..10, n=0..10: quantum max|d|={q:.2e} (tol 2e-3), classical max|d|={c:.2e} (tol 1e-8)"


def criterion_7():
    s = _spectrum("symmetric", 2, 6)
    osc = max(abs(original_variable_product(s, n) - (n + 0.5) ** 2) for n in range(6))
    lowest = math.inf
    for family in ("symmetric", "half-line"):
        for b in range(1, 11):
            sp = _spectrum(family, b)
            lowest = min(lowest, min(original_variable_product(sp, n) for n in STATES))
    for family in ("symmetric-box", "half-line-box"):
        sp = _spectrum(family)
        lowest = min(lowest, min(original_variable_product(sp, n) for n in STATES))
    bound = uncertainty_bound() - 1e-9
    return osc <= 1e-3 and lowest >= bound, f"(dx)^2(dp)^2 oscillator n=0..5 max|d-(n+1/2)^2|={osc:.2e} (tol 1e-3); min over all states {lowest:.6f} >= 0.25-1e-9"


def criterion_8():
    x4 = max(
        abs(oracles.half_oscillator_moment(n, 4).value - oracles.half_oscillator_moment(n, 4, Method.QUADRATURE).value)
        for n in range(11)
    )
    x1 = max(
        abs(oracles.half_oscillator_moment(n, 1).value - oracles.half_oscillator_moment(n, 1, Method.QUADRATURE).value)
        for n in range(1, 21, 2)
    )
    lim4 = abs(oracles.printed_fourth_moment(50) - 3 / 8)
    lim1 = abs(oracles.printed_first_moment(51) - 2 / math.pi)
    ratio = oracles.even_first_moment_discrepancy(0)
    ok = x4 <= 1e-10 and x1 <= 1e-10 and lim4 <= 0.01 and lim1 <= 0.01 and abs(ratio - 2) <= 1e-6
    return ok, (
        f"half wave closed forms: <X^4> {x4:.1e}, odd <X> {x1:.1e} (tol 1e-10); n=50 limits {lim4:.1e}, {lim1:.1e} (tol 0.01); "
        f"even <X> erratum ratio at n=0 = {ratio:.8f} (expected 2, tol 1e-6)"
    )


def criterion_9():
    s = _spectrum("half-line", 1)
    exact = np.array(oracles.bouncing_energies(11))
    rel = float(np.max(np.abs(s.energies - exact) / exact))
    spec = make_potential("symmetric", 2)
    grid = build_grid(spec, 10, 4001)
    e0 = math.sqrt(2) / 2
    coarse = solve_on_grid(spec, grid, 1).energies[0]
    fine = solve_on_grid(spec, grid.refined(), 1).energies[0]
    factor = abs(coarse - e0) / abs(fine - e0)
    return rel <= 1e-3 and 3.5 <= factor <= 4.5, f"airy energies n=0..10 max rel {rel:.2e} (tol 1e-3); b=2 ground error ratio 4001->8001 points {factor:.3f} (in [3.5, 4.5])"


def criterion_10():
    _, partner, _ = build_partner(make_potential("symmetric", 2), 4)
    mean, std = partner.shift()
    iso = 0.0
    for b in (1, 2, 3, 4):
        base, _, spectrum = build_partner(make_potential("symmetric", b), 4)
        iso = max(iso, float(np.max(np.abs(spectrum.energies[:4] - base.energies[1:5]))))
    return std <= 1e-2 and iso <= 1e-3, f"b=2 partner V2-V1 = {mean:.5f}, std {std:.1e} (tol 1e-2); isospectrality n<=3, b=1..4 max|d| {iso:.1e} (tol 1e-3)"


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
}


def _line(number: int, ok: bool, detail: str) -> str:
    return f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    ok, detail = CRITERIA[number]()
    with capsys.disabled():
        print("\n" + _line(number, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    failures = 0
    for number, check in sorted(CRITERIA.items()):
        ok, detail = check()
        failures += not ok
        print(_line(number, ok, detail))
    sys.exit(1 if failures else 0)
