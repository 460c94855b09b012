import json
import math

import pytest

from dimless_uncertainty import report
from dimless_uncertainty.eigensolver import EigensolverError
from dimless_uncertainty.model import Family
from dimless_uncertainty.report import ConfigError, SweepConfig, run_sweep

HEADER = "family,b,n,E,x_max,p_max,q_x_mean,q_x2,q_p2,q_product,c_x_mean,c_x2,c_p2,c_product,abs_gap"


@pytest.fixture(scope="module")
def n10_rows():
    config = SweepConfig((Family.SYMMETRIC_POWER, Family.HALF_LINE_POWER), tuple(range(1, 11)), (0, 10))
    return run_sweep(config)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(families=()),
        dict(n_values=()),
        dict(n_values=(-1,)),
        dict(b_values=()),
        dict(b_values=(0, 1)),
        dict(b_values=(17,)),
        dict(workers=0),
    ],
)
def test_config_validation(kwargs):
    args = dict(families=("symmetric",), b_values=(1, 2), n_values=(0,)) | kwargs
    with pytest.raises(ConfigError):
        SweepConfig(**args)


def test_large_b_warns():
    with pytest.warns(UserWarning, match="b > 10"):
        SweepConfig(("symmetric",), (12,), (0,))


def test_box_family_needs_no_b():
    rows = run_sweep(SweepConfig(("symmetric-box",), (), (0, 1)))
    assert [r.b for r in rows] == [None, None]
    assert rows[0].q_product == pytest.approx(1 / 3 - 2 / math.pi**2, abs=5e-4)
    assert rows[0].c_product == pytest.approx(1 / 3, abs=1e-12)


def test_symmetric_sweep_oscillator_row(n10_rows):
    row = next(r for r in n10_rows if r.family == "symmetric" and r.b == 2 and r.n == 0)
    assert row.q_product == pytest.approx(0.25, abs=1e-4)
    assert row.c_product == pytest.approx(0.25, abs=1e-8)


def test_half_line_sweep_bouncing_row(n10_rows):
    row = next(r for r in n10_rows if r.family == "half-line" and r.b == 1 and r.n == 0)
    assert row.q_product == pytest.approx(4 / 135, abs=2e-4)
    assert row.c_product == pytest.approx(4 / 135, abs=2e-4)


def test_large_n_gap(n10_rows):
    for row in n10_rows:
        if row.n == 10:
            assert row.abs_gap <= 0.02


def test_rows_ordered_and_consistent(n10_rows):
    keys = [(r.family, r.b, r.n) for r in n10_rows]
    assert keys == sorted(keys, key=lambda k: (k[0] != "symmetric", k[1], k[2]))
    for r in n10_rows:
        assert r.abs_gap == abs(r.q_product - r.c_product)
        assert r.E == pytest.approx(r.p_max**2 / 2)


def test_parallel_output_identical():
    base = dict(families=("symmetric", "half-line"), b_values=(1, 3, 5, 7), n_values=(0, 2))
    serial = report.render_rows(run_sweep(SweepConfig(**base)))
    again = report.render_rows(run_sweep(SweepConfig(**base)))
    threaded = report.render_rows(run_sweep(SweepConfig(**base, workers=4)))
    assert serial == again == threaded


def test_solver_failure_carries_row_context(monkeypatch):
    def boom(*args, **kwargs):
        raise EigensolverError("synthetic failure")

    monkeypatch.setattr(report, "solve", boom)
    with pytest.raises(report.SweepError, match=r"symmetric\(b=3\)"):
        run_sweep(SweepConfig(("symmetric",), (3,), (0,)))


def test_csv_layout():
    rows = run_sweep(SweepConfig(("symmetric",), (2,), (0, 1)))
    text = report.render_rows(rows, "csv")
    lines = text.split("\n")
    assert lines[0] == HEADER
    assert "\r" not in text and text.endswith("\n") and len(lines) == 4
    fields = lines[1].split(",")
    assert fields[:3] == ["symmetric", "2", "0"]
    assert float(fields[3]) == pytest.approx(rows[0].E, rel=1e-11)
    assert len(fields[3].replace(".", "").lstrip("0")) <= 12


def test_json_mirrors_csv():
    rows = run_sweep(SweepConfig(("half-line-box",), (), (0,)))
    data = json.loads(report.render_rows(rows, "json"))
    assert list(data[0]) == HEADER.split(",")
    assert data[0]["b"] is None and data[0]["family"] == "half-line-box"
    assert data[0]["q_product"] == float(report.format_number(rows[0].q_product))


def test_number_format():
    assert report.format_number(1 / 3) == "0.333333333333"
    assert report.format_number(3) == "3"
    assert report.format_number(None) == ""
    assert report.format_number(1.5e-20) == "1.5e-20"


def test_figure_f1b_and_f2():
    f1b = report.emit_figure_data("F1b")
    assert f1b.columns == ("b", "classical", "quantum") and len(f1b.rows) == 10
    b2 = dict((r[0], r) for r in f1b.rows)[2]
    assert b2[2] == pytest.approx(0.25, abs=1e-4)
    f2a = report.emit_figure_data("F2a")
    assert f2a.rows[0][1] == pytest.approx(4 / 135, abs=1e-8)


def test_figure_f3():
    f3a = report.emit_figure_data("F3a")
    assert [r[0] for r in f3a.rows] == list(range(26))
    assert f3a.rows[0][2] == pytest.approx(0.72, abs=0.01)
    assert f3a.rows[0][1] == pytest.approx(8 / 15, abs=1e-8)
    f3b = report.emit_figure_data("F3b")
    assert f3b.rows[0][0] == 1
    for n, _, quantum in f3b.rows:
        if n % 2:
            assert quantum == pytest.approx(8 / 15, abs=1e-3)


def test_figure_supp():
    supp = report.emit_figure_data("SUPP")
    assert supp.columns == ("b", "level", "classical", "quantum")
    assert [(r[0], r[1]) for r in supp.rows] == [(b, n) for b in (1, 2, 3, 4) for n in range(3)]
    # levels separate: products grow with the level for every b
    for b in (1, 2, 3, 4):
        q = [r[3] for r in supp.rows if r[0] == b]
        assert q[0] < q[1] < q[2]


def test_unknown_figure():
    with pytest.raises(ValueError):
        report.emit_figure_data("F9z")


def test_oracle_check_passes():
    checks = report.oracle_check()
    assert all(c.passed for c in checks)
    table = report.render_checks(checks)
    assert "erratum" in table and "2.000000" in table
    assert table.rstrip().endswith(f"{len(checks)}/{len(checks)} checks passed")


def test_oracle_check_coarse_grid_fails_with_deltas():
    checks = {c.name: c for c in report.oracle_check(points=101)}
    eigen = [c for name, c in checks.items() if "spectrum" in name]
    assert eigen and all(not c.passed and math.isfinite(c.delta) for c in eigen)
    assert checks["beta closed form vs tanh-sinh"].passed
