import math
from dataclasses import replace

import numpy as np
import pytest

from swetbc import (
    ConfigurationError,
    PhysicalParams,
    State,
    UsageError,
    build_grid,
    init_state,
    preset,
    run,
    run_sweep,
    s_norm,
    time_accumulated_norm,
)
from swetbc.experiments import (
    IC_CASES,
    REFERENCE_EXTREMA,
    REFERENCE_SWEEP,
    SWEEP_C0_GRID,
    SweepSpec,
)


def test_s_norm_zero_and_constant():
    grid = build_grid(1.0, 8)
    params = PhysicalParams(depth=0.1)
    shape = grid.shape
    rest = State(0, np.full(shape, 0.1), np.zeros(shape), np.zeros(shape), np.zeros(shape))
    assert s_norm(rest, grid) == 0.0
    e = 3e-3
    st = State(0, np.full(shape, 0.1 + e), np.zeros(shape), np.zeros(shape), np.full(shape, e))
    assert s_norm(st, grid) == pytest.approx(e * grid.h * (grid.N + 1), rel=1e-13)


def test_s_norm_matches_fsum_oracle_on_production_field():
    # independent accumulation (math.fsum over nodewise squares)
    grid = build_grid(1.0, 400)
    params = PhysicalParams(depth=0.1)
    cfg_ic = preset("c0-sweep").initial_condition()
    st = init_state(grid, params, cfg_ic)
    expected = grid.h * math.sqrt(math.fsum(v * v for v in st.eta.ravel().tolist()))
    assert s_norm(st, grid) == pytest.approx(expected, rel=1e-12)


def test_time_accumulated_norm_closed_forms():
    assert time_accumulated_norm(np.zeros(11), dt=0.1, n_steps=10) == 0.0
    s, dt, n = 0.37, 0.005, 200
    series = np.full(n + 1, s)
    assert time_accumulated_norm(series, dt, n) == pytest.approx(s * math.sqrt(dt * (n + 1)), rel=1e-14)
    with pytest.raises(UsageError):
        time_accumulated_norm(series, dt, n_steps=400)


def test_preset_fig3():
    cfg = preset("fig3-v")
    assert (cfg.L, cfg.N, cfg.dt, cfg.T) == (10.0, 1000, 0.05, 100.0)
    assert (cfg.depth, cfg.c0, cfg.c1) == (1.0, 0.9, 0.01)
    assert cfg.center == (5.0, 5.0) and cfg.u0 == (0.0, 0.0)
    assert cfg.case == "v"
    assert cfg.snapshot_steps == (0, 500, 1000, 1500, 2000)
    assert (cfg.rho, cfg.mu, cfg.g) == (1e12, 1e3, 9.8e-3)


def test_preset_energy_study_resolutions():
    cfg = preset("energy-study-iii-N500")
    assert cfg.N == 500 and cfg.case == "iii"
    assert cfg.L == 1.0 and cfg.depth == 0.1 and cfg.c1 == 1e-3
    grid = build_grid(cfg.L, cfg.N)
    assert cfg.resolve_dt(grid) == pytest.approx(2.0 / 500, rel=1e-15)
    assert preset("energy-study-ii").N == 400


def test_preset_override_recomputes_dt():
    cfg = replace(preset("energy-study-v"), N=50)
    grid = build_grid(cfg.L, cfg.N)
    assert cfg.resolve_dt(grid) == pytest.approx(2.0 / 50, rel=1e-15)


def test_preset_c0_sweep():
    cfg = preset("c0-sweep")
    assert cfg.sweep_c0 == SWEEP_C0_GRID
    assert cfg.sweep_cases == ("I", "II", "III", "IV", "V", "VI")
    assert cfg.case == "v" and cfg.dt == 0.005 and cfg.N == 400


def test_preset_unknown_lists_available():
    with pytest.raises(ConfigurationError) as err:
        preset("fig9-z")
    msg = str(err.value)
    assert "fig3-<case>" in msg and "c0-sweep" in msg


def test_ic_cases_table():
    assert set(IC_CASES) == {"I", "II", "III", "IV", "V", "VI"}
    assert IC_CASES["II"][0] == 200.0
    assert IC_CASES["IV"][1] == (0.0, 0.0)
    assert IC_CASES["V"][2] == (1e-4, 1e-4)
    assert IC_CASES["VI"][2] == (1e-4, -1e-4)


def test_reference_tables_spot_values():
    assert REFERENCE_SWEEP["I"][0.9] == 7.4792
    assert REFERENCE_SWEEP["I"][0.1] == 12.17
    assert REFERENCE_SWEEP["IV"][0.7] == 2.66
    assert REFERENCE_SWEEP["V"][1.5] == 14.66
    assert REFERENCE_EXTREMA["v"]["I_h2"][1] == -12.54
    assert REFERENCE_EXTREMA["i"]["I_h4"][1] == -8.59e-4


def test_singleton_sweep_matches_direct_run():
    base = replace(
        preset("c0-sweep"),
        N=24,
        dt="2h",
        T=4.0,
    )
    spec = SweepSpec(base=base, c0_values=(0.9,), cases=("I",))
    result = run_sweep(spec)
    direct = run(spec.cell_config("I", 0.9))
    expected = time_accumulated_norm(direct.s_series, direct.dt, direct.n_steps)
    assert result.value("I", 0.9) == expected
    assert result.status[("I", 0.9)] == "ok"
    assert result.argmin("I") == 0.9
    assert result.n_failed == 0


def test_sweep_cell_failure_is_recorded_not_fatal(tmp_path):
    # an extreme transmission coefficient forces an early dry/blow-up in one
    # cell; the other cell must still complete
    base = replace(preset("c0-sweep"), N=16, dt=0.5, T=20.0)
    spec = SweepSpec(base=base, c0_values=(0.9, 1e7), cases=("I",))
    result = run_sweep(spec)
    assert result.status[("I", 0.9)] == "ok"
    assert result.status[("I", 1e7)].startswith("failed:")
    assert math.isnan(result.value("I", 1e7))
    assert result.n_failed == 1
    assert result.argmin("I") == 0.9

    csv = tmp_path / "sweep.csv"
    result.to_csv(csv)
    lines = csv.read_text().splitlines()
    assert lines[0] == "case,c0,S_total,status"
    assert len(lines) == 3
    assert "failed:" in lines[2]


def test_sweep_parallel_matches_serial():
    base = replace(preset("c0-sweep"), N=16, dt="2h", T=3.0)
    spec = SweepSpec(base=base, c0_values=(0.5, 0.9), cases=("I", "II"))
    serial = run_sweep(spec, jobs=1)
    parallel = run_sweep(spec, jobs=2)
    assert serial.values == parallel.values
    assert serial.status == parallel.status


def test_sweep_spec_validation():
    base = preset("c0-sweep")
    with pytest.raises(ConfigurationError):
        SweepSpec(base=base, c0_values=(), cases=("I",))
    with pytest.raises(ConfigurationError):
        SweepSpec(base=base, c0_values=(-0.1,), cases=("I",))
    with pytest.raises(ConfigurationError):
        SweepSpec(base=base, c0_values=(0.5,), cases=("VII",))
    single = replace(base, sweep_c0=None)
    with pytest.raises(ConfigurationError):
        SweepSpec.from_config(single)


def test_runs_are_bitwise_deterministic():
    cfg = replace(preset("energy-study-iii"), N=20, T=2.0)
    a = run(cfg)
    b = run(cfg)
    np.testing.assert_array_equal(a.s_series, b.s_series)
    assert a.records == b.records
    np.testing.assert_array_equal(a.final_state.phi, b.final_state.phi)
    np.testing.assert_array_equal(a.final_state.u1, b.final_state.u1)


def test_comparison_report_contents():
    base = replace(preset("c0-sweep"), N=16, dt="2h", T=3.0)
    spec = SweepSpec(base=base, c0_values=(0.9,), cases=("I",))
    result = run_sweep(spec)
    report = result.comparison_report()
    assert "case" in report.splitlines()[1]
    assert "argmin[I] = 0.9" in report
    assert "7.4792" in report  # reference column present for known cells
    assert "scaled" in report  # reporting-units conversion is stated
