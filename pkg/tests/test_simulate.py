import json

import pytest

from growthlab.model_core import ModelParams
from growthlab.simulate import (
    PRESETS,
    DriverRule,
    ScenarioConfig,
    effectiveness_series,
    export_trajectory,
    find_breakeven,
    parse_trajectory_csv,
    run_scenario,
    scenario_from_dict,
)

# Golden two-track table for the linear sample-data preset, periods 44-69:
# (t, Y without research, Y with research, effectiveness, A on the research track)
GOLDEN_ROWS = [
    (44, 2102.5, 2057.0, 0.978, 1.02),
    (45, 2203.2, 2157.4, 0.979, 1.02),
    (46, 2306.4, 2260.5, 0.980, 1.02),
    # Y with research at t=47 corrected from a misprint (the printed ratio
    # 0.981 pins it at 2366.3, not 2368.3)
    (47, 2412.2, 2366.3, 0.981, 1.02),
    (48, 2520.6, 2474.9, 0.982, 1.02),
    (49, 2631.5, 2586.2, 0.983, 1.02),
    (50, 2745.0, 2700.4, 0.984, 1.03),
    (51, 2861.1, 2817.4, 0.985, 1.03),
    (52, 2979.8, 2937.2, 0.986, 1.03),
    (53, 3101.1, 3060.0, 0.987, 1.03),
    (54, 3225.1, 3185.6, 0.988, 1.03),
    (55, 3351.7, 3314.1, 0.989, 1.03),
    (56, 3481.0, 3445.7, 0.990, 1.03),
    (57, 3612.9, 3580.2, 0.991, 1.03),
    (58, 3747.5, 3717.7, 0.992, 1.03),
    (59, 3884.8, 3858.3, 0.993, 1.03),
    (60, 4024.8, 4001.9, 0.994, 1.04),
    (61, 4167.5, 4148.7, 0.995, 1.04),
    (62, 4313.0, 4298.5, 0.997, 1.04),
    (63, 4461.2, 4451.6, 0.998, 1.04),
    (64, 4612.1, 4607.8, 0.999, 1.04),
    (65, 4765.8, 4767.3, 1.000, 1.04),
    (66, 4922.3, 4930.0, 1.002, 1.04),
    (67, 5081.5, 5096.0, 1.003, 1.04),
    (68, 5243.6, 5265.3, 1.004, 1.05),
    (69, 5408.5, 5438.0, 1.005, 1.05),
]


@pytest.fixture(scope="module")
def preset_trajectory():
    return run_scenario(PRESETS["appendix7"])


def coincident_config(periods=20):
    return ScenarioConfig(
        periods=periods,
        drivers={
            "P": DriverRule(0.0, 0.0),
            "L": DriverRule(1.0, 1.0),
            "K": DriverRule(1.0, 1.0),
            "H": DriverRule(1.0, 0.002),
        },
        phi_labor=0.0,
        phi_capital=0.0,
        mode="linear",
    )


class TestRunScenario:
    def test_length_and_periods(self, preset_trajectory):
        assert len(preset_trajectory) == 69
        assert [pt.t for pt in preset_trajectory] == list(range(1, 70))

    def test_golden_rows(self, preset_trajectory):
        by_t = {pt.t: pt for pt in preset_trajectory}
        for t, y_base, y_rd, eff, a_rd in GOLDEN_ROWS:
            pt = by_t[t]
            assert pt.y_base == pytest.approx(y_base, abs=0.1), f"y_base at t={t}"
            assert pt.y_rd == pytest.approx(y_rd, abs=0.1), f"y_rd at t={t}"
            assert pt.effectiveness == pytest.approx(eff, abs=0.0005), f"effectiveness at t={t}"
            # the printed A column is rounded to 2 decimals, so the half-ulp
            # boundary (1.025 vs 1.03) must count as inside the tolerance
            assert pt.A_rd == pytest.approx(a_rd, abs=0.005 + 1e-9), f"A at t={t}"

    def test_splits_recorded(self, preset_trajectory):
        pt = preset_trajectory[43]
        assert pt.L_rd == pytest.approx(43.99, abs=0.005)
        assert pt.K_rd == pytest.approx(42.24, abs=0.005)
        assert pt.H == pytest.approx(1.086)

    def test_deterministic(self):
        a = run_scenario(PRESETS["appendix7"])
        b = run_scenario(PRESETS["appendix7"])
        assert a == b

    def test_coincident_tracks(self):
        traj = run_scenario(coincident_config())
        assert all(pt.effectiveness == pytest.approx(1.0, abs=1e-12) for pt in traj)

    def test_effectiveness_monotone(self, preset_trajectory):
        effs = [pt.effectiveness for pt in preset_trajectory]
        assert all(b > a for a, b in zip(effs, effs[1:]))

    def test_track_ordering_around_breakeven(self, preset_trajectory):
        breakeven = find_breakeven(preset_trajectory)
        for pt in preset_trajectory:
            if pt.t < breakeven:
                assert pt.y_rd < pt.y_base
            elif pt.t > breakeven:
                assert pt.y_rd > pt.y_base

    def test_cobb_mode_runs(self):
        config = ScenarioConfig(
            periods=30,
            drivers={
                "P": DriverRule(1.0, 1.0),
                "L": DriverRule(10.0, 1.0),
                "K": DriverRule(10.0, 1.0),
                "H": DriverRule(1.0, 0.05),
            },
            phi_labor=0.001,
            phi_capital=0.04,
            mode="cobb-douglas",
        )
        traj = run_scenario(config)
        assert len(traj) == 30
        assert all(pt.y_base > 0 and pt.y_rd > 0 for pt in traj)

    def test_bad_driver_reports_period(self):
        config = ScenarioConfig(
            periods=5,
            drivers={
                "P": DriverRule(1.0, 0.0),
                "L": DriverRule(2.0, -1.0),  # labor hits zero at t=3
                "K": DriverRule(1.0, 1.0),
                "H": DriverRule(1.0, 0.0),
            },
            phi_labor=0.0,
            phi_capital=0.0,
            mode="linear",
        )
        with pytest.raises(ValueError, match="period 3"):
            run_scenario(config)


class TestBreakeven:
    def test_preset_crosses_at_65(self, preset_trajectory):
        assert find_breakeven(preset_trajectory) == 65

    def test_coincident_is_none(self):
        assert find_breakeven(run_scenario(coincident_config())) is None

    def test_heavier_capital_diversion_is_later(self):
        base = PRESETS["appendix7"]
        heavier = ScenarioConfig(
            periods=200,
            drivers=base.drivers,
            phi_labor=base.phi_labor,
            phi_capital=0.08,
            mode="linear",
        )
        longer = ScenarioConfig(
            periods=200,
            drivers=base.drivers,
            phi_labor=base.phi_labor,
            phi_capital=base.phi_capital,
            mode="linear",
        )
        t_base = find_breakeven(run_scenario(longer))
        t_heavy = find_breakeven(run_scenario(heavier))
        assert t_heavy > t_base

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            find_breakeven([])


class TestEffectivenessSeries:
    def test_matches_points(self, preset_trajectory):
        series = dict(effectiveness_series(preset_trajectory))
        assert series[44] == pytest.approx(0.978, abs=0.0005)
        assert series[53] == pytest.approx(0.987, abs=0.0005)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            effectiveness_series([])


class TestExport:
    def test_csv_shape(self, preset_trajectory):
        content = export_trajectory(preset_trajectory[:1], "csv")
        lines = content.strip().split("\n")
        assert lines[0] == "t,y_base,y_rd,effectiveness,A_rd,L_rd,K_rd,H"
        assert len(lines) == 2

    def test_csv_roundtrip(self, preset_trajectory):
        content = export_trajectory(preset_trajectory, "csv")
        parsed = parse_trajectory_csv(content)
        assert [pt.t for pt in parsed] == [pt.t for pt in preset_trajectory]
        for a, b in zip(parsed, preset_trajectory):
            assert a.effectiveness == pytest.approx(b.effectiveness, rel=1e-12)

    def test_json(self, preset_trajectory):
        doc = json.loads(export_trajectory(preset_trajectory, "json"))
        assert isinstance(doc, list)
        assert set(doc[0]) == {"t", "y_base", "y_rd", "effectiveness", "A_rd", "L_rd", "K_rd", "H"}

    def test_unknown_format(self, preset_trajectory):
        with pytest.raises(ValueError):
            export_trajectory(preset_trajectory, "xml")


class TestScenarioConfigParsing:
    def test_roundtrip(self):
        doc = {
            "periods": 10,
            "drivers": {
                "P": {"initial": 1, "increment": 1},
                "L": {"initial": 1, "increment": 1},
                "K": {"initial": 1, "increment": 1},
                "H": {"initial": 1.0, "increment": 0.002},
            },
            "phi_L": 0.00025,
            "phi_K": 0.04,
            "mode": "linear",
            "alpha": 0.3333,
        }
        config = scenario_from_dict(doc)
        assert config.periods == 10
        assert config.phi_capital == 0.04
        assert config.params == ModelParams()

    def test_all_problems_reported_at_once(self):
        with pytest.raises(ValueError) as err:
            scenario_from_dict({"drivers": {"P": {"initial": 1, "increment": 1}}})
        msg = str(err.value)
        for fragment in ("periods", "phi_L", "phi_K", "driver 'L'", "driver 'K'", "driver 'H'"):
            assert fragment in msg

    def test_invalid_periods(self):
        with pytest.raises(ValueError):
            ScenarioConfig(
                periods=0,
                drivers=PRESETS["appendix7"].drivers,
                phi_labor=0.0,
                phi_capital=0.0,
            )
