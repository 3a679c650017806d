from dataclasses import replace

import numpy as np
import pytest

from safeadmit import (ConfigError, ValidationError, parse_config,
                       scenario_library)
from safeadmit.config import (parse_config_text, serialize_config)


class TestDefaults:
    def test_empty_file_gives_benchmark_defaults(self):
        cfg = parse_config_text("")
        assert cfg.robot.m1 == 1.5 and cfg.robot.m2 == 1.0
        assert cfg.robot.l1 == 0.3 and cfg.robot.l2 == 0.3
        assert cfg.robot.gravity == 9.81
        assert np.allclose(cfg.admittance.k_m, [20.0, 20.0])
        assert np.allclose(cfg.admittance.k_k, [100.0, 100.0])
        assert np.allclose(cfg.ecbf.K_obs, [700.0, 70.0])
        assert cfg.controller.lambda1 == 3.0
        assert cfg.duration == 16.0 and cfg.dt == 1e-3
        # both constraints on by default
        assert cfg.workspace is not None and cfg.obstacle is not None
        assert np.allclose(cfg.workspace.x_max, [0.13, 0.13])
        assert np.allclose(cfg.obstacle.x_obs, [-0.07, 0.07])
        assert cfg.workspace.r == 0.04

    def test_defaults_match_combined_preset(self):
        cfg = parse_config_text("")
        preset = scenario_library()["combined"]
        assert np.array_equal(cfg.workspace.x_min, preset.workspace.x_min)
        assert np.array_equal(cfg.workspace.x_max, preset.workspace.x_max)
        assert cfg.workspace.r == preset.workspace.r
        assert np.array_equal(cfg.obstacle.x_obs, preset.obstacle.x_obs)
        assert np.array_equal(cfg.admittance.k_m, preset.admittance.k_m)
        assert np.array_equal(cfg.admittance.k_b, preset.admittance.k_b)
        assert np.array_equal(cfg.admittance.k_k, preset.admittance.k_k)


class TestParsing:
    def test_overrides(self):
        cfg = parse_config_text("""
[scenario]
name = tweaked
duration = 2.5
dt = 0.002
a1 = 0.5
a2 = 1.5

[admittance]
k_m = 10, 30

[constraints]
set = workspace
x_max = 0.2, 0.2
x_min = -0.2, -0.2
r = 0.05
""")
        assert cfg.name == "tweaked"
        assert cfg.duration == 2.5 and cfg.dt == 0.002
        assert cfg.force_amplitude == (0.5, 1.5)
        assert np.allclose(cfg.admittance.k_m, [10.0, 30.0])
        assert cfg.obstacle is None
        assert np.allclose(cfg.workspace.x_max, [0.2, 0.2])
        assert cfg.workspace.r == 0.05

    def test_constraint_set_none(self):
        cfg = parse_config_text("[constraints]\nset = none\n")
        assert cfg.workspace is None and cfg.obstacle is None

    def test_unknown_section_rejected(self):
        with pytest.raises(ConfigError):
            parse_config_text("[mystery]\nx = 1\n")

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError):
            parse_config_text("[robot]\nmass = 1\n")

    def test_bad_number_rejected(self):
        with pytest.raises(ConfigError):
            parse_config_text("[robot]\nm1 = heavy\n")

    def test_bad_constraint_kind_rejected(self):
        with pytest.raises(ConfigError):
            parse_config_text("[constraints]\nset = everything\n")

    def test_invariant_violation_surfaces(self):
        with pytest.raises(ValidationError, match="k_m must be positive"):
            parse_config_text("[admittance]\nk_m = -1\n")

    def test_malformed_ini_rejected(self):
        with pytest.raises(ConfigError):
            parse_config_text("this is not ini\n")

    def test_missing_file_raises_config_error(self, tmp_path):
        with pytest.raises((ConfigError, OSError)):
            parse_config(tmp_path / "nope.ini")

    def test_booleans(self):
        cfg = parse_config_text("[constraints]\nbypass = yes\nslack = on\n"
                                "[scenario]\nnominal_only = true\n")
        assert cfg.filter_bypass and cfg.slack and cfg.nominal_only
        with pytest.raises(ConfigError):
            parse_config_text("[constraints]\nbypass = maybe\n")

    def test_explicit_admittance_start(self):
        cfg = parse_config_text("[scenario]\nadmittance_start = 0.01, -0.02\n")
        assert cfg.admittance_start == (0.01, -0.02)
        assert parse_config_text("[scenario]\nadmittance_start = auto\n"
                                 ).admittance_start is None


class TestRoundTrip:
    def _assert_round_trips(self, cfg):
        text = serialize_config(cfg)
        reparsed = parse_config_text(text)
        assert serialize_config(reparsed) == text
        assert reparsed.name == cfg.name
        assert reparsed.duration == cfg.duration
        assert reparsed.robot == cfg.robot
        assert reparsed.controller == cfg.controller
        assert np.array_equal(reparsed.admittance.k_m, cfg.admittance.k_m)
        assert (reparsed.workspace is None) == (cfg.workspace is None)
        assert (reparsed.obstacle is None) == (cfg.obstacle is None)

    def test_presets_round_trip(self):
        for cfg in scenario_library().values():
            self._assert_round_trips(cfg)

    def test_random_configs_round_trip(self, rng):
        for _ in range(20):
            base = parse_config_text("")
            cfg = replace(
                base,
                duration=float(rng.uniform(1.0, 20.0)),
                dt=float(rng.choice([1e-3, 2e-3, 5e-4])),
                circle_radius=float(rng.uniform(0.05, 0.2)),
                force_amplitude=(float(rng.uniform(0, 3)), float(rng.uniform(0, 3))),
                filter_bypass=bool(rng.integers(0, 2)),
                slack=bool(rng.integers(0, 2)),
            )
            self._assert_round_trips(cfg)

    def test_file_round_trip(self, tmp_path):
        cfg = scenario_library()["combined"]
        path = tmp_path / "scenario.ini"
        path.write_text(serialize_config(cfg))
        assert serialize_config(parse_config(path)) == serialize_config(cfg)
