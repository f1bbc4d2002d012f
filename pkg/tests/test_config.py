from pathlib import Path

import pytest

from mimosamp import ConfigError, Constant, Derivative, LinearCombo, Tabulated, Translation
from mimosamp.config import (
    ExperimentConfig,
    format_response,
    load_config,
    parse_response,
    resolve,
)

CONFIG_DIR = Path(__file__).resolve().parents[1] / "configs"


class TestResponseGrammar:
    @pytest.mark.parametrize(
        "resp",
        [
            Constant(1 + 0j),
            Constant(-2.5 + 0.25j),
            Derivative(1),
            Derivative(3),
            Translation(0.04558891418064851),
            LinearCombo(((1 + 0j, Constant(1 + 0j)), (1 + 0j, Derivative(1)))),
            LinearCombo(((0.5 - 0.25j, Translation(1.25)), (2 + 0j, Constant(3 + 0j)))),
            Tabulated({-1: 0.5 + 0j, 0: 1 + 0j, 2: -1j}),
        ],
    )
    def test_round_trip(self, resp):
        assert parse_response(format_response(resp)) == resp

    def test_bad_kind_rejected(self):
        with pytest.raises(ConfigError):
            parse_response("wavelet 3")

    def test_bad_weight_rejected(self):
        with pytest.raises(ConfigError):
            parse_response("abc*deriv 1")


class TestLoadConfig:
    def test_preset_file(self):
        cfg = load_config(CONFIG_DIR / "s22t.cfg")
        assert cfg.scheme == "s22t"
        assert (cfg.lo, cfg.hi) == (-25, 25)
        assert cfg.signals == "bl51"
        assert cfg.mode == "pseudoinverse"
        assert cfg.trials == 10
        exp = resolve(cfg)
        assert exp.plan.total_samples == 102

    def test_custom_file_builds_system_and_signals(self):
        cfg = load_config(CONFIG_DIR / "custom.cfg")
        assert cfg.scheme == "custom"
        assert cfg.custom_outputs == 2
        assert len(cfg.custom_signals) == 2
        assert cfg.custom_signals[0].coeff(0) == 1
        exp = resolve(cfg)
        assert exp.plan.outputs == 2
        assert exp.inverse_table is None

    def test_missing_file(self):
        with pytest.raises(ConfigError):
            load_config(CONFIG_DIR / "does_not_exist.cfg")

    def test_unknown_scheme_rejected(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("[plan]\nscheme = s99q\n")
        with pytest.raises(ConfigError):
            load_config(path)

    def test_custom_without_system_section_rejected(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("[plan]\nscheme = custom\n")
        with pytest.raises(ConfigError):
            load_config(path)

    def test_bad_value_reports_section_and_key(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("[plan]\nscheme = s22d\nband = wide\n")
        with pytest.raises(ConfigError, match=r"\[plan\] band"):
            load_config(path)


class TestResolve:
    def test_explicit_mode_needs_preset_table(self):
        cfg = load_config(CONFIG_DIR / "custom.cfg").override(mode="explicit")
        # the custom system here is singular, but mode validation comes first
        with pytest.raises(ConfigError):
            resolve(cfg).reconstructor()

    def test_output_counts_must_match_inputs(self):
        cfg = ExperimentConfig(output_counts=(500,))
        with pytest.raises(ConfigError):
            resolve(cfg).output_counts()

    def test_default_output_counts(self):
        exp = resolve(ExperimentConfig(scheme="s22d"))
        assert exp.output_counts() == (8 * 51, 8 * 51)

    def test_signal_count_checked(self):
        cfg = ExperimentConfig(scheme="s22d", signals="custom",
                               custom_signals=())
        with pytest.raises(ConfigError):
            resolve(cfg)
