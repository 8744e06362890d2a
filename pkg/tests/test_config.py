"""Tests for config.py — environment-driven settings and their validation."""

from __future__ import annotations

import pytest
from pydantic import ValidationError

from wsncalc.bounds.models import EffectiveBandwidthMode
from wsncalc.config import Settings, get_settings
from wsncalc.scheduling.models import Convention


class TestDefaults:
    def test_values(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.delenv("WSNCALC_GRID_STEP_MS", raising=False)
        s = Settings(_env_file=None)
        assert s.log_level == "WARNING"
        assert s.log_format == "console"
        assert s.grid_step_ms == pytest.approx(0.05)
        assert s.horizon_factor == pytest.approx(4.0)
        assert s.random_seed == 20110101
        assert s.default_convention is Convention.PAPER_NUMERIC
        assert s.default_ee_mode is EffectiveBandwidthMode.AGGREGATE
        assert s.fractal_gamma == pytest.approx(6.0)
        assert s.max_workers == 4


class TestEnvironment:
    def test_override(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("WSNCALC_GRID_STEP_MS", "0.01")
        monkeypatch.setenv("WSNCALC_DEFAULT_CONVENTION", "strict_eq17")
        monkeypatch.setenv("WSNCALC_LOG_LEVEL", "debug")
        s = get_settings()
        assert s.grid_step_ms == pytest.approx(0.01)
        assert s.default_convention is Convention.STRICT_EQ17
        assert s.log_level == "DEBUG"

    def test_invalid_log_format(self) -> None:
        with pytest.raises(ValidationError, match="WSNCALC_LOG_FORMAT"):
            Settings(log_format="xml")

    def test_invalid_log_level(self) -> None:
        with pytest.raises(ValidationError, match="Unknown log level"):
            Settings(log_level="LOUD")

    @pytest.mark.parametrize(
        ("field", "value"),
        [
            ("grid_step_ms", 0.0),
            ("horizon_factor", 0.5),
            ("max_workers", 0),
            ("fractal_gamma", -1.0),
        ],
    )
    def test_out_of_range(self, field: str, value: float) -> None:
        with pytest.raises(ValidationError):
            Settings(**{field: value})

    def test_invalid_env_value(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("WSNCALC_MAX_WORKERS", "many")
        with pytest.raises(ValidationError):
            get_settings()
