from pathlib import Path

import pytest

from src.config import RunConfig, get_settings, set_settings
from src.core.errors import DomainError


def test_defaults():
    config = RunConfig()
    assert (config.seed, config.samples, config.format) == (42, 100, "json")
    assert config.tol.abs == config.tol.rel == 1e-8
    assert config.to_json() == {"seed": 42, "samples": 100, "tol": {"abs": 1e-8, "rel": 1e-8}, "format": "json"}


def test_from_env(monkeypatch, tmp_path):
    monkeypatch.setenv("SPINSUM_SEED", "7")
    monkeypatch.setenv("SPINSUM_SAMPLES", "25")
    monkeypatch.setenv("SPINSUM_TOL_ABS", "1e-6")
    monkeypatch.setenv("SPINSUM_CACHE_DIR", str(tmp_path))
    monkeypatch.setenv("SPINSUM_LOG_LEVEL", "info")
    config = RunConfig.from_env()
    assert config.seed == 7 and config.samples == 25
    assert config.tol.abs == 1e-6 and config.tol.rel == 1e-8
    assert config.cache_dir == Path(tmp_path)
    assert config.log_level == "INFO"


def test_bad_environment_values(monkeypatch):
    monkeypatch.setenv("SPINSUM_SEED", "forty-two")
    with pytest.raises(DomainError):
        RunConfig.from_env()


@pytest.mark.parametrize("changes", [
    {"samples": 9},
    {"seed": -1},
    {"seed": 2 ** 64},
    {"format": "yaml"},
])
def test_validation(changes):
    with pytest.raises(DomainError):
        RunConfig(**changes)


def test_settings_singleton(monkeypatch):
    monkeypatch.delenv("SPINSUM_SEED", raising=False)
    set_settings(None)
    try:
        first = get_settings()
        assert get_settings() is first
        custom = RunConfig(seed=3)
        set_settings(custom)
        assert get_settings() is custom
    finally:
        set_settings(None)
