# tests/test_settings.py
import logging

from services import settings_service
from services.log_service import level_from_verbosity
from services.pool import parallel_map
from services.settings_service import get_settings, reload_settings


def test_defaults(monkeypatch):
    for key in ("SCHUR_THREADS", "SCHUR_SAMPLES", "SCHUR_LOG_LEVEL"):
        monkeypatch.delenv(key, raising=False)
    s = reload_settings()
    assert s.dim_cap == settings_service.DEFAULT_DIM_CAP
    assert s.seed == settings_service.DEFAULT_SEED
    assert s.samples == settings_service.DEFAULT_SAMPLES
    assert 1 <= s.threads <= 8
    assert s.log_level == "WARNING"


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("SCHUR_DIM_CAP", "12")
    monkeypatch.setenv("SCHUR_THREADS", "0")
    monkeypatch.setenv("SCHUR_LOG_LEVEL", "info")
    s = reload_settings()
    assert s.dim_cap == 12
    assert s.threads == 1
    assert s.log_level == "INFO"


def test_malformed_value_falls_back(monkeypatch, caplog):
    monkeypatch.setenv("SCHUR_SEED", "twelve")
    with caplog.at_level(logging.WARNING):
        s = reload_settings()
    assert s.seed == settings_service.DEFAULT_SEED
    assert "SCHUR_SEED" in caplog.text


def test_settings_are_cached(monkeypatch):
    first = get_settings()
    monkeypatch.setenv("SCHUR_DIM_CAP", "99")
    assert get_settings() is first
    assert reload_settings().dim_cap == 99


def test_verbosity_levels():
    assert level_from_verbosity(0) == logging.WARNING
    assert level_from_verbosity(1) == logging.INFO
    assert level_from_verbosity(2) == logging.DEBUG
    assert level_from_verbosity(0, "ERROR") == logging.ERROR


def test_parallel_map_keeps_order():
    items = list(range(20))
    assert parallel_map(lambda x: x * x, items, workers=4) == [x * x for x in items]
    assert parallel_map(lambda x: x + 1, items, workers=1) == [x + 1 for x in items]
    assert parallel_map(str, []) == []
