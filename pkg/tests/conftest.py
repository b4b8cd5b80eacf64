# tests/conftest.py
import pytest

from cli.selftest import k4 as build_k4
from services import matroid as mat
from services import schur
from services.settings_service import reload_settings


@pytest.fixture(autouse=True)
def _fresh_settings(monkeypatch):
    """Every test starts from a small, deterministic configuration."""
    monkeypatch.setenv("SCHUR_THREADS", "1")
    monkeypatch.setenv("SCHUR_SAMPLES", "40")
    monkeypatch.delenv("SCHUR_SEED", raising=False)
    monkeypatch.delenv("SCHUR_DIM_CAP", raising=False)
    reload_settings()
    yield
    reload_settings()


@pytest.fixture(scope="session")
def k4():
    return build_k4()


@pytest.fixture(scope="session")
def k4_datum(k4):
    return schur.build_datum(k4, workers=1)


@pytest.fixture(scope="session")
def u24():
    return mat.uniform(2, 4)


@pytest.fixture(scope="session")
def small_library():
    base = [mat.uniform(1, 2), mat.uniform(1, 3), mat.uniform(2, 3), mat.uniform(1, 4), mat.uniform(2, 4)]
    return base + [mat.dual(m) for m in base]
