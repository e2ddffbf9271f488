from pathlib import Path

import pytest

from app.core.config import settings
from app.utils.logging import logger as app_logger

PROBLEMS_DIR = Path(__file__).resolve().parent.parent / "problems"


@pytest.fixture
def problems_dir() -> Path:
    return PROBLEMS_DIR


@pytest.fixture
def logarithmic_path() -> Path:
    return PROBLEMS_DIR / "logarithmic_p3.json"


@pytest.fixture
def twisted_cubic_path() -> Path:
    return PROBLEMS_DIR / "cerveau_linsneto.json"


@pytest.fixture
def mutated_path() -> Path:
    return PROBLEMS_DIR / "cerveau_linsneto_mutated.json"


@pytest.fixture
def fast_sphere(monkeypatch):
    """Loosen the sphere-integral settings so cross-checks finish quickly."""
    monkeypatch.setattr(settings, "MARTINELLI_TOL", 1e-3)
    monkeypatch.setattr(settings, "MARTINELLI_START_INTERVALS", 8)
    monkeypatch.setattr(settings, "MARTINELLI_MAX_EVALUATIONS", 2**21)
    return settings


@pytest.fixture
def no_crosscheck(monkeypatch):
    monkeypatch.setattr(settings, "CROSSCHECK_ENABLED", False)
    return settings


@pytest.fixture(autouse=True)
def reset_app_logger():
    """Drop handlers a test (or a CLI run inside it) attached to the `app` logger."""
    before = list(app_logger.handlers)
    level = app_logger.level
    yield app_logger
    for h in app_logger.handlers:
        if h not in before:
            h.close()
    app_logger.handlers[:] = before
    app_logger.setLevel(level)
