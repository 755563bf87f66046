import os
from pathlib import Path

import pytest

from embedlift.settings import settings


def _writable_temp_root() -> Path:
    """First of TMPDIR, TEMP, TMP and ./.tmp_pytest_fallback where a directory can be created."""
    names = ("TMPDIR", "TEMP", "TMP")
    candidates = [Path(os.environ[n]) for n in names if os.environ.get(n)]
    fallback = Path.cwd() / ".tmp_pytest_fallback"
    for root in [*candidates, fallback]:
        try:
            probe = root / "pytest-probe"
            probe.mkdir(parents=True, exist_ok=True)
            probe.rmdir()
            return root
        except OSError:
            continue
    fallback.mkdir(parents=True, exist_ok=True)
    return fallback


def pytest_configure(config):
    """Run outputs of the CLI tests go below a writable temp root."""
    root = _writable_temp_root()
    os.environ["PYTEST_TEMP_ROOT"] = str(root)
    config.option.basetemp = str(root / f"pytest-session-{os.getpid()}")


@pytest.hookimpl(tryfirst=True)
def pytest_sessionfinish(session, exitstatus):
    """Leave basetemp in place when it cannot be listed."""
    factory = getattr(session.config, "_tmp_path_factory", None)
    basetemp = None if factory is None else factory._basetemp
    if basetemp is None:
        return
    try:
        next(basetemp.iterdir(), None)
    except PermissionError:
        factory._basetemp = None


@pytest.fixture
def run_dir(tmp_path_factory):
    """Temporary output directory for runs, configs and exported files."""
    return tmp_path_factory.mktemp("run")


@pytest.fixture(autouse=True)
def _restore_settings():
    """Undo tolerance overrides applied by configs and the CLI."""
    saved = settings.model_dump()
    yield
    for key, value in saved.items():
        setattr(settings, key, value)
