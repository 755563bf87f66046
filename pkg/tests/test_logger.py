import logging
from logging.handlers import RotatingFileHandler

import pytest

import embedlift.logger as logger_mod


@pytest.fixture
def bare_root(monkeypatch):
    """Root logger without handlers, restored afterwards."""
    root = logging.getLogger()
    saved_handlers, saved_level = list(root.handlers), root.level
    for handler in saved_handlers:
        root.removeHandler(handler)
    monkeypatch.setattr(logger_mod, "_LOG_CONFIGURED", False)

    yield root

    for handler in list(root.handlers):
        root.removeHandler(handler)
        handler.close()
    for handler in saved_handlers:
        root.addHandler(handler)
    root.setLevel(saved_level)


def _file_handlers(root):
    return [h for h in root.handlers if isinstance(h, RotatingFileHandler)]


def test_file_handler_creates_run_directory(tmp_path):
    log_file = tmp_path / "runs" / "catenoid" / "embedlift.log"
    handler = logger_mod._make_file_handler(log_file, logging.WARNING, max_bytes=1024, backup_count=1, delay=True)
    assert log_file.parent.is_dir()
    assert handler.level == logging.WARNING
    assert handler.formatter._fmt == logger_mod.FILE_FORMAT
    handler.close()


def test_repeated_configuration_keeps_one_handler_each(tmp_path, bare_root):
    log_file = tmp_path / "embedlift.log"
    # pytest may attach its own stream handlers to the root logger
    streams = sum(logger_mod._is_stdout_handler(h) for h in bare_root.handlers)
    logger_mod.configure_logging(log_file=log_file)
    root = logger_mod.configure_logging(log_file=log_file)
    assert len(_file_handlers(root)) == 1
    assert sum(logger_mod._is_stdout_handler(h) for h in root.handlers) == max(streams, 1)
    assert logger_mod._LOG_CONFIGURED


def test_each_run_logs_into_its_own_directory(tmp_path, bare_root):
    first, second = tmp_path / "strip" / "embedlift.log", tmp_path / "exp4" / "embedlift.log"
    logger_mod.init_logger("embedlift.cli", first)
    logger_mod.get_logger("embedlift.criterion.evaluate").info("strip verdict")
    logger_mod.init_logger("embedlift.cli", second)
    logger_mod.get_logger("embedlift.oracle.collision").warning("exp4 collision")
    for handler in bare_root.handlers:
        handler.flush()

    handlers = _file_handlers(bare_root)
    assert [h.baseFilename for h in handlers] == [str(second.resolve())]
    assert "strip verdict" in first.read_text()
    text = second.read_text()
    assert "WARNING embedlift.oracle.collision" in text
    assert "strip verdict" not in text


@pytest.mark.parametrize("debug, level", [(True, logging.DEBUG), (False, logging.INFO)])
def test_init_logger_level(tmp_path, bare_root, debug, level):
    logger = logger_mod.init_logger("embedlift.cli", tmp_path / "run.log", debug=debug)
    assert logger.name == "embedlift.cli"
    assert bare_root.level == level
    assert all(h.level == level for h in _file_handlers(bare_root))
