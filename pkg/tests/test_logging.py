"""Logging setup: stderr handler once, optional dated file, errors with context."""

import io
import logging
import sys

from app.utils.logging import StderrHandler, configure_logging, log_error, logger


def test_stderr_handler_is_added_once():
    configure_logging("debug")
    configure_logging("debug")
    ours = [h for h in logger.handlers if isinstance(h, StderrHandler)]
    assert len(ours) == 1
    assert logger.level == logging.DEBUG


def test_stderr_is_looked_up_when_writing(monkeypatch):
    configure_logging("INFO")
    first, second = io.StringIO(), io.StringIO()
    monkeypatch.setattr(sys, "stderr", first)
    logger.warning("to the first stream")
    first.close()
    monkeypatch.setattr(sys, "stderr", second)
    logger.warning("to the second stream")
    assert "to the second stream" in second.getvalue()


def test_log_dir_gets_a_dated_file(tmp_path):
    configure_logging("INFO", str(tmp_path / "logs"))
    log_error(ValueError("bad disc"), "check failed")
    for h in logger.handlers:
        h.flush()
    (path,) = (tmp_path / "logs").glob("baumbott_*.log")
    assert "check failed: bad disc" in path.read_text()
