from __future__ import annotations

from pathlib import Path

from twostate_mfg.settings import CHECK_WORKERS_ENV, OUTPUT_DIR_ENV, configured_check_workers, default_output_dir


def test_output_directory_from_environment(monkeypatch, tmp_path):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))
    assert default_output_dir() == tmp_path
    monkeypatch.delenv(OUTPUT_DIR_ENV)
    assert default_output_dir() == Path("output")


def test_configured_check_workers(monkeypatch):
    monkeypatch.delenv(CHECK_WORKERS_ENV, raising=False)
    assert configured_check_workers() is None
    monkeypatch.setenv(CHECK_WORKERS_ENV, "8")
    assert configured_check_workers() == 8
    monkeypatch.setenv(CHECK_WORKERS_ENV, "many")
    assert configured_check_workers() is None
    monkeypatch.setenv(CHECK_WORKERS_ENV, "0")
    assert configured_check_workers() is None
