import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

# tests must not read a developer's persistent cache unless they set one up
os.environ.pop("SPTCONG_CACHE_DIR", None)

from acceptance_log import ACCEPTANCE  # noqa: E402


@pytest.fixture
def cache_dir(tmp_path, monkeypatch):
    from sptcong import cache

    monkeypatch.setenv("SPTCONG_CACHE_DIR", str(tmp_path / "cache"))
    cache.clear_memory()
    yield tmp_path / "cache"
    cache.clear_memory()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, label = ACCEPTANCE[k]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {k}: {label}")
