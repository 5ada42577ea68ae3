"""Acceptance bookkeeping: tests marked ``criterion(n, title)`` roll up into
one PASS/FAIL line per criterion in the terminal summary."""

from __future__ import annotations

import pytest

_CRITERIA: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            n, title = m.args
            _CRITERIA.setdefault(n, {"title": title, "ok": True, "ran": 0})


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is None or report.when != "call" and not report.failed:
        return
    entry = _CRITERIA[m.args[0]]
    if report.when == "call":
        entry["ran"] += 1
    if report.failed:
        entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        e = _CRITERIA[n]
        if not e["ok"]:
            status = "FAIL"
        else:
            status = "PASS" if e["ran"] else "NOT RUN"
        terminalreporter.write_line(f"{status} criterion {n}: {e['title']}")
