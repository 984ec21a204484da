import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def cache_dir(tmp_path, monkeypatch):
    d = tmp_path / "cache"
    monkeypatch.setenv("OPERADIX_CACHE", str(d))
    return d


# --- acceptance reporting ----------------------------------------------------------
# Tests marked ``criterion(k, title)`` are grouped per criterion; the summary prints
# one PASS/FAIL line per criterion.  An expected failure counts as FAIL.

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k, title): acceptance criterion k")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    k, title = mark.args
    entry = _criteria.setdefault(k, {"title": title, "ok": True, "notes": []})
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        if hasattr(rep, "wasxfail") or not rep.passed:
            entry["ok"] = False
            first = rep.capstdout.strip().splitlines()[:1] if rep.capstdout else []
            entry["notes"].append(item.name + (f": {first[0]}" if first else ""))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k in sorted(_criteria):
        e = _criteria[k]
        status = "PASS" if e["ok"] else "FAIL"
        extra = "" if e["ok"] else f"  (failing: {', '.join(e['notes'])})"
        tr.write_line(f"criterion {k:>2} {status}: {e['title']}{extra}")
