import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    ok, _ = _criteria.get(n, (True, title))
    if rep.failed or (rep.when == "call" and rep.skipped):
        ok = False
    _criteria[n] = (ok, title)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        ok, title = _criteria[n]
        terminalreporter.write_line("criterion %d %s: %s" % (n, "PASS" if ok else "FAIL", title))
