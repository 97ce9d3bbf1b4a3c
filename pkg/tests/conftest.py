from collections import defaultdict

import numpy as np
import pytest

_CRITERIA: dict = defaultdict(dict)
_TITLES: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is None:
        return
    n = m.args[0]
    _TITLES[n] = m.kwargs.get("title", "")
    prev = _CRITERIA[n].get(item.name, True)
    if rep.failed or (rep.when == "call" and rep.skipped):
        _CRITERIA[n][item.name] = False
    elif rep.when == "call":
        _CRITERIA[n][item.name] = prev


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        checks = _CRITERIA[n]
        ok = all(checks.values())
        failed = [k for k, v in checks.items() if not v]
        line = f"criterion {n} {'PASS' if ok else 'FAIL'}: {_TITLES[n]} ({sum(checks.values())}/{len(checks)} checks)"
        if failed:
            line += " failed: " + ", ".join(failed)
        tr.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
