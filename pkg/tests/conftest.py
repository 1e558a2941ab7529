import re

import pytest

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", report.nodeid)
    if m is None:
        return
    k = int(m.group(1))
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        # parametrized criteria fail if any case fails
        prev, dur = _ACCEPTANCE.get(k, ("passed", 0.0))
        outcome = report.outcome if prev == "passed" else prev
        _ACCEPTANCE[k] = (outcome, dur + report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_ACCEPTANCE):
        outcome, dur = _ACCEPTANCE[k]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {k:2d}: {verdict} ({dur:.1f} s)")


@pytest.fixture(scope="session")
def rng():
    import numpy as np

    return np.random.default_rng(20240601)
