"""Registers the ``criterion`` marker and prints one verdict per acceptance
criterion at the end of the run."""

import pytest

CRITERIA = {
    1: "field and valuation laws",
    2: "series convergence and divergence",
    3: "interval, S-measure and decomposition identities",
    4: "outer-measure rules on random instances",
    5: "counterexample reproduction",
    6: "L-measure suite",
    7: "CLI golden corpus",
    8: "derivative demo",
}

_outcomes = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number n")


def pytest_runtest_logreport(report):
    n = getattr(report, "criterion", None)
    if n is not None:
        # a skipped check does not count as a pass
        _outcomes[n] = _outcomes.get(n, True) and not (report.failed or report.skipped)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        report.criterion = marker.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        if n not in _outcomes:
            continue
        verdict = "PASS" if _outcomes[n] else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {verdict} ({CRITERIA[n]})")
