"""Acceptance reporting: one PASS/FAIL line per ``criterion`` marker."""

_RESULTS: dict = {}


def pytest_runtest_setup(item):
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        item.user_properties.append(("criterion", marker.args[0]))


def pytest_runtest_logreport(report):
    names = [v for k, v in report.user_properties if k == "criterion"]
    if not names:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        _RESULTS[names[0]] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _RESULTS.items():
        terminalreporter.write_line(f"{outcome}  {name}")
