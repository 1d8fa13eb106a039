import os
import sys


sys.path.insert(0, os.path.dirname(__file__))

KEY = bytes.fromhex("0102030405")

_acceptance = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): exit criterion of the build")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = _acceptance_marker.get(report.nodeid)
    if marker is not None:
        _acceptance[report.nodeid] = (marker, report.outcome)


_acceptance_marker = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("acceptance")
        if m is not None:
            _acceptance_marker[item.nodeid] = m.args


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), outcome in sorted(_acceptance.values(), key=lambda x: int(x[0][0])):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{verdict}] criterion {number}: {title}")
