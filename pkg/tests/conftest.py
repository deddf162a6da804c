import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

_ACCEPTANCE_LINES = []


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    status = "PASS" if report.passed else "FAIL"
    _ACCEPTANCE_LINES.append(f"[acceptance] {name}: {status}")


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.write_line("")
        terminalreporter.write_line("Acceptance criteria:")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
