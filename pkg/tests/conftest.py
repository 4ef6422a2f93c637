import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

_ACCEPTANCE = []


def record(criterion: int, title: str, passed: bool, detail: str = ""):
    line = f"{'PASS' if passed else 'FAIL'}  criterion {criterion:>2}: {title}"
    if detail:
        line += f"  [{detail}]"
    _ACCEPTANCE.append((criterion, line))
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE):
        terminalreporter.write_line(line)
