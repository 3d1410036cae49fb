"""Collects one pass/fail line per acceptance criterion and prints them at the end of the run."""

CRITERIA = []


def record(label, passed, detail=""):
    line = f"[{'PASS' if passed else 'FAIL'}] {label}" + (f": {detail}" if detail else "")
    CRITERIA.append(line)
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for line in CRITERIA:
        terminalreporter.write_line(line)
