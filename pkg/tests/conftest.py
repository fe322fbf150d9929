import sys


def pytest_terminal_summary(terminalreporter):
    # echo the PASS/FAIL line of every acceptance criterion that ran
    for name in ("test_acceptance", "tests.test_acceptance"):
        lines = getattr(sys.modules.get(name), "ACCEPTANCE_LINES", None)
        if lines:
            terminalreporter.section("acceptance criteria")
            for line in lines:
                terminalreporter.write_line(line)
            return
