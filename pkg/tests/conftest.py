import pytest

from memkin import paper_defaults

from acceptance_report import LINES


@pytest.fixture(scope="session")
def defaults():
    return paper_defaults()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
