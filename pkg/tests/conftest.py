import pytest

from c5m.harness import load_tables


@pytest.fixture(scope="session")
def tables():
    return load_tables()


def pytest_terminal_summary(terminalreporter):
    """Repeat the acceptance verdicts, one line per criterion, at the end of the run."""
    import sys
    verdicts = {}
    for name, mod in list(sys.modules.items()):
        if name.endswith("test_acceptance"):
            verdicts.update(getattr(mod, "VERDICTS", {}))
    if verdicts:
        terminalreporter.section("acceptance criteria")
        for n in sorted(verdicts):
            terminalreporter.write_line(verdicts[n])
