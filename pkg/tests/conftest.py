import pytest

from shiftlab import scalars as sc


@pytest.fixture(autouse=True)
def default_tolerance():
    sc.set_tolerance(sc.MP.mpf("1e-12"))
    yield
    sc.set_tolerance(sc.MP.mpf("1e-12"))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS, line

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(RESULTS):
        title, ok, detail = RESULTS[num]
        terminalreporter.write_line(line(num, title, ok, detail))
