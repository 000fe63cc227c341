import pytest

from cpoly.generators import deep_overlap_star, octa_koebe, tetra_hyperideal, tetra_koebe


@pytest.fixture(scope="session")
def tetra():
    return tetra_koebe()


@pytest.fixture(scope="session")
def octa():
    return octa_koebe()


@pytest.fixture(scope="session")
def hyper():
    return tetra_hyperideal(0.7)


@pytest.fixture(scope="session")
def star():
    return deep_overlap_star()


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
