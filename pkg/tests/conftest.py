import pytest

from mfw.hom import contraction_algebra
from mfw.mf import builtin_family, laufer_generators
from mfw.milnor import milnor_algebra


@pytest.fixture(scope="session")
def laufer1():
    E = builtin_family("laufer", 1)
    ma = milnor_algebra(E.W)
    a, b = laufer_generators(E)
    return E, ma, a, b


@pytest.fixture(scope="session")
def laufer_acon(laufer1):
    E, ma, _, _ = laufer1
    return contraction_algebra(E, ma)


_ACCEPTANCE = {"module": None, "outcomes": {}}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    name = item.name
    if item.module.__name__.endswith("test_acceptance") and name.startswith("test_criterion_"):
        _ACCEPTANCE["module"] = item.module
        n = int(name.split("_")[2])
        if report.when == "call" or (report.when == "setup" and report.failed):
            _ACCEPTANCE["outcomes"][n] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    module = _ACCEPTANCE["module"]
    if module is None:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.summary_lines(_ACCEPTANCE["outcomes"]):
        terminalreporter.write_line(line)
