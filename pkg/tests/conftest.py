import pytest

from nopa_budget.config import bundled_path
from nopa_budget.detection_chain import DetectionParams
from nopa_budget.gaussian_core import linear_from_db
from nopa_budget.nopa_cavity import CavityParams, OperatingPoint


@pytest.fixture
def paper_cavity():
    return CavityParams(t_out=0.052, l_intra=0.0017, length_m=0.054)


@pytest.fixture
def upgrade_cavity():
    return CavityParams(t_out=0.12, l_intra=0.0017, length_m=0.054)


@pytest.fixture
def paper_op():
    return OperatingPoint(170.0, 230.0, 2.0e6)


@pytest.fixture
def paper_detection():
    return DetectionParams(0.90, 0.999, 1.8, linear_from_db(-11.3))


@pytest.fixture
def data_file():
    return lambda name: str(bundled_path(name))


_criteria = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _criteria.append((mark.args[0], mark.args[1], rep.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for cid, title, outcome in _criteria:
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{status}] AC{cid}: {title}")
