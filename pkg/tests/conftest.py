import functools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dgbv_frobenius import fixtures  # noqa: E402
from dgbv_frobenius.bv import tensor_product  # noqa: E402
from dgbv_frobenius.pipeline import run_pipeline  # noqa: E402

FIXTURE_NAMES = ["unit", "trivial:1", "trivial:2", "square", "tensor"]
PIPELINE_ORDER = {"unit": 4, "trivial:1": 4, "trivial:2": 4, "square": 6, "tensor": 4}


def load(name: str):
    if name == "tensor":
        return tensor_product(fixtures.square(), fixtures.trivial(1))
    return fixtures.get(name)


@functools.lru_cache(maxsize=None)
def pipeline(name: str):
    d = load(name)
    return d, run_pipeline(d, PIPELINE_ORDER[name])


@pytest.fixture(params=FIXTURE_NAMES)
def fixture_name(request):
    return request.param


# -- acceptance summary: one line per criterion

_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_runtest_logreport(report):
    crit = getattr(report, "criterion", None)
    if crit is None:
        return
    if report.when == "call" or report.failed:
        prev = _CRITERIA.get(crit, "PASS")
        _CRITERIA[crit] = "FAIL" if report.failed or prev == "FAIL" else "PASS"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None:
        rep.criterion = (m.args[0], m.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for (num, title), status in sorted(_CRITERIA.items()):
        terminalreporter.write_line(f"criterion {num:>2} {status}  {title}")
