import sys
from pathlib import Path

import pytest

from infharm2d import ExampleA, ExampleB, GridSpec, LinearProfile, SeparatedMap, ZeroProfile
from infharm2d._accel import NUMBA_OK

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def map_a():
    return SeparatedMap.minus_f(ExampleA(), support=(-5.0, 5.0))


@pytest.fixture(scope="session")
def map_b():
    return SeparatedMap.minus_f(ExampleB(), support=(-5.0, 5.0))


@pytest.fixture(scope="session")
def map_lin():
    return SeparatedMap.minus_f(LinearProfile(1.0), support=(-2.0, 2.0))


@pytest.fixture(scope="session")
def map_zero():
    return SeparatedMap.minus_f(ZeroProfile(), support=(-5.0, 5.0))


@pytest.fixture(scope="session")
def grid241():
    return GridSpec.square(-3.0, 3.0, 241)


@pytest.fixture(params=["numba", "numpy"])
def backend(request, monkeypatch):
    if request.param == "numba" and not NUMBA_OK:
        pytest.skip("numba not installed")
    if request.param == "numpy":
        monkeypatch.setenv("INFHARM2D_DISABLE_JIT", "1")
    else:
        monkeypatch.delenv("INFHARM2D_DISABLE_JIT", raising=False)
    return request.param


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
