"""Shared contexts for the q = 3, l = 2 test configuration (built once per session)."""

import pytest

from soqc.field import FieldTable
from soqc.zeta import ZetaContext


@pytest.fixture(scope="session")
def F3():
    return FieldTable(3)


@pytest.fixture(scope="session")
def F9():
    return FieldTable(3, 2)


@pytest.fixture(scope="session")
def ctx(F3):
    return ZetaContext(F3, 2)


@pytest.fixture(scope="session")
def G(ctx):
    return ctx.G


@pytest.fixture(scope="session")
def theory(ctx):
    return ctx.theory


@pytest.fixture(scope="session")
def cuspidal(theory):
    return theory.generic_cuspidal()


@pytest.fixture(scope="session")
def full_report():
    """The whole catalog at q = 3, l = 2, with its wall-clock time."""
    import time

    from soqc.verify import VerifyConfig, run_suite

    start = time.perf_counter()
    report = run_suite(VerifyConfig())
    return report, time.perf_counter() - start


_CRITERIA = pytest.StashKey[dict]()
ACCEPTANCE_COUNT = 11


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", help="run the q = 5 stretch criterion")


def pytest_configure(config):
    config.stash[_CRITERIA] = {}


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="stretch criterion; pass --runslow to run it")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def criterion(request):
    """Record one acceptance line: criterion(k, ok, note)."""
    table = request.config.stash[_CRITERIA]

    def record(k: int, ok: bool, note: str = ""):
        if k in table:
            prev_ok, prev_note = table[k]
            ok, note = prev_ok and ok, f"{prev_note}; {note}"
        table[k] = (ok, note)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    table = config.stash.get(_CRITERIA, {})
    if not table:
        return
    terminalreporter.section("acceptance criteria")
    for k in range(1, ACCEPTANCE_COUNT + 1):
        if k not in table:
            terminalreporter.write_line(f"criterion {k:2d}: NOT RUN")
            continue
        ok, note = table[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {note}")
