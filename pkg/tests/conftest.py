import functools

import pytest

from pcg import catalog
from pcg.collector import build_group


@functools.lru_cache(maxsize=None)
def group(spec):
    """Built groups are shared across test modules."""
    return build_group(catalog.from_spec(spec), name=catalog.label(spec))


@functools.lru_cache(maxsize=None)
def small_corpus():
    """(label, group) for every default catalog group of order at most 3^6."""
    out = []
    for label, pres in catalog.default_corpus():
        if pres.order <= 3**6:
            out.append((label, group(label)))
    return tuple(out)


SMALL_LABELS = [label for label, pres in catalog.default_corpus() if pres.order <= 3**6]


@pytest.fixture(scope="session")
def ex38():
    return group("example38:n=3")


# ------------------------------------------------ acceptance summary lines

_CRITERIA = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label, text): an acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        status = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
        _CRITERIA.append((mark.args[0], mark.args[1], status, rep.duration))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label, text, status, seconds in _CRITERIA:
        terminalreporter.write_line(f"criterion {label:<5} {status}  {text}  ({seconds:.1f}s)")
