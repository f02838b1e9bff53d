import time

import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): numbered acceptance criterion")


@pytest.fixture
def detail(request):
    """Append short facts to the criterion's summary line."""
    notes = []
    request.node.user_properties.append(("notes", notes))
    return notes.append


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_call(item):
    t = time.time()
    yield
    item.user_properties.append(("seconds", time.time() - t))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is None or rep.when != "call":
        return
    props = dict(item.user_properties)
    n, title = m.args
    _RESULTS[n] = (title, "PASS" if rep.passed else "FAIL", props.get("seconds", 0.0),
                   "; ".join(str(x) for x in props.get("notes", [])))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        title, status, secs, notes = _RESULTS[n]
        line = f"criterion {n:2d} {status}  {title} ({secs:.1f} s)"
        terminalreporter.write_line(line + (f": {notes}" if notes else ""))
