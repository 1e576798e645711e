import pytest

import tsia


@pytest.fixture(scope="session")
def corpus():
    """Loaded programs for every positive corpus entry, keyed by name."""
    negative = {"cfact", "outalias", "delmisuse", "extent"}
    return {name: tsia.load(tsia.corpus_source(name))
            for name in tsia.corpus_names() if name not in negative}


@pytest.fixture
def write_source(tmp_path):
    def write(text, name="prog.tsia"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return write


_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or (report.when != "call" and report.passed):
        return
    n, title = marker.args
    ok = report.passed and _CRITERIA.get(n, (True, title))[0]
    _CRITERIA[n] = (ok, title)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        ok, title = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}")
