"""Per-criterion PASS/FAIL summary for tests marked ``@pytest.mark.criterion``."""
import pytest

_results: dict[str, list] = {}


def _criterion(item):
    mark = item.get_closest_marker("criterion")
    return mark.args[0] if mark else None


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    name = _criterion(item)
    if name is None:
        return
    entry = _results.setdefault(name, [True, 0.0])
    if report.when == "call":
        entry[1] += report.duration
    if report.failed or (report.when == "call" and report.skipped):
        entry[0] = False


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_results, key=lambda s: int(s.split()[0][2:])):
        ok, secs = _results[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  ({secs:.1f}s)")
