import pytest
from hypothesis import settings

# same examples on every run so a red property is reproducible
settings.register_profile("repeatable", derandomize=True, deadline=None)
settings.load_profile("repeatable")

_criteria: list[tuple[str, bool, str]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and item.get_closest_marker("criterion"):
        name = item.get_closest_marker("criterion").args[0]
        reason = "" if report.passed else str(call.excinfo.value).splitlines()[0] if call.excinfo else ""
        _criteria.append((name, report.passed, reason))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion reported in the summary")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, reason in sorted(_criteria):
        line = f"{name}: {'PASS' if ok else 'FAIL'}"
        terminalreporter.write_line(line + (f"  ({reason})" if reason else ""))
