import pytest

_criteria: list[tuple[str, str, float]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if item.module.__name__.rsplit(".", 1)[-1] != "test_acceptance" or not item.function.__doc__:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        label = item.function.__doc__.strip().splitlines()[0]
        _criteria.append((label, "PASS" if rep.passed else "FAIL", rep.duration))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label, status, duration in _criteria:
        terminalreporter.write_line(f"{status} {label} ({duration:.2f}s)")
