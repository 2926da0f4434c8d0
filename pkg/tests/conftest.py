import sys
from pathlib import Path

from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "qfl", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("qfl")


# --- acceptance summary ------------------------------------------------------------
# Tests marked ``criterion(n, title)`` get one PASS/FAIL line each at the end of the run.

import pytest  # noqa: E402

_criteria: dict[int, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if report.failed:
        _criteria[number] = (title, "FAIL")
    elif report.when == "call" and report.passed:
        _criteria.setdefault(number, (title, "PASS"))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, status = _criteria[number]
        terminalreporter.write_line(f"{status} criterion {number:2d}: {title}")
    passed = sum(status == "PASS" for _, status in _criteria.values())
    terminalreporter.write_line(f"{passed}/{len(_criteria)} acceptance criteria passed")
