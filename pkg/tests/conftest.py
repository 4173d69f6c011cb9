import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

# graph searches vary a lot in wall time between examples
settings.register_profile("seqlrc", deadline=None)
settings.load_profile("seqlrc")

_ACCEPTANCE: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): one acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or (report.when != "call" and report.passed):
        return
    number, title = marker.args
    entry = _ACCEPTANCE.setdefault(number, [title, "PASS"])
    if report.failed:
        entry[1] = "FAIL"
    elif report.skipped and entry[1] == "PASS":
        entry[1] = "SKIP"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, status = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {title}")
