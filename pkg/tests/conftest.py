import os

import pytest
from hypothesis import settings

# property suites run at least 10^3 examples each
settings.register_profile("ksort", max_examples=1000, deadline=None, derandomize=True)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ksort"))

CRITERIA: dict[int, dict] = {}
INVARIANT_OUTCOMES: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
    config.addinivalue_line("markers", "invariant: property test counted by criterion 9")


def pytest_collection_modifyitems(session, config, items):
    # acceptance checks last, so criterion 9 can read the invariant results
    items.sort(key=lambda it: it.get_closest_marker("criterion") is not None)


@pytest.fixture
def detail(request):
    """Attach a one-line measurement summary to the current criterion."""
    marker = request.node.get_closest_marker("criterion")

    def set_detail(text: str) -> None:
        CRITERIA.setdefault(marker.args[0], {})["detail"] = text

    return set_detail


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    keywords = report.keywords
    if "invariant" in keywords:
        INVARIANT_OUTCOMES[report.nodeid] = report.outcome
    for num, entry in _criterion_of(report).items():
        entry_store = CRITERIA.setdefault(num, {})
        entry_store["title"] = entry
        entry_store["outcome"] = report.outcome


_TITLES: dict[str, tuple[int, str]] = {}


def pytest_itemcollected(item):
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        _TITLES[item.nodeid] = (marker.args[0], marker.args[1])


def _criterion_of(report) -> dict[int, str]:
    hit = _TITLES.get(report.nodeid)
    return {hit[0]: hit[1]} if hit else {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(CRITERIA):
        entry = CRITERIA[num]
        status = "PASS" if entry.get("outcome") == "passed" else "FAIL"
        line = f"{status} criterion {num}: {entry.get('title', '?')}"
        if entry.get("detail"):
            line += f" | {entry['detail']}"
        terminalreporter.write_line(line)
