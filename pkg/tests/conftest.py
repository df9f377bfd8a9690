import pytest

from riccigini import georgia_2023

_criteria = {}


@pytest.fixture(scope="session")
def preset():
    return georgia_2023()


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    for marker in report.keywords:
        if marker.startswith("criterion_"):
            _criteria[marker] = report.outcome


def pytest_collection_modifyitems(items):
    for item in items:
        for mark in item.iter_markers("criterion"):
            item.keywords[f"criterion_{mark.args[0]:02d}: {mark.args[1]}"] = True


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_criteria):
        outcome = "PASS" if _criteria[key] == "passed" else "FAIL"
        terminalreporter.write_line(f"{outcome}  {key[len('criterion_'):]}")
