import os

from hypothesis import HealthCheck, settings

settings.register_profile("ci", max_examples=60, deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))


_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" in report.nodeid and (report.when == "call" or report.failed):
        name = report.nodeid.split("::")[-1][len("test_criterion_"):]
        if _ACCEPTANCE.get(name) != "FAIL":
            _ACCEPTANCE[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for name in sorted(_ACCEPTANCE):
            num, _, label = name.partition("_")
            terminalreporter.write_line(f"criterion {int(num):2d} {label:<28} {_ACCEPTANCE[name]}")
