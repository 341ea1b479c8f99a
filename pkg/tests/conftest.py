import os

from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=400, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_scorecard = {}


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    _scorecard[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _scorecard:
        return
    tr = terminalreporter
    tr.section("acceptance scorecard")
    for name, outcome in sorted(_scorecard.items()):
        tr.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
    passed = sum(o == "passed" for o in _scorecard.values())
    tr.write_line(f"{passed}/{len(_scorecard)} acceptance criteria passed")
