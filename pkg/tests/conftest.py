import pytest

from phiperiodic.config import problem_from_config, resolve_config
from phiperiodic.scenarios import preset_config

_ACCEPTANCE = []


def scenario_problem(name, **problem_overrides):
    cfg = preset_config(name)
    cfg["problem"].update(problem_overrides)
    cfg = resolve_config(cfg)
    return problem_from_config(cfg), cfg


@pytest.fixture
def double_well():
    return scenario_problem("symmetric-double-well")[0]


@pytest.fixture
def tilt():
    return scenario_problem("balanced-tilt")[0]


@pytest.fixture
def convex():
    return scenario_problem("convex-well")[0]


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        props = dict(report.user_properties)
        if "criterion" in props:
            _ACCEPTANCE.append((props["criterion"], report.outcome, props.get("detail", "")))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, outcome, detail in sorted(_ACCEPTANCE, key=lambda r: r[0]):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d}: {verdict}  {detail}")

