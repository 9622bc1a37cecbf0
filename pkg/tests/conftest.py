import functools

import pytest
from hypothesis import HealthCheck, settings

from hipwm import ChbTopology, StrategyConfig, synthesize_line, synthesize_phase

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report_criterion():
    """Record one summary line per acceptance criterion for the terminal report."""
    def record(number, title, failures, details=""):
        status = "PASS" if not failures else "FAIL"
        line = f"criterion {number:>2} [{status}] {title}"
        if details:
            line += f" | {details}"
        if failures:
            line += " | failed: " + "; ".join(failures)
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return line
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)


@functools.lru_cache(maxsize=None)
def _phase(kind, amplitude, K, cells, vdc):
    return synthesize_phase(StrategyConfig.build(kind, amplitude=amplitude, K=K),
                            ChbTopology(cells, vdc))


@functools.lru_cache(maxsize=None)
def _line(kind, amplitude, K, cells, vdc):
    return synthesize_line(StrategyConfig.build(kind, amplitude=amplitude, K=K),
                           ChbTopology(cells, vdc))


@pytest.fixture(scope="session")
def phase_of():
    def get(kind, amplitude=1.0, K=0.55, cells=2, vdc=75.0):
        return _phase(kind, amplitude, K, cells, vdc)
    return get


@pytest.fixture(scope="session")
def line_of():
    def get(kind, amplitude=1.0, K=0.55, cells=2, vdc=75.0):
        return _line(kind, amplitude, K, cells, vdc)
    return get
