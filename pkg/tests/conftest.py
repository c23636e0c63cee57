import numpy as np
import pytest

from hfpollution.series import UniformSeries

ACCEPTANCE_LINES = []


def record_criterion(number, name, passed, detail=""):
    ACCEPTANCE_LINES.append((number, name, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, passed, detail in sorted(ACCEPTANCE_LINES, key=lambda r: (r[0] or 100, r[1])):
        label = f"{number}. " if number else ""
        status = "INFO" if passed is None else "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {label}{name}: {detail}")


@pytest.fixture
def series_of():
    def make(values, rate_hz=1.0, start_t=0.0):
        return UniformSeries(start_t=start_t, rate_hz=rate_hz, values=np.asarray(values, dtype=float))

    return make
