import pytest

from faraday_qnd import CavitySpec, ExcitonSpec, ProbeSpec

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def q850_cavity():
    # cavity 400 THz below an exciton at 2.1e15 rad/s, Q ~ 1e3
    return CavitySpec(omega_p=1.7e15, gamma_p=2e12)


@pytest.fixture
def q850_exciton():
    return ExcitonSpec(omega_ex=2.1e15, gamma_ex=1e10, omega_rabi=3e11)


@pytest.fixture
def feas_cavity():
    return CavitySpec(omega_p=2.1e15, gamma_p=2.3e11)


@pytest.fixture
def feas_exciton(feas_cavity):
    return ExcitonSpec.at_detuning(feas_cavity, 4e14, gamma_ex=1e10, omega_rabi=3e11)


@pytest.fixture
def feas_probe():
    return ProbeSpec.from_power(2.1e15, 10e-3, tau=0.5e-9)


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
