from pathlib import Path

import pytest

from cftc.model import load_model

MODELS = Path(__file__).resolve().parent.parent / "models"


@pytest.fixture(scope="session")
def echo_model():
    return load_model(MODELS / "echo.cft")


@pytest.fixture(scope="session")
def unused_model():
    return load_model(MODELS / "unused_port.cft")


@pytest.fixture(scope="session")
def relay_model():
    return load_model(MODELS / "relay.cft")


@pytest.fixture(scope="session")
def echo(echo_model):
    return echo_model.component("echo")


# one line per acceptance criterion, shown in the terminal summary
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
