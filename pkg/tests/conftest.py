import pytest

from cogchan.channel import ChannelParams
from cogchan.engine import SimConfig


def make_config(occupancies=(0.3, 0.1, 0.5, 0.1), **kw):
    burst = kw.pop("burst_len", 10.0)
    q = kw.pop("base_reception", 1.0)
    kw.setdefault("n_nodes", 10)
    kw.setdefault("slots_per_trial", 200)
    kw.setdefault("n_trials", 50)
    return SimConfig(channels=tuple(ChannelParams(p, burst, q) for p in occupancies), **kw)


@pytest.fixture
def config_factory():
    return make_config


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
