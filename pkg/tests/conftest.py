import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "repo", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = getattr(config, "_acceptance_results", None)
    if results is None:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, 11):
        ok, note = results.get(n, (False, "not run"))
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {note}")
