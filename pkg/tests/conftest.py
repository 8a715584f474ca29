import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from nkteams.landscape import build_interaction_matrix, generate_landscape  # noqa: E402


@pytest.fixture
def make_landscape():
    def _make(k=3, seed=0, n=12, m=3):
        return generate_landscape(build_interaction_matrix(n, m, k), np.random.default_rng(seed))

    return _make


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import REPORT

    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)
