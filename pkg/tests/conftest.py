import os
import sys

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("toridyn", deadline=None, max_examples=60, derandomize=True)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "toridyn"))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    for name, mod in list(sys.modules.items()):
        lines = getattr(mod, "ACCEPTANCE_LINES", None)
        if name.endswith("test_acceptance") and lines:
            terminalreporter.section("acceptance criteria")
            for n in sorted(lines):
                terminalreporter.write_line(lines[n])
