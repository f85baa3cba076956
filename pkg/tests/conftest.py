import os
import sys

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=30)
settings.register_profile("thorough", deadline=None, max_examples=300)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def lena():
    from tpctf import imgio

    path = imgio.find_image("lena512")
    if path is None:
        pytest.skip("lena512.pgm not available")
    return imgio.read_pgm(path)


def pytest_terminal_summary(terminalreporter):
    # one line per acceptance criterion, in criterion order
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[key])
