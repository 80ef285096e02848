import importlib
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import blobs  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def blob4():
    """4 classes in 2-D, neighbouring centers 12 blob widths apart."""
    X, y = blobs(4, 30, 2, sep=12.0, seed=3)
    Xq, yq = blobs(4, 25, 2, sep=12.0, seed=4)
    return X, y, Xq, yq


@pytest.fixture(params=["compiled", "python"])
def backend_impl(request):
    if request.param == "compiled":
        try:
            return importlib.import_module("svmelm._ext")
        except ImportError:
            pytest.skip("compiled core not built")
    return importlib.import_module("svmelm._kernels_py")


_ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE_KEY] = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(n, title, ok, detail)``.

    Lines are printed immediately (visible with -s) and repeated in the
    terminal summary so they always land in the test log.
    """
    lines = request.config.stash[_ACCEPTANCE_KEY]

    def record(n, title, ok, detail=""):
        status = {True: "PASS", False: "FAIL", None: "SKIP"}[ok]
        line = f"[{status}] criterion {n}: {title}" + (f" ({detail})" if detail else "")
        lines.append((n, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines, key=lambda t: t[0]):
            terminalreporter.write_line(line)
