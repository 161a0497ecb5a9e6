import functools
import os

import hypothesis
import pytest

from towns.search import Budget, extremal_search
from towns.setcore import TownSpec

hypothesis.settings.register_profile("default", max_examples=100, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@functools.lru_cache(maxsize=None)
def solve(a, b, k, n, symmetry=True):
    return extremal_search(TownSpec(n, k, a, b), Budget(max_seconds=600), symmetry=symmetry)


@pytest.fixture(scope="session")
def solved():
    """Memoised extremal_search keyed by (a, b, k, n)."""
    return solve


def pytest_terminal_summary(terminalreporter):
    """Repeat the acceptance verdict lines at the end of the run."""
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
