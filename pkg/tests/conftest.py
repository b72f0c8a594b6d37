import pytest

from sgforest import _kernels, from_gaps


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # keep JIT compilation out of individual tests (and out of timed runs)
    _kernels.warmup()


def ordinary(m: int, genus_bound: int):
    """State of {0} followed by everything from m on (gaps 1..m-1)."""
    return from_gaps(range(1, m), genus_bound)
