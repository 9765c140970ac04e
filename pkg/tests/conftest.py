import pytest

from holonomy_lab import _kernels


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # Pay the one-time JIT cost before any timed assertion runs.
    _kernels.warmup()
