import os

import pytest


@pytest.fixture(scope="session")
def jobs():
    """Worker count for parallel test runs (env SWETBC_TEST_JOBS, default 2)."""
    return max(1, int(os.environ.get("SWETBC_TEST_JOBS", "2")))
