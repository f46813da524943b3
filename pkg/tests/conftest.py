import numpy as np
import pytest
from hypothesis import settings

from rsma_lms import backend

settings.register_profile("ci", deadline=None, max_examples=50)
settings.load_profile("ci")


@pytest.fixture(scope="session", autouse=True)
def _warm_backend():
    # JIT-compile the kernels once so no individual test pays for it.
    backend.warmup()


@pytest.fixture
def rng():
    return np.random.default_rng(421)
