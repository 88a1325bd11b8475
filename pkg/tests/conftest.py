import numpy as np
import pytest
from hypothesis import settings

# deterministic property runs: same examples on every invocation
settings.register_profile("fsa", derandomize=True, deadline=None, max_examples=60)
settings.load_profile("fsa")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
