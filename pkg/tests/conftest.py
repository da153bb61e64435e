import zlib

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

# Deterministic hypothesis runs: no example database, fixed derivation.
settings.register_profile(
    "det",
    derandomize=True,
    max_examples=60,
    deadline=None,
    suppress_health_check=(HealthCheck.too_slow,),
)
settings.load_profile("det")


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def make_gen(*key) -> np.random.Generator:
    """Fresh generator keyed by a test-local tuple of ints/strings."""
    parts = [zlib.crc32(k.encode()) if isinstance(k, str) else int(k) for k in key]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(parts)))
