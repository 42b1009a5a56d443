"""Shared fixtures and helpers for the test suite."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from schurpole import BenchConfig, generate_random_instance

# Numerical tests can be slow on loaded CI boxes; wall-clock deadlines only
# produce flaky failures there.
settings.register_profile(
    "numeric",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("numeric")


def make_instance(n, rank_e, m, r, trial=0, seed=0):
    """Deterministic random problem with the benchmark generator."""
    cfg = BenchConfig(n=n, rank_e=rank_e, m=m, trials=max(trial + 1, 1), seed=seed)
    return generate_random_instance(cfg, r=r, trial=trial)


def rng_matrix(seed, rows, cols, scale=1.0):
    """Reproducible dense Gaussian matrix keyed by an integer seed."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, rows, cols]))
    return scale * rng.standard_normal((rows, cols))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
