"""
Shared fixtures for the metafact test suites.
"""

import numpy as np
import pytest

from metafact.config.settings import settings as metafact_settings


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def rank_k(rng):
    """Factory for an m x n matrix of exact rank k built from Gaussian factors."""

    def build(m: int, n: int, k: int) -> np.ndarray:
        return rng.standard_normal((m, k)) @ rng.standard_normal((k, n))

    return build


@pytest.fixture
def settings_override(monkeypatch):
    """Patch fields on the live settings object for one test."""

    def apply(**fields):
        for name, value in fields.items():
            monkeypatch.setattr(metafact_settings, name, value)

    return apply
