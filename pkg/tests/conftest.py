import math

import numpy as np
import pytest

from src.gaussian_core import StandardForm, symmetric_state, pure_symmetric_state


@pytest.fixture
def vacuum():
    return StandardForm(0.5, 0.5, 0.0, 0.0)


@pytest.fixture
def pure_n1():
    return pure_symmetric_state(1.0)


@pytest.fixture
def thermal():
    """Uncorrelated thermal state, n = m = 1"""
    return StandardForm(1.0, 1.0, 0.0, 0.0)


@pytest.fixture
def mixed_c06():
    return symmetric_state(1.0, 0.6)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def random_symmetric_states():
    """Factory for seeded physical symmetric states (n, c) with 0 <= c <= sqrt(n^2 - 1/4)"""
    def make(count, seed=0, n_max=5.0):
        generator = np.random.default_rng(seed)
        states = []
        for _ in range(count):
            n = generator.uniform(0.5, n_max)
            c = generator.uniform(0.0, math.sqrt(n * n - 0.25))
            states.append((n, c))
        return states
    return make
