from functools import lru_cache

import pytest

from dimless_uncertainty.eigensolver import solve
from dimless_uncertainty.model import make_potential


@lru_cache(maxsize=None)
def cached_spectrum(family: str, b: int | None, n_states: int, points: int = 4001):
    spec = make_potential(family) if b is None else make_potential(family, b)
    return solve(spec, n_states, points)


@pytest.fixture(scope="session")
def spectra():
    return cached_spectrum
