import numpy as np
import pytest

from schottky.domain import Circle, CircularDomain
from schottky.harmonic import integrals_first_kind, solve_harmonic_measures
from schottky.prime import PrimeEvaluator


class Tools:
    """Bundle of the per-domain machinery the tests share."""

    def __init__(self, domain, order=24, length=None):
        self.domain = domain
        self.model = solve_harmonic_measures(domain, order=order)
        self.v = integrals_first_kind(self.model) if domain.g else None
        self.ev = PrimeEvaluator(domain, max_word_length=length)


@pytest.fixture(scope="session")
def disk_tools():
    return Tools(CircularDomain())


@pytest.fixture(scope="session")
def annulus_tools():
    return Tools(CircularDomain((Circle(0j, 0.25),)), length=8)


@pytest.fixture(scope="session")
def triply_tools():
    return Tools(CircularDomain((Circle(-0.5 + 0j, 0.1), Circle(0.5 + 0j, 0.1))), length=6)


def interior_points(domain, count, seed, margin=0.05):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        if domain.contains(z, margin=margin):
            out.append(z)
    return np.array(out)
