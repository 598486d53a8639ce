import numpy as np
import pytest

from bgrdmft.functional import SearchOptions
from bgrdmft.operators import build_interaction_matrix, hubbard_interaction
from bgrdmft.polytope import build_domain
from bgrdmft.sectors import enumerate_sector


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)


def _bundle(d, N, P):
    sector = enumerate_sector(d, N, P)
    Wmat = build_interaction_matrix(hubbard_interaction(d), sector)
    poly = build_domain(sector)
    return sector, Wmat, poly


@pytest.fixture(scope="session")
def hub330():
    return _bundle(3, 3, 0)


@pytest.fixture(scope="session")
def hub331():
    return _bundle(3, 3, 1)


@pytest.fixture(scope="session")
def hub240():
    return _bundle(2, 4, 0)


@pytest.fixture(scope="session")
def hub360():
    return _bundle(3, 6, 0)


@pytest.fixture(scope="session")
def fast_opts():
    # Smaller multistart budget for module-level tests; the acceptance suite
    # exercises the full default solver.
    return SearchOptions(n_starts=16, seed=3)
