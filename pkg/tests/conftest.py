import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from spectralift import corpus
from spectralift.polyfun import stratify

_STRAT_CACHE = {}


def cached_stratification(f):
    """Stratifications are pure values; share them across tests."""
    key = (f.name, f.n, f.symmetry_mode)
    if key not in _STRAT_CACHE:
        _STRAT_CACHE[key] = stratify(f)
    return _STRAT_CACHE[key]


@pytest.fixture(scope="session")
def l1_2():
    return corpus.ell1(2)


@pytest.fixture(scope="session")
def l1_3():
    return corpus.ell1(3)


@pytest.fixture(scope="session")
def strat_l1_2(l1_2):
    return cached_stratification(l1_2)


@pytest.fixture(scope="session")
def strat_l1_3(l1_3):
    return cached_stratification(l1_3)
