import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cobex import build_complex, simplex_complex
from cobex.buildings import build_building
from cobex.matroids import partition_matroid

RP2_FACETS = [
    (0, 1, 4), (0, 1, 5), (0, 2, 3), (0, 2, 4), (0, 3, 5),
    (1, 2, 3), (1, 2, 5), (1, 3, 4), (2, 4, 5), (3, 4, 5),
]


@pytest.fixture(scope="session")
def delta2():
    return simplex_complex(2)


@pytest.fixture(scope="session")
def delta3():
    return simplex_complex(3)


@pytest.fixture(scope="session")
def four_cycle():
    return partition_matroid(1, 2)


@pytest.fixture(scope="session")
def octahedron():
    return partition_matroid(2, 2)


@pytest.fixture(scope="session")
def rp2():
    return build_complex(RP2_FACETS)


@pytest.fixture(scope="session")
def fano():
    return build_building(1, 2)


@pytest.fixture(scope="session")
def fano_structure(fano):
    return fano.structure()
