import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from posetahedra import corpus


@pytest.fixture
def c3():
    return corpus.chain(3)


@pytest.fixture
def c4():
    return corpus.chain(4)


@pytest.fixture
def w5():
    return corpus.w5()


@pytest.fixture
def n4():
    return corpus.n4()


@pytest.fixture
def h6():
    return corpus.h6()


@pytest.fixture
def claw3():
    return corpus.claw(3)
