import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from congen.algebra import make_abelian  # noqa: E402
from congen import zoo  # noqa: E402

DATA = Path(__file__).resolve().parents[1] / "data"


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def z4():
    return zoo.cyclic(4)


@pytest.fixture(scope="session")
def z4xz2():
    return make_abelian([4, 2])


@pytest.fixture(scope="session")
def z9xz3():
    return make_abelian([9, 3])


@pytest.fixture(scope="session")
def d8():
    return zoo.dihedral(4)


@pytest.fixture(scope="session")
def s3():
    return zoo.symmetric(3)
