import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'src'))

from catalog import builtin_map, builtin_space  # noqa: E402
from exact_linalg import FieldSpec  # noqa: E402


@pytest.fixture
def Q():
    return FieldSpec(0)


@pytest.fixture
def F2():
    return FieldSpec(2)


@pytest.fixture
def F3():
    return FieldSpec(3)


@pytest.fixture
def fields():
    return [FieldSpec(0), FieldSpec(2)]


@pytest.fixture
def space():
    return lambda name: builtin_space(name).model


@pytest.fixture
def simplicial_map():
    return lambda name: builtin_map(name).model
