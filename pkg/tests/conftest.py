"""Shared algebras for the test suite"""

from fractions import Fraction

import pytest

from models.algebra_base import GradedLieAlgebra, NilpotentGradedAlgebra
from services.algebra_service import build_g2_split, build_so_split, build_sp6_split, build_sp21


def heisenberg() -> NilpotentGradedAlgebra:
    """[e0, e1] = e2 with degrees (-1, -1, -2)"""
    return NilpotentGradedAlgebra.from_table(
        "heis3", [-1, -1, -2], {(0, 1): {2: Fraction(1)}}, 2,
    )


def broken_jacobi() -> GradedLieAlgebra:
    """[e0, e1] = e1, [e0, e2] = e2, [e1, e2] = e0 fails Jacobi on (0, 1, 2)"""
    return GradedLieAlgebra.from_table(
        "broken", [0, 0, 0],
        {(0, 1): {1: Fraction(1)}, (0, 2): {2: Fraction(1)}, (1, 2): {0: Fraction(1)}},
        1,
    )


@pytest.fixture(scope="session")
def g2():
    return build_g2_split()


@pytest.fixture(scope="session")
def so3():
    return build_so_split(3)


@pytest.fixture(scope="session")
def sp6():
    return build_sp6_split()


@pytest.fixture(scope="session")
def sp21():
    return build_sp21()


@pytest.fixture
def heis():
    return heisenberg()
