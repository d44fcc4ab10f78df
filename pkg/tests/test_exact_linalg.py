from fractions import Fraction

import numpy as np
import pytest

from core.exact_linalg import (
    RatMatrix, Subspace, fraction_to_str, inertia, inverse, kernel, multimodular_rank_check,
    rank, rref, solve, subspace_ops,
)
from core.exceptions import InputError
from core.modular import crt_combine, is_prime, rank_mod_p, rational_reconstruction


def test_rank_and_kernel_of_singular_matrix():
    m = RatMatrix.from_dense([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert rank(m) == 2
    ker = kernel(m)
    assert ker.dim == 1
    assert m.apply(ker.vectors()[0]) == {}


def test_rank_nullity_on_random_integer_matrices():
    rng = np.random.default_rng(11)
    for _ in range(10):
        rows, cols = rng.integers(1, 9, size=2)
        m = RatMatrix.from_dense(rng.integers(-2, 3, size=(rows, cols)).tolist())
        assert rank(m) + kernel(m).dim == cols
        assert rank(m) == rank(m.transpose())


def test_rref_is_canonical():
    a = RatMatrix.from_dense([[2, 4], [1, 3]])
    b = RatMatrix.from_dense([[1, 3], [3, 7]])
    assert rref(a).rows == rref(b).rows
    assert rref(a).pivots == (0, 1)


def test_rref_of_large_matrix_matches_exact_rank():
    rng = np.random.default_rng(5)
    dense = rng.integers(-3, 4, size=(40, 30)).tolist()
    # duplicate a row combination so the rank drops below 30
    dense.append([a + 2 * b for a, b in zip(dense[0], dense[1])])
    m = RatMatrix.from_dense(dense)
    check = multimodular_rank_check(m, seed=1)
    assert check['agree']
    assert check['exact'] == rank(m)


def test_solve_and_inconsistent_system():
    m = RatMatrix.from_dense([[1, 1], [1, -1]])
    x = solve(m, {0: Fraction(3), 1: Fraction(1)})
    assert x == {0: Fraction(2), 1: Fraction(1)}
    with pytest.raises(InputError):
        solve(RatMatrix.from_dense([[1, 1], [2, 2]]), {0: Fraction(1), 1: Fraction(3)})


def test_inverse():
    m = RatMatrix.from_dense([[2, 1], [7, 4]])
    assert (m @ inverse(m)).dense() == RatMatrix.identity(2).dense()
    with pytest.raises(InputError):
        inverse(RatMatrix.from_dense([[1, 2], [2, 4]]))


@pytest.mark.parametrize("dense, expected", [
    ([[1, 0, 0], [0, -1, 0], [0, 0, 0]], (1, 1, 1)),
    ([[0, 1], [1, 0]], (1, 1, 0)),
    ([[2, 1], [1, 2]], (2, 0, 0)),
    ([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]], (2, 2, 0)),
])
def test_inertia(dense, expected):
    assert inertia(RatMatrix.from_dense(dense)) == expected


def test_inertia_rejects_non_symmetric():
    with pytest.raises(InputError):
        inertia(RatMatrix.from_dense([[1, 2], [0, 1]]))


def test_subspace_equality_by_rref():
    a = Subspace.from_vectors([{0: 1, 1: 1}, {1: 1}], 3)
    b = Subspace.from_vectors([{0: 1}, {1: 2}], 3)
    assert a == b
    assert hash(a) == hash(b)


def test_subspace_ops():
    a = Subspace.from_vectors([[1, 0, 0, 0], [0, 1, 0, 0]], 4)
    b = Subspace.from_vectors([[0, 1, 0, 0], [0, 0, 1, 0]], 4)
    ops = subspace_ops(a, b)
    assert ops.sum.dim == 3
    assert ops.intersection.dim == 1
    assert ops.intersection.contains_vector({1: Fraction(5)})
    assert not ops.contains
    assert a.sum(b).contains(a)


def test_subspace_coordinates_and_reduce():
    s = Subspace.from_vectors([{0: 1, 2: 1}, {1: 1}], 3)
    assert s.coordinates({0: Fraction(2), 1: Fraction(3), 2: Fraction(2)}) == [2, 3]
    assert s.reduce({2: Fraction(1)}) == {2: Fraction(1)}
    with pytest.raises(InputError):
        s.coordinates({2: Fraction(1)})


def test_ambient_mismatch():
    with pytest.raises(InputError):
        Subspace.zero(2).sum(Subspace.zero(3))


def test_modular_helpers():
    assert is_prime(2 ** 31 - 1)
    assert not is_prime(2 ** 31 + 1)
    assert crt_combine([2, 3], [3, 5]) == (8, 15)
    p = 2 ** 31 - 1
    a = 3 * pow(7, -1, p) % p
    assert rational_reconstruction(a, p) == Fraction(3, 7)
    assert rank_mod_p(np.array([[1, 2], [2, 4]], dtype=np.int64), 7) == 1


def test_fraction_to_str():
    assert fraction_to_str(Fraction(0)) == "0/1"
    assert fraction_to_str(Fraction(-3, 6)) == "-1/2"
