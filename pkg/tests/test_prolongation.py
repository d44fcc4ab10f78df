from fractions import Fraction

import pytest

from core.exact_linalg import Subspace
from core.exceptions import InputError
from models.algebra_base import NilpotentGradedAlgebra
from services.algebra_service import adjoint_derivations, graded_derivations
from services.prolongation_service import (
    compare_with_algebra, derivation_algebra_check, derivation_commutator, tanaka_prolong,
)
from tests.conftest import heisenberg


def test_g2_prolongation_matches_degree_by_degree(g2):
    result = tanaka_prolong(g2.negative_part())
    assert result.terminated
    assert result.dims_tuple() == (2, 1, 2, 4, 2, 1, 2)
    assert result.total == 14
    assert compare_with_algebra(result, g2).passed


@pytest.mark.parametrize("fixture", ["so3", "sp6", "sp21"])
def test_prolongation_recovers_the_algebra(fixture, request):
    g = request.getfixturevalue(fixture)
    result = tanaka_prolong(g.negative_part())
    assert result.terminated
    assert result.total == g.dim
    assert compare_with_algebra(result, g).passed


def test_heisenberg_prolongation_does_not_terminate():
    result = tanaka_prolong(heisenberg(), max_degree=2)
    assert not result.terminated
    assert result.truncated_at == 2
    assert result.component_dims[0] == 4


def test_zero_a0_terminates_immediately(g2):
    n = g2.negative_part()
    result = tanaka_prolong(n, Subspace.zero(n.dim * n.dim))
    assert result.terminated
    assert result.total == n.dim


def test_a0_from_adjoint_action(g2):
    n = g2.negative_part()
    a0 = Subspace.from_vectors(
        adjoint_derivations(g2, [{s: Fraction(1)} for s in g2.component(0)]), n.dim * n.dim)
    assert a0.dim == 4
    assert derivation_algebra_check(n, a0).passed
    assert tanaka_prolong(n, a0).total == 14


def test_mismatch_is_reported(g2):
    n = g2.negative_part()
    # grading element only: a one-dimensional a0
    e = g2.grading_element()
    a0 = Subspace.from_vectors(adjoint_derivations(g2, [e]), n.dim * n.dim)
    report = compare_with_algebra(tanaka_prolong(n, a0), g2)
    assert not report.passed
    assert "dimension mismatch at degree 0" in report.get('dims').detail


def test_a0_outside_der0_is_rejected():
    n = heisenberg()
    # e0 -> e2 raises degree by -1, so it is not a degree zero derivation
    bad = Subspace.from_vectors([{2 * n.dim + 0: Fraction(1)}], n.dim * n.dim)
    check = derivation_algebra_check(n, bad)
    assert not check.get('inside_der0').passed
    with pytest.raises(InputError):
        tanaka_prolong(n, bad)


def test_der0_is_closed_under_commutator():
    n = heisenberg()
    der0 = graded_derivations(n, 0)
    basis = der0.vectors()
    for a in basis:
        for b in basis:
            assert der0.contains_vector(derivation_commutator(a, b, n.dim))


def test_not_generated_in_degree_minus_one():
    n = NilpotentGradedAlgebra.from_table("abelian", [-1, -2], {}, 2)
    with pytest.raises(InputError):
        tanaka_prolong(n, Subspace.zero(4), max_degree=1)


def test_max_degree_must_be_positive():
    with pytest.raises(InputError):
        tanaka_prolong(heisenberg(), max_degree=0)


def _mixed_basis(g):
    """e_i + e_j for consecutive basis vectors of the same degree; triangular, so invertible"""
    columns = [{i: Fraction(1)} for i in range(g.dim)]
    for d in range(-g.k, g.k + 1):
        comp = g.component(d)
        for a, b in zip(comp, comp[1:]):
            columns[a] = {a: Fraction(1), b: Fraction(1)}
    return columns


@pytest.mark.parametrize("fixture", ["g2", "sp6"])
def test_prolongation_is_basis_independent(fixture, request):
    g = request.getfixturevalue(fixture)
    mixed = g.change_basis(_mixed_basis(g), name=f"{g.name} mixed")
    assert mixed.dims_profile() == g.dims_profile()
    result = tanaka_prolong(mixed.negative_part())
    assert result.dims_tuple() == tanaka_prolong(g.negative_part()).dims_tuple()
    assert compare_with_algebra(result, mixed).passed


def test_change_basis_rejects_mixed_degrees(g2):
    columns = [{i: Fraction(1)} for i in range(g2.dim)]
    a, b = g2.component(-1)[0], g2.component(1)[0]
    columns[a] = {a: Fraction(1), b: Fraction(1)}
    with pytest.raises(InputError):
        g2.change_basis(columns)
