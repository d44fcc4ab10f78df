from fractions import Fraction

import pytest

from core.exact_linalg import rank
from core.exceptions import InputError
from models.algebra_base import FamilyBase, GradedLieAlgebra
from services.algebra_service import (
    AlgebraService, build_so_split, graded_derivations, jacobiator, killing_form, validate,
)
from tests.conftest import broken_jacobi, heisenberg


@pytest.mark.parametrize("n, dim, profile", [
    (3, 21, (3, 3, 9, 3, 3)),
    (4, 36, (6, 4, 16, 4, 6)),
])
def test_so_split_dimensions(n, dim, profile):
    g = build_so_split(n)
    assert g.dim == dim == 2 * n * n + n
    assert g.dims_profile() == profile
    assert validate(g).passed


def test_g2_grading(g2):
    assert g2.dim == 14
    assert g2.dims_profile() == (2, 1, 2, 4, 2, 1, 2)
    assert g2.k == 3


def test_rank4_families_share_grading(sp6, sp21):
    assert sp6.dims_profile() == sp21.dims_profile() == (3, 4, 7, 4, 3)


@pytest.mark.parametrize("fixture", ["g2", "so3", "sp6", "sp21"])
def test_builtin_families_validate(fixture, request):
    g = request.getfixturevalue(fixture)
    report = validate(g)
    assert report.passed, report.to_dict()
    assert [c.name for c in report.checks] == ['antisymmetry', 'jacobi', 'grading', 'generation', 'killing']


@pytest.mark.parametrize("fixture", ["g2", "sp21"])
def test_killing_form_nondegenerate(fixture, request):
    g = request.getfixturevalue(fixture)
    assert rank(killing_form(g)) == g.dim


def test_broken_jacobi_is_reported():
    g = broken_jacobi()
    assert jacobiator(g, 0, 1, 2)
    report = validate(g)
    assert not report.passed
    assert report.get('jacobi').data['triple'] == [0, 1, 2]


def test_grading_element(g2):
    e = g2.grading_element()
    assert e is not None
    for i, d in enumerate(g2.degrees):
        assert g2.bracket(e, {i: Fraction(1)}) == ({i: Fraction(d)} if d else {})


def test_negative_part_is_nilpotent(g2):
    n = g2.negative_part()
    assert n.dim == 5
    assert n.depth == 3
    assert len(n.generators()) == 2


@pytest.mark.parametrize("fixture, expected", [("g2", 4), ("so3", 9), ("sp6", 7), ("sp21", 7)])
def test_degree_zero_derivations(fixture, expected, request):
    n = request.getfixturevalue(fixture).negative_part()
    assert graded_derivations(n, 0).dim == expected


def test_heisenberg_derivations():
    n = heisenberg()
    # gl(2) acting on the degree -1 part
    assert graded_derivations(n, 0).dim == 4


def test_so_split_rejects_small_n():
    with pytest.raises(InputError):
        build_so_split(2)


def test_registry():
    service = AlgebraService()
    assert service.get_available_families() == ['so-split', 'g2', 'sp6-split', 'sp21']
    with pytest.raises(InputError):
        service.get_family('e8')
    result = service.process_build('g2')
    assert result['success']
    assert result['summary']['dim'] == 14
    assert not service.process_build('so-split', n=1)['success']


def test_family_config_values():
    config = FamilyBase.load_config('so-split')
    assert config.expected_value('dim', 4) == 36
    assert config.expected_value('max_stabilizer', 5) is None
    assert config.cited_bound(3) == 13
    assert FamilyBase.load_config('sp21').lower_bound('h2_highest_weights') == 2


def test_out_of_range_bracket_is_input_error():
    with pytest.raises(InputError):
        GradedLieAlgebra(name="bad", degrees=(-1, -1), brackets=((0, 1, ((5, Fraction(1)),)),), k=1)


def test_filtration_is_compatible_with_bracket(g2):
    for i in range(-3, 4):
        for j in range(-3, 4):
            target = set(g2.filtration(i + j))
            for a in g2.filtration(i):
                for b in g2.filtration(j):
                    assert set(g2.bracket_basis(a, b)) <= target
    assert len(g2.filtration(0)) == 9
    assert len(g2.filtration(-3)) == 14
