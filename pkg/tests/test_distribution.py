from fractions import Fraction

import pytest
import sympy

from core.exact_linalg import RatMatrix
from core.exceptions import InputError, NotBracketGeneratingError
from services.distribution_service import (
    PolyVectorField, Rank4Type, bch_coefficients, classify_rank4, coordinate_field, evaluate,
    field_bracket, genericity_test, growth_vector_at, model_fields, symbol_at, symbol_of,
    transform_fields, variables,
)


def heisenberg_fields():
    x0, x1, _ = variables(3)
    half = sympy.Rational(1, 2)
    return [
        PolyVectorField.from_exprs(3, [1, 0, -half * x1]),
        PolyVectorField.from_exprs(3, [0, 1, half * x0]),
    ]


def test_heisenberg_bracket():
    x, y = heisenberg_fields()
    assert field_bracket(x, y).coefficient_vector() == coordinate_field(3, 2).coefficient_vector()
    assert field_bracket(x, x).is_zero()


def test_bracket_is_antisymmetric():
    x0, x1 = variables(2)
    a = PolyVectorField.from_exprs(2, [x1 ** 2, x0])
    b = PolyVectorField.from_exprs(2, [1, x0 * x1])
    assert (field_bracket(a, b) + field_bracket(b, a)).is_zero()


def test_evaluate():
    x, _ = heisenberg_fields()
    assert evaluate(x, [Fraction(0), Fraction(4), Fraction(7)]) == [1, 0, -2]
    with pytest.raises(InputError):
        evaluate(x, [Fraction(0)])


def test_heisenberg_growth_and_symbol():
    origin = [Fraction(0)] * 3
    assert growth_vector_at(heisenberg_fields(), origin).dims == (2, 3)
    s = symbol_at(heisenberg_fields(), origin)
    assert s.component_dims == (2, 1)
    assert s.algebra.dim == 3


@pytest.mark.parametrize("fixture, growth", [
    ("g2", (2, 3, 5)),
    ("so3", (3, 6)),
    ("sp6", (4, 7)),
    ("sp21", (4, 7)),
])
def test_model_field_growth(fixture, growth, request):
    n = request.getfixturevalue(fixture).negative_part()
    fields = model_fields(n)
    assert growth_vector_at(fields, [Fraction(0)] * n.dim).dims == growth
    # left invariant fields have the same growth everywhere
    elsewhere = [Fraction(1)] + [Fraction(0)] * (n.dim - 1)
    assert growth_vector_at(fields, elsewhere).dims == growth


def test_not_bracket_generating():
    fields = [coordinate_field(3, 0), coordinate_field(3, 1)]
    growth = growth_vector_at(fields, [Fraction(0)] * 3)
    assert growth.dims == (2,)
    assert not growth.bracket_generating
    with pytest.raises(NotBracketGeneratingError) as err:
        symbol_at(fields, [Fraction(0)] * 3)
    assert err.value.growth == (2,)


def test_empty_field_list():
    with pytest.raises(InputError):
        growth_vector_at([], [])


def test_coordinate_field_range():
    with pytest.raises(InputError):
        coordinate_field(2, 2)


def test_bch_coefficients():
    assert bch_coefficients(5) == (Fraction(1), Fraction(1, 2), Fraction(1, 12), Fraction(0), Fraction(-1, 720))


def test_rank4_classification(sp6, sp21):
    assert classify_rank4(symbol_of(sp21)) == Rank4Type.ELLIPTIC
    assert classify_rank4(symbol_of(sp6)) == Rank4Type.HYPERBOLIC


def test_rank4_classification_needs_rank4_symbol(g2):
    with pytest.raises(InputError):
        classify_rank4(symbol_of(g2))


@pytest.mark.parametrize("fixture, family", [("g2", "g2"), ("so3", "so_n"), ("sp6", "rank4")])
def test_flat_models_are_generic(fixture, family, request):
    report = genericity_test(symbol_of(request.getfixturevalue(fixture)), family)
    assert report.passed, report.to_dict()


def test_genericity_reports_wrong_dims(g2):
    report = genericity_test(symbol_of(g2), "so_n")
    assert not report.passed
    with pytest.raises(InputError):
        genericity_test(symbol_of(g2), "e8")


def test_heisenberg_is_not_rank4():
    s = symbol_at(heisenberg_fields(), [Fraction(0)] * 3)
    assert not genericity_test(s, "rank4").passed


def test_transform_fields():
    fields = [coordinate_field(2, 0), coordinate_field(2, 1)]
    same, _ = transform_fields(fields, RatMatrix.identity(2))
    assert [f.coefficient_vector() for f in same] == [f.coefficient_vector() for f in fields]
    swap = RatMatrix.from_dense([[0, 1], [1, 0]])
    moved, point = transform_fields(fields, swap, [Fraction(1), Fraction(2)])
    assert moved[0].coefficient_vector() == fields[1].coefficient_vector()
    assert point == [2, 1]
    with pytest.raises(InputError):
        transform_fields(fields, RatMatrix.identity(3))


def test_growth_is_invariant_under_linear_change():
    fields = heisenberg_fields()
    p = RatMatrix.from_dense([[1, 1, 0], [0, 1, 0], [0, 0, 2]])
    moved, point = transform_fields(fields, p, [Fraction(0)] * 3)
    assert growth_vector_at(moved, point).dims == (2, 3)


def test_bracket_satisfies_jacobi():
    x0, x1 = variables(2)
    a = PolyVectorField.from_exprs(2, [x1 ** 2, x0])
    b = PolyVectorField.from_exprs(2, [1, x0 * x1])
    c = PolyVectorField.from_exprs(2, [x0 ** 3 - x1, sympy.Rational(1, 3) * x0])
    total = (field_bracket(a, field_bracket(b, c))
             + field_bracket(b, field_bracket(c, a))
             + field_bracket(c, field_bracket(a, b)))
    assert total.is_zero()


def _mixing_matrix(m):
    dense = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    dense[0][1] = 1
    dense[2][m - 1] = -2
    dense[m - 1][m - 1] = 3
    return RatMatrix.from_dense(dense)


@pytest.mark.parametrize("fixture, expected", [("sp21", Rank4Type.ELLIPTIC), ("sp6", Rank4Type.HYPERBOLIC)])
def test_rank4_type_survives_coordinate_change(fixture, expected, request):
    n = request.getfixturevalue(fixture).negative_part()
    moved, point = transform_fields(model_fields(n), _mixing_matrix(n.dim), [Fraction(0)] * n.dim)
    s = symbol_at(moved, point)
    assert s.component_dims == (4, 3)
    assert classify_rank4(s) == expected
