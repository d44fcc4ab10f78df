from fractions import Fraction

import numpy as np
import pytest

from core.exceptions import InputError
from models.algebra_base import FamilyBase
from services.cohomology_service import (
    class_coordinates, class_from_coordinates, class_stabilizer, class_stabilizer_dim,
    cochain_differential, cohomology_dims, common_annihilator_dim, euler_characteristic,
    g0_action_on_h2, h1_negative_test, max_stabilizer_probe, service,
)
from tests.conftest import broken_jacobi


@pytest.mark.parametrize("fixture", ["g2", "so3", "sp6", "sp21"])
def test_h1_is_negative(fixture, request):
    assert h1_negative_test(request.getfixturevalue(fixture))


def test_g2_h2_is_one_five_dimensional_component(g2):
    dims = cohomology_dims(g2, 2)
    assert sum(dims.values()) == 5
    assert len(dims) == 1


@pytest.mark.parametrize("fixture", ["g2", "so3"])
def test_differential_squares_to_zero(fixture, request):
    g = request.getfixturevalue(fixture)
    svc = service(g)
    for q in range(0, 4):
        for h in svc.homogeneities(q):
            assert cochain_differential(g, q, h).composition_is_zero(), (q, h)


def test_euler_characteristic_identity(g2):
    svc = service(g2)
    homogeneities = sorted({h for q in range(svc.m + 1) for h in svc.homogeneities(q)})
    for h in homogeneities:
        chain, homology = euler_characteristic(g2, h)
        assert chain == homology


@pytest.mark.slow
def test_euler_characteristic_identity_so3(so3):
    svc = service(so3)
    for h in sorted({h for q in range(svc.m + 1) for h in svc.homogeneities(q)}):
        chain, homology = euler_characteristic(so3, h)
        assert chain == homology


def test_h0_is_the_top_component(g2):
    # cochains of degree 0 are elements of g; cocycles are killed by g_-
    dims = cohomology_dims(g2, 0)
    assert sum(dims.values()) == 2


def test_invalid_algebra_is_rejected():
    with pytest.raises(InputError):
        cohomology_dims(broken_jacobi(), 1)


def test_g0_action_is_linear_and_respects_classes(g2):
    h = service(g2).nonzero_h2()[0]
    c = class_from_coordinates(g2, h, [Fraction(1), 0, 0, 0, Fraction(2)])
    a = {g2.component(0)[0]: Fraction(1)}
    once = g0_action_on_h2(g2, a, c)
    twice = g0_action_on_h2(g2, a, c.scaled(Fraction(3)))
    x1, _ = class_coordinates(g2, once)
    x3, _ = class_coordinates(g2, twice)
    assert x3 == [3 * v for v in x1]


def test_zero_action_gives_zero_class(g2):
    h = service(g2).nonzero_h2()[0]
    c = class_from_coordinates(g2, h, [Fraction(1)] * 5)
    zero = g0_action_on_h2(g2, {}, c)
    assert class_coordinates(g2, zero)[0] == [0] * 5


def test_action_needs_degree_zero_element(g2):
    h = service(g2).nonzero_h2()[0]
    c = class_from_coordinates(g2, h, [Fraction(1)] * 5)
    with pytest.raises(InputError):
        g0_action_on_h2(g2, {g2.component(-1)[0]: Fraction(1)}, c)


def test_stabilizer_elements_kill_the_class(g2):
    h = service(g2).nonzero_h2()[0]
    c = class_from_coordinates(g2, h, [Fraction(1), 0, 0, 0, 0])
    pairs = class_stabilizer(g2, c)
    assert len(pairs) == class_stabilizer_dim(g2, c)
    for b, _ in pairs:
        moved, _ = class_coordinates(g2, g0_action_on_h2(g2, b, c))
        assert not any(moved)


def test_zero_class_has_no_stabilizer_dim(g2):
    h = service(g2).nonzero_h2()[0]
    with pytest.raises(InputError):
        class_stabilizer_dim(g2, class_from_coordinates(g2, h, [0] * 5))


def test_wrong_coordinate_count(g2):
    h = service(g2).nonzero_h2()[0]
    with pytest.raises(InputError):
        class_from_coordinates(g2, h, [Fraction(1)] * 4)


def test_whole_g0_annihilates_nothing(g2):
    assert common_annihilator_dim(g2, [{s: Fraction(1)} for s in g2.component(0)]) == 0
    assert common_annihilator_dim(g2, []) == 5


def test_probe_g2(g2):
    probe = max_stabilizer_probe(g2, seed=0, trials=10)
    assert probe.best_dim == 2
    assert probe.certified_weights


@pytest.mark.slow
@pytest.mark.parametrize("fixture, expected", [("so3", 5), ("sp6", 5), ("sp21", 5)])
def test_probe_maxima(fixture, expected, request):
    probe = max_stabilizer_probe(request.getfixturevalue(fixture), seed=0, trials=10)
    assert probe.best_dim == expected


@pytest.mark.slow
def test_probe_so4():
    from services.algebra_service import build_so_split
    assert max_stabilizer_probe(build_so_split(4), seed=0, trials=5).best_dim == 10


@pytest.mark.slow
def test_h1_is_negative_so5():
    from services.algebra_service import build_so_split
    assert h1_negative_test(build_so_split(5))


@pytest.mark.parametrize("fixture, code, n", [("sp6", "sp6-split", None), ("sp21", "sp21", None), ("so3", "so-split", 3)])
def test_h2_matches_recorded_values(fixture, code, n, request):
    dims = {str(h): d for h, d in sorted(cohomology_dims(request.getfixturevalue(fixture), 2).items()) if d}
    config = FamilyBase.load_config(code)
    assert dims == config.expected_value('h2_by_homogeneity', n)
    assert sum(dims.values()) == config.expected_value('h2_total', n)


@pytest.mark.parametrize("fixture", ["sp6", "sp21"])
def test_rank4_h2_has_two_pieces(fixture, request):
    dims = cohomology_dims(request.getfixturevalue(fixture), 2)
    assert len([h for h, d in dims.items() if d]) >= 2


def _random_g0(g, rng):
    a = {s: Fraction(int(rng.integers(-2, 3))) for s in g.component(0)}
    return {s: v for s, v in a.items() if v}


@pytest.mark.parametrize("fixture", ["g2", "sp6"])
def test_g0_action_is_a_representation(fixture, request):
    g = request.getfixturevalue(fixture)
    rng = np.random.default_rng(5)
    svc = service(g)
    for h in svc.nonzero_h2():
        size = svc.h2_module(h).dim
        for _ in range(3):
            a, b = _random_g0(g, rng), _random_g0(g, rng)
            c = class_from_coordinates(g, h, [Fraction(int(v)) for v in rng.integers(-3, 4, size=size)])
            ab_c, _ = class_coordinates(g, g0_action_on_h2(g, g.bracket(a, b), c))
            a_b_c, _ = class_coordinates(g, g0_action_on_h2(g, a, g0_action_on_h2(g, b, c)))
            b_a_c, _ = class_coordinates(g, g0_action_on_h2(g, b, g0_action_on_h2(g, a, c)))
            assert ab_c == [x - y for x, y in zip(a_b_c, b_a_c)]
