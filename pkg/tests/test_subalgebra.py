from fractions import Fraction

import numpy as np
import pytest

from core.exact_linalg import Subspace
from core.exceptions import InputError
from services.algebra_service import build_so_split
from services.subalgebra_service import (
    GradedSubalgebra, ModularStructure, bracket_closure, gap_scan, random_generators,
    stabilizer_profile, subspace_stabilizer_dim, verify_subalgebra, witness_bk, witness_catalog,
)


@pytest.mark.parametrize("n, k, dim", [(3, 2, 16), (3, 1, 14), (4, 3, 29)])
def test_bk_dimensions(n, k, dim):
    b = witness_bk(n, k)
    assert b.dim == dim
    assert verify_subalgebra(b).passed


def test_bk_maximal_witness_formula():
    for n in (3, 4):
        assert witness_bk(n, n - 1).dim == 2 * n * n - n + 1


def test_bk_range():
    with pytest.raises(InputError):
        witness_bk(3, 3)


def test_g2_catalog(g2):
    catalog = {b.name: b for b in witness_catalog(g2)}
    assert catalog['p'].dim == 9
    assert catalog['g_- + g_0'].dim == 9
    assert catalog['g_- + b0 + line'].dim == 9
    for b in catalog.values():
        assert verify_subalgebra(b).passed


def test_rank4_catalogs(sp6, sp21):
    sp6_dims = {b.name: b.dim for b in witness_catalog(sp6)}
    assert sp6_dims['upper block'] == 16
    assert {b.name: b.dim for b in witness_catalog(sp21)}['p'] == 14


def test_non_subalgebra_fails_closure(g2):
    # g_-1 + g_1 is not closed: [g_-1, g_1] lands in g_0
    b = GradedSubalgebra.from_vectors(g2, {
        -1: [{i: Fraction(1)} for i in g2.component(-1)],
        1: [{i: Fraction(1)} for i in g2.component(1)],
    })
    report = verify_subalgebra(b)
    assert not report.passed
    assert report.get('closure').data['dim'] == 4


def test_component_outside_its_degree(g2):
    b = GradedSubalgebra.from_vectors(g2, {1: [{g2.component(-1)[0]: Fraction(1)}]})
    with pytest.raises(InputError):
        verify_subalgebra(b)


def test_closure_of_degree_minus_one_is_g_minus(g2):
    closure = bracket_closure(g2, [{i: Fraction(1)} for i in g2.component(-1)])
    assert closure.dim == 5
    assert closure.profile() == (2, 1, 2, 0, 0, 0, 0)
    assert verify_subalgebra(closure).passed


def test_modular_closure_is_a_lower_bound(g2):
    rng = np.random.default_rng(3)
    modular = ModularStructure(g2)
    for _ in range(20):
        gens = random_generators(g2, rng)
        if not gens:
            continue
        exact = bracket_closure(g2, gens).dim
        grouped = {}
        for v in gens:
            grouped.setdefault(g2.degrees[next(iter(v))], []).append(v)
        assert modular.closure_dim(grouped) <= exact


def test_gap_scan_g2_finds_no_violation(g2):
    scan = gap_scan(g2, (9, 14), trials=60, seed=7)
    assert scan['violations'] == []
    assert sum(scan['histogram'].values()) + scan['full_closures'] == 60


def test_gap_scan_is_independent_of_workers(g2):
    one = gap_scan(g2, (9, 14), trials=24, seed=2, workers=1)
    two = gap_scan(g2, (9, 14), trials=24, seed=2, workers=2)
    assert one == two


def test_gap_scan_reports_planted_violation(g2):
    # g_- has dimension 5, so an interval around 5 must be violated by some trial
    scan = gap_scan(g2, (4, 6), trials=500, seed=1)
    assert scan['violations']
    assert all(4 < v['dim'] < 6 for v in scan['violations'])


def test_gap_scan_needs_trials(g2):
    with pytest.raises(InputError):
        gap_scan(g2, (9, 14), trials=0, seed=0)


@pytest.mark.slow
@pytest.mark.parametrize("fixture, forbidden", [("sp6", (16, 21)), ("sp21", (14, 21))])
def test_gap_scan_rank4(fixture, forbidden, request):
    scan = gap_scan(request.getfixturevalue(fixture), forbidden, trials=300, seed=0)
    assert scan['violations'] == []


@pytest.mark.parametrize("n", [3, 4])
def test_stabilizer_profile(n):
    profile = stabilizer_profile(n)
    assert profile['values'] == profile['formula']
    assert profile['max'] == n * n - n + 1
    assert profile['argmax'] == sorted({1, n - 1})


def test_line_stabilizers(so3, g2):
    g = so3
    w = Subspace.from_vectors([{g.component(1)[0]: Fraction(1)}], g.dim)
    assert subspace_stabilizer_dim(g, 1, w) == 7
    line = Subspace.from_vectors([{g2.component(1)[0]: Fraction(1)}], g2.dim)
    assert subspace_stabilizer_dim(g2, 1, line) == 3


def test_stabilizer_degree_range(so3):
    with pytest.raises(InputError):
        subspace_stabilizer_dim(so3, 3, Subspace.zero(so3.dim))


@pytest.mark.slow
def test_stabilizer_profile_n5():
    profile = stabilizer_profile(5)
    assert profile['values'] == {1: 21, 2: 19, 3: 19, 4: 21}
    assert build_so_split(5).dim == 55
