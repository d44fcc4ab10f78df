import pytest

from services.reproduction_service import ReproductionService


def test_members():
    reproduction = ReproductionService()
    assert reproduction.members('so-split', None) == [('so-split', 3), ('so-split', 4)]
    assert reproduction.members('g2', None) == [('g2', None)]


@pytest.mark.slow
def test_g2_rows_all_pass():
    reproduction = ReproductionService(seed=7, trials=200)
    rows = reproduction.family_rows('g2', None)
    by_quantity = {r['quantity']: r for r in rows}
    assert by_quantity['dim']['computed'] == 14
    assert tuple(by_quantity['growth']['computed']) == (2, 3, 5)
    assert by_quantity['nonflat_bound']['status'] == 'cited'
    assert all(r['status'] != 'fail' for r in rows), [r for r in rows if r['status'] == 'fail']


def test_unknown_family_envelope():
    result = ReproductionService().process_family('e8')
    assert not result['success']
    assert 'timestamp' in result
