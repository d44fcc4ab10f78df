import json

import pytest

from app.main import EXIT_FAILED, EXIT_INPUT, EXIT_OK, main
from services.distribution_service import coordinate_field
from tests.conftest import broken_jacobi
from tests.test_distribution import heisenberg_fields
from utils.serialization import AlgebraDocument, FieldsDocument, dumps


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_build_so_split(capsys):
    code, out = run_cli(capsys, 'build', 'so-split', '--n', '3')
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc['dim'] == 21
    assert len(doc['degrees']) == 21


def test_build_output_is_deterministic(capsys):
    _, first = run_cli(capsys, 'build', 'g2')
    _, second = run_cli(capsys, 'build', '--family', 'g2')
    assert first == second


def test_check_reports_broken_jacobi(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text(dumps(AlgebraDocument.from_algebra(broken_jacobi())))
    code, out = run_cli(capsys, 'check', '--input', str(path))
    assert code == EXIT_FAILED
    report = json.loads(out)
    jacobi = next(c for c in report['checks'] if c['name'] == 'jacobi')
    assert jacobi['data']['triple'] == [0, 1, 2]


def test_malformed_json_is_input_error(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{\"name\": ")
    code, out = run_cli(capsys, 'check', '--input', str(path))
    assert code == EXIT_INPUT
    assert 'error' in json.loads(out)


def test_unknown_family(capsys):
    code, _ = run_cli(capsys, 'build', 'e8')
    assert code == EXIT_INPUT


def test_missing_input_file(capsys, tmp_path):
    code, _ = run_cli(capsys, 'check', '--input', str(tmp_path / "nowhere.json"))
    assert code == EXIT_INPUT


def test_cohomology_and_output_file(capsys, tmp_path):
    target = tmp_path / "h2.json"
    code, out = run_cli(capsys, 'cohomology', 'g2', '--q', '2', '--output', str(target))
    assert code == EXIT_OK
    table = json.loads(out)
    assert table['total'] == 5
    assert json.loads(target.read_text()) == table


def test_witness_bk(capsys):
    code, out = run_cli(capsys, 'witness', '--n', '3', '--k', '2')
    assert code == EXIT_OK
    assert json.loads(out)['witnesses'][0]['dim'] == 16


def test_witness_k_needs_n(capsys):
    code, _ = run_cli(capsys, 'witness', '--k', '2')
    assert code == EXIT_INPUT


def test_scan_gap_exit_codes(capsys):
    code, out = run_cli(capsys, 'scan-gap', 'g2', '--trials', '40', '--seed', '3')
    assert code == EXIT_OK
    assert json.loads(out)['forbidden'] == [9, 14]
    code, _ = run_cli(capsys, 'scan-gap', 'g2', '--trials', '500', '--seed', '1', '--forbidden', '4', '6')
    assert code == EXIT_FAILED


def test_trials_must_be_positive(capsys):
    code, _ = run_cli(capsys, 'scan-gap', 'g2', '--trials', '0')
    assert code == EXIT_INPUT


def test_analyze_distribution(capsys, tmp_path):
    path = tmp_path / "fields.json"
    path.write_text(dumps(FieldsDocument.from_fields(heisenberg_fields())))
    code, out = run_cli(capsys, 'analyze', '--input', str(path))
    assert code == EXIT_OK
    result = json.loads(out)
    assert result['growth'] == [2, 3]
    assert result['symbol_dims'] == [2, 1]


def test_analyze_not_bracket_generating(capsys, tmp_path):
    path = tmp_path / "fields.json"
    fields = [coordinate_field(3, 0), coordinate_field(3, 1)]
    path.write_text(dumps(FieldsDocument.from_fields(fields)))
    code, out = run_cli(capsys, 'analyze', '--input', str(path))
    assert code == EXIT_FAILED
    assert json.loads(out)['bracket_generating'] is False


def test_pretty_cohomology(capsys):
    code, out = run_cli(capsys, 'cohomology', 'g2', '--pretty')
    assert code == EXIT_OK
    assert out.startswith("H^2(")


def test_pretty_check_table(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text(dumps(AlgebraDocument.from_algebra(broken_jacobi())))
    code, out = run_cli(capsys, 'check', '--input', str(path), '--pretty')
    assert code == EXIT_FAILED
    assert out.startswith("broken: FAIL")
    assert 'jacobi' in out


def test_reproduce_unknown_family(capsys):
    code, out = run_cli(capsys, 'reproduce-paper', '--family', 'e8')
    assert code == EXIT_INPUT
    assert 'e8' in json.loads(out)['error']


@pytest.mark.slow
def test_reproduce_g2(capsys, tmp_path):
    xlsx = tmp_path / "g2.xlsx"
    code, out = run_cli(capsys, 'reproduce-paper', '--family', 'g2', '--seed', '7', '--trials', '200',
                        '--xlsx', str(xlsx))
    result = json.loads(out)
    assert code == EXIT_OK, [r for r in result['rows'] if r['status'] == 'fail']
    assert result['counts']['fail'] == 0
    assert xlsx.exists()
