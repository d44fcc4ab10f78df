from openpyxl import load_workbook

from models.algebra_base import Report
from services.report_service import ReportService


ROWS = [
    {'family': 'g2', 'quantity': 'dim', 'expected': 14, 'computed': 14, 'status': 'pass',
     'citation': 'automorphism dimension'},
    {'family': 'g2', 'quantity': 'growth', 'expected': [2, 3, 5], 'computed': [2, 3, 5], 'status': 'pass',
     'citation': ''},
    {'family': 'g2', 'quantity': 'h1_negative', 'expected': True, 'computed': False, 'status': 'fail',
     'citation': ''},
    {'family': 'g2', 'quantity': 'nonflat_bound', 'expected': 8, 'computed': '', 'status': 'cited',
     'citation': 'bound'},
]


def test_reproduction_table():
    service = ReportService()
    df = service.reproduction_table(ROWS)
    assert list(df.columns) == ['family', 'quantity', 'expected', 'computed', 'status', 'citation']
    assert df.loc[1, 'expected'] == "(2, 3, 5)"
    assert df.loc[2, 'computed'] == "false"
    assert service.summary(df) == {'pass': 2, 'fail': 1, 'cited': 1}
    assert 'nonflat_bound' in service.render(df)


def test_histogram_table():
    df = ReportService().histogram_table({"9": 3, "5": 1})
    assert list(df['dim']) == [5, 9]
    assert df['share'].sum() == 1.0


def test_checks_table():
    report = Report("g2")
    report.add('jacobi', True, "ok")
    report.add('killing', False, "degenerate")
    df = ReportService().checks_table(report.to_dict())
    assert list(df.columns) == ['check', 'status', 'detail']
    assert list(df['check']) == ['jacobi', 'killing']
    assert list(df['status']) == ['pass', 'fail']


def test_export_to_excel(tmp_path):
    service = ReportService()
    target = tmp_path / "results.xlsx"
    assert service.export_to_excel({'g2': service.reproduction_table(ROWS)}, str(target))
    sheet = load_workbook(target)['g2']
    assert sheet['A1'].value == 'family'
    assert sheet['A1'].font.bold
    assert sheet['E2'].value == 'pass'
    assert sheet['A4'].fill.start_color.rgb.endswith("FEE2E2")


def test_export_to_unwritable_path(tmp_path):
    service = ReportService()
    assert not service.export_to_excel({'g2': service.reproduction_table(ROWS)}, str(tmp_path / "no" / "x.xlsx"))
