import json
from fractions import Fraction

import pytest

from core.exceptions import InputError
from models.algebra_base import NilpotentGradedAlgebra
from services.distribution_service import coordinate_field
from utils.serialization import (
    AlgebraDocument, CohomologyTable, FieldsDocument, RunConfig, dumps, load_document, parse_rational,
)


@pytest.mark.parametrize("text, expected", [
    ("3/4", Fraction(3, 4)),
    ("-2", Fraction(-2)),
    (" 6 / 8 ", Fraction(3, 4)),
    (5, Fraction(5)),
])
def test_parse_rational(text, expected):
    assert parse_rational(text) == expected


@pytest.mark.parametrize("bad", ["1/0", "x", "1.5", True, None])
def test_parse_rational_rejects(bad):
    with pytest.raises(InputError):
        parse_rational(bad)


def test_algebra_document_keeps_the_table(g2):
    doc = AlgebraDocument.from_algebra(g2)
    back = AlgebraDocument.model_validate(json.loads(dumps(doc))).to_algebra()
    assert back.degrees == g2.degrees
    for i in range(g2.dim):
        for j in range(g2.dim):
            assert back.bracket_basis(i, j) == g2.bracket_basis(i, j)


def test_negative_document_gives_nilpotent_algebra(heis):
    back = AlgebraDocument.from_algebra(heis).to_algebra()
    assert isinstance(back, NilpotentGradedAlgebra)
    assert back.bracket_basis(0, 1) == {2: Fraction(1)}


def test_degrees_must_match_dim():
    with pytest.raises(ValueError):
        AlgebraDocument(name="x", dim=2, k=1, degrees=[-1])


def test_fields_document():
    fields = [coordinate_field(2, 0), coordinate_field(2, 1)]
    doc = FieldsDocument.from_fields(fields, [Fraction(1, 2), Fraction(0)])
    assert doc.point == ["1/2", "0/1"]
    back = FieldsDocument.model_validate(json.loads(dumps(doc)))
    assert [f.coefficient_vector() for f in back.to_fields()] == [f.coefficient_vector() for f in fields]
    assert back.point_values() == [Fraction(1, 2), Fraction(0)]


def test_fields_document_component_count():
    doc = FieldsDocument(vars=2, fields=[[[{"coeff": "1", "exps": [0, 0]}]]])
    with pytest.raises(InputError):
        doc.to_fields()


def test_cohomology_table_sorted_and_deterministic():
    table = CohomologyTable.from_dims("g2", 2, {4: 5, -1: 0})
    assert list(table.by_homogeneity) == ["-1", "4"]
    assert table.total == 5
    assert dumps(table) == dumps(CohomologyTable.from_dims("g2", 2, {-1: 0, 4: 5}))


def test_load_document_errors(tmp_path):
    missing = tmp_path / "missing.json"
    with pytest.raises(InputError):
        load_document(AlgebraDocument, missing)
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(InputError):
        load_document(AlgebraDocument, broken)
    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"name": "x", "dim": 1, "k": 1, "degrees": [-1], "extra": 1}))
    with pytest.raises(InputError):
        load_document(AlgebraDocument, wrong)


def test_run_config_defaults():
    config = RunConfig(command="build")
    assert config.seed == 0
    assert config.trials == 10000
    assert config.workers == 1
