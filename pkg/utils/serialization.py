"""
JSON documents for algebras, subalgebras, fields and reports
File: utils/serialization.py

Rationals are strings "p/q" ("0/1" for zero). Documents are pydantic
models; output is json.dumps(..., sort_keys=True) of model_dump().
"""

from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union
import json
import re

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from core.exact_linalg import fraction_to_str
from core.exceptions import InputError
from models.algebra_base import GradedLieAlgebra, NilpotentGradedAlgebra, pack
from services.distribution_service import PolyVectorField


RATIONAL_PATTERN = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(value: Union[str, int, Fraction]) -> Fraction:
    """'p/q', 'p' or an integer"""
    if isinstance(value, bool):
        raise InputError(f"Not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if not isinstance(value, str):
        raise InputError(f"Not a rational: {value!r}")
    match = RATIONAL_PATTERN.match(value)
    if not match:
        raise InputError(f"Not a rational: {value!r}")
    num, den = match.group(1), match.group(2)
    if den is not None and int(den) == 0:
        raise InputError(f"Zero denominator in {value!r}")
    return Fraction(int(num), int(den) if den else 1)


def rational_str(value) -> str:
    return fraction_to_str(Fraction(value))


class Document(BaseModel):
    model_config = ConfigDict(extra='forbid')


def _check_rationals(values):
    for v in values:
        parse_rational(v)
    return values


class AlgebraDocument(Document):
    """{"name", "dim", "k", "degrees", "brackets": [[i, j, [[t, "p/q"], ...]], ...]}"""
    name: str
    dim: int = Field(ge=0)
    k: int = Field(ge=1)
    degrees: List[int]
    brackets: List[Tuple[int, int, List[Tuple[int, str]]]] = Field(default_factory=list)
    family: Optional[str] = None
    params: Dict[str, int] = Field(default_factory=dict)
    cartan: Optional[List[List[Tuple[int, str]]]] = None
    labels: Optional[List[str]] = None

    @model_validator(mode='after')
    def check_shape(self):
        if len(self.degrees) != self.dim:
            raise ValueError(f"degrees has {len(self.degrees)} entries, dim is {self.dim}")
        for i, j, vec in self.brackets:
            _check_rationals(c for _, c in vec)
        return self

    def to_algebra(self) -> GradedLieAlgebra:
        brackets = tuple(
            (i, j, pack({t: parse_rational(c) for t, c in vec}))
            for i, j, vec in self.brackets
        )
        cls = GradedLieAlgebra
        if self.degrees and all(-self.k <= d <= -1 for d in self.degrees):
            cls = NilpotentGradedAlgebra
        return cls(
            name=self.name,
            degrees=tuple(self.degrees),
            brackets=tuple(b for b in brackets if b[2]),
            k=self.k,
            family=self.family,
            params=tuple(sorted(self.params.items())),
            cartan=tuple(pack({t: parse_rational(c) for t, c in vec}) for vec in (self.cartan or [])),
            labels=tuple(self.labels or ()),
        )

    @classmethod
    def from_algebra(cls, g: GradedLieAlgebra) -> "AlgebraDocument":
        return cls(
            name=g.name,
            dim=g.dim,
            k=g.k,
            degrees=list(g.degrees),
            brackets=[(i, j, [(t, rational_str(c)) for t, c in vec]) for i, j, vec in g.brackets],
            family=g.family,
            params=dict(g.params),
            cartan=[[(t, rational_str(c)) for t, c in vec] for vec in g.cartan] or None,
            labels=list(g.labels) or None,
        )


class SubalgebraDocument(Document):
    """{"algebra": name, "components": {"i": [[coord "p/q" x dim g_i], ...]}}"""
    algebra: str
    components: Dict[str, List[List[str]]]
    name: Optional[str] = None
    dim: Optional[int] = None
    profile: Optional[List[int]] = None

    @field_validator('components')
    @classmethod
    def check_entries(cls, value):
        for key, rows in value.items():
            int(key)
            for row in rows:
                _check_rationals(row)
        return value

    def component_vectors(self, g: GradedLieAlgebra) -> Dict[int, List[Dict[int, Fraction]]]:
        out = {}
        for key, rows in self.components.items():
            d = int(key)
            out[d] = [g.from_component(d, [parse_rational(c) for c in row]) for row in rows]
        return out


class TermDocument(Document):
    coeff: str
    exps: List[int]

    @field_validator('coeff')
    @classmethod
    def check_coeff(cls, value):
        parse_rational(value)
        return value


class FieldsDocument(Document):
    """{"vars": m, "fields": [[[{"coeff", "exps"}, ...] x m], ...], "point": ["p/q", ...]}"""
    vars: int = Field(ge=1)
    fields: List[List[List[TermDocument]]]
    point: Optional[List[str]] = None

    def to_fields(self) -> List[PolyVectorField]:
        out = []
        for comps in self.fields:
            if len(comps) != self.vars:
                raise InputError(f"Field has {len(comps)} components, expected {self.vars}")
            out.append(PolyVectorField.from_terms(
                self.vars, [[(parse_rational(t.coeff), t.exps) for t in terms] for terms in comps]))
        return out

    def point_values(self) -> Optional[List[Fraction]]:
        return None if self.point is None else [parse_rational(c) for c in self.point]

    @classmethod
    def from_fields(cls, fields: List[PolyVectorField], point=None) -> "FieldsDocument":
        m = fields[0].num_vars if fields else 1
        return cls(
            vars=m,
            fields=[
                [[TermDocument(coeff=rational_str(c), exps=list(e)) for c, e in comp] for comp in f.terms()]
                for f in fields
            ],
            point=None if point is None else [rational_str(c) for c in point],
        )


class CohomologyTable(Document):
    """{"q", "by_homogeneity": {"h": dim}, "total"}"""
    algebra: str
    q: int
    by_homogeneity: Dict[str, int]
    total: int
    h1_negative: Optional[bool] = None

    @classmethod
    def from_dims(cls, algebra: str, q: int, dims: Dict[int, int], h1_negative: Optional[bool] = None):
        return cls(
            algebra=algebra, q=q,
            by_homogeneity={str(h): d for h, d in sorted(dims.items())},
            total=sum(dims.values()),
            h1_negative=h1_negative,
        )


class ClassDocument(Document):
    """A class of H^2_h by coordinates in the representative basis"""
    homogeneity: int
    coords: List[str]
    imag: Optional[List[str]] = None

    @field_validator('coords', 'imag')
    @classmethod
    def check_coords(cls, value):
        return _check_rationals(value) if value is not None else value


class RunConfig(BaseModel):
    """Everything a CLI run depends on; seed and trials fix all randomized output"""
    model_config = ConfigDict(extra='ignore')

    command: str
    family: Optional[str] = None
    n: Optional[int] = None
    input: Optional[Path] = None
    output: Optional[Path] = None
    xlsx: Optional[Path] = None
    seed: int = 0
    trials: int = Field(default=10000, ge=1)
    workers: int = Field(default=1, ge=1)
    q: Optional[int] = None
    homogeneity: Optional[int] = None
    degree: Optional[int] = None
    k: Optional[int] = None
    max_degree: Optional[int] = None
    forbidden: Optional[Tuple[int, int]] = None
    mode: Optional[str] = None
    a0: Optional[Path] = None
    subspace: Optional[Path] = None
    class_file: Optional[Path] = None
    genericity: Optional[str] = None
    pretty: bool = False
    verbose: bool = False


def dumps(data: Any) -> str:
    """Deterministic JSON"""
    if isinstance(data, BaseModel):
        data = data.model_dump(exclude_none=True)
    return json.dumps(data, sort_keys=True, default=_default)


def _default(value):
    if isinstance(value, Fraction):
        return rational_str(value)
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, (set, frozenset, tuple)):
        return list(value)
    if hasattr(value, 'value'):
        return value.value
    raise TypeError(f"Cannot serialize {type(value).__name__}")


def load_json(path: Union[str, Path]) -> Dict:
    path = Path(path)
    if not path.exists():
        raise InputError(f"File not found: {path}")
    try:
        with open(path, 'r') as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}")


def load_document(model, path: Union[str, Path]):
    """Parse a JSON file into a pydantic document; schema errors become InputError"""
    try:
        return model.model_validate(load_json(path))
    except ValidationError as e:
        raise InputError(f"{path} does not match the {model.__name__} schema: {e}")
