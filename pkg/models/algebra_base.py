"""
Base Model for graded Lie algebras and algebra families
File: models/algebra_base.py
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple
import json

from core.exact_linalg import (
    CoordinateSolver, RatMatrix, SparseRow, Subspace, combine, inverse, kernel, solve,
)
from core.exceptions import InputError


SparseVector = Tuple[Tuple[int, Fraction], ...]
BracketEntry = Tuple[int, int, SparseVector]

FAMILY_DATA_DIR = Path(__file__).resolve().parent.parent / "data" / "families"


class CheckStatus(Enum):
    """Outcome of a single structural check"""
    PASS = "pass"
    FAIL = "fail"
    CITED = "cited"


@dataclass
class CheckResult:
    """One line of a report"""
    name: str
    status: CheckStatus
    detail: str = ""
    data: Dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status != CheckStatus.FAIL

    def to_dict(self) -> Dict:
        return {
            'name': self.name,
            'status': self.status.value,
            'detail': self.detail,
            'data': self.data,
        }


@dataclass
class Report:
    """Ordered list of checks about one subject"""
    subject: str
    checks: List[CheckResult] = field(default_factory=list)

    def add(self, name: str, passed: bool, detail: str = "", **data) -> CheckResult:
        result = CheckResult(name, CheckStatus.PASS if passed else CheckStatus.FAIL, detail, dict(data))
        self.checks.append(result)
        return result

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def get(self, name: str) -> Optional[CheckResult]:
        return next((c for c in self.checks if c.name == name), None)

    def to_dict(self) -> Dict:
        return {
            'subject': self.subject,
            'passed': self.passed,
            'checks': [c.to_dict() for c in self.checks],
        }


def pack(vector: Mapping[int, Fraction]) -> SparseVector:
    return tuple(sorted((i, Fraction(v)) for i, v in vector.items() if v))


@dataclass(frozen=True)
class GradedLieAlgebra:
    """
    Finite-dimensional Lie algebra given by rational structure constants,
    with an integer degree per basis element.

    `brackets` lists [e_i, e_j] for the stored pairs (normally i < j);
    pairs that are not listed bracket to zero.
    """
    name: str
    degrees: Tuple[int, ...]
    brackets: Tuple[BracketEntry, ...]
    k: int
    family: Optional[str] = None
    params: Tuple[Tuple[str, int], ...] = ()
    cartan: Tuple[SparseVector, ...] = ()
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.k < 1:
            raise InputError(f"Grading depth must be positive, got {self.k}")
        n = len(self.degrees)
        for i, j, vec in self.brackets:
            if not (0 <= i < n and 0 <= j < n):
                raise InputError(f"Bracket pair ({i}, {j}) out of range for dimension {n}")
            for t, _ in vec:
                if not 0 <= t < n:
                    raise InputError(f"Bracket [{i},{j}] has output index {t} out of range")
        for vec in self.cartan:
            for t, _ in vec:
                if not 0 <= t < n:
                    raise InputError(f"Cartan element has index {t} out of range")
        if self.labels and len(self.labels) != n:
            raise InputError("One label per basis element is required")

    @classmethod
    def from_table(
        cls,
        name: str,
        degrees: Sequence[int],
        table: Mapping[Tuple[int, int], Mapping[int, Fraction]],
        k: int,
        **meta,
    ) -> "GradedLieAlgebra":
        """Build from {(i, j): {t: c}}; only i < j entries are stored"""
        brackets = []
        for (i, j), vec in sorted(table.items()):
            if i < j:
                packed = pack(vec)
                if packed:
                    brackets.append((i, j, packed))
        return cls(name=name, degrees=tuple(degrees), brackets=tuple(brackets), k=k, **meta)

    # -- basic structure --------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.degrees)

    @cached_property
    def table(self) -> Dict[Tuple[int, int], Dict[int, Fraction]]:
        """[e_i, e_j] for both orders, extended by antisymmetry where only one order is given"""
        out: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        given = {(i, j) for i, j, _ in self.brackets}
        for i, j, vec in self.brackets:
            out[(i, j)] = dict(vec)
            if i != j and (j, i) not in given:
                out[(j, i)] = {t: -c for t, c in vec}
        return out

    def bracket_basis(self, i: int, j: int) -> Dict[int, Fraction]:
        return self.table.get((i, j), {})

    def bracket(self, u: Mapping[int, Fraction], v: Mapping[int, Fraction]) -> SparseRow:
        """Bracket of two sparse vectors"""
        out: SparseRow = {}
        for i, a in u.items():
            if not a:
                continue
            for j, b in v.items():
                if not b:
                    continue
                for t, c in self.table.get((i, j), {}).items():
                    s = out.get(t, Fraction(0)) + a * b * c
                    if s:
                        out[t] = s
                    else:
                        out.pop(t, None)
        return out

    @cached_property
    def components(self) -> Dict[int, List[int]]:
        comps: Dict[int, List[int]] = {d: [] for d in range(-self.k, self.k + 1)}
        for i, d in enumerate(self.degrees):
            comps.setdefault(d, []).append(i)
        return comps

    def component(self, degree: int) -> List[int]:
        return self.components.get(degree, [])

    @cached_property
    def local_index(self) -> Dict[int, int]:
        """Position of each basis index inside its graded component"""
        pos: Dict[int, int] = {}
        for idxs in self.components.values():
            for p, i in enumerate(idxs):
                pos[i] = p
        return pos

    def component_dims(self) -> Dict[int, int]:
        return {d: len(self.component(d)) for d in range(-self.k, self.k + 1)}

    def dims_profile(self) -> Tuple[int, ...]:
        return tuple(len(self.component(d)) for d in range(-self.k, self.k + 1))

    def filtration(self, i: int) -> List[int]:
        """Indices spanning g^i = g_i + ... + g_k"""
        return [idx for idx, d in enumerate(self.degrees) if d >= i]

    def negative_indices(self) -> List[int]:
        return [i for i, d in enumerate(self.degrees) if d < 0]

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else f"e{i}"

    def ad_matrix(self, x: Mapping[int, Fraction]) -> RatMatrix:
        """Matrix of ad(x): column j holds [x, e_j]"""
        cols = [self.bracket(x, {j: Fraction(1)}) for j in range(self.dim)]
        return RatMatrix.from_rows(cols, self.dim).transpose()

    def to_component(self, vector: Mapping[int, Fraction]) -> Tuple[int, List[Fraction]]:
        """(degree, coordinates inside g_degree) of a homogeneous vector"""
        support = [i for i, v in vector.items() if v]
        if not support:
            raise InputError("The zero vector has no degree")
        degs = {self.degrees[i] for i in support}
        if len(degs) != 1:
            raise InputError(f"Vector is not homogeneous (degrees {sorted(degs)})")
        d = degs.pop()
        coords = [Fraction(0)] * len(self.component(d))
        for i in support:
            coords[self.local_index[i]] = Fraction(vector[i])
        return d, coords

    def from_component(self, degree: int, coords: Sequence[Fraction]) -> SparseRow:
        idxs = self.component(degree)
        if len(coords) != len(idxs):
            raise InputError(f"g_{degree} has dimension {len(idxs)}, got {len(coords)} coordinates")
        return {i: Fraction(c) for i, c in zip(idxs, coords) if c}

    def stabilizer(self, degree: int, vectors: Sequence[Mapping[int, Fraction]]) -> List[SparseRow]:
        """Basis of {a in g_0 : [a, W] inside W} for W = span(vectors) inside g_degree"""
        for v in vectors:
            if any(c and self.degrees[i] != degree for i, c in v.items()):
                raise InputError(f"Vector is not inside g_{degree}")
        w = Subspace.from_vectors([dict(v) for v in vectors], self.dim)
        zero = self.component(0)
        rows: Dict[Tuple[int, int], SparseRow] = {}
        for col, s in enumerate(zero):
            for r, vec in enumerate(w.vectors()):
                for t, c in w.reduce(self.bracket({s: Fraction(1)}, vec)).items():
                    rows.setdefault((r, t), {})[col] = c
        system = RatMatrix.from_rows(list(rows.values()), len(zero))
        return [{zero[c]: v for c, v in x.items()} for x in kernel(system).vectors()]

    # -- derived algebras -------------------------------------------------

    def restrict(self, indices: Sequence[int], name: Optional[str] = None) -> "GradedLieAlgebra":
        """Structure constants on a span of basis vectors closed under bracket"""
        where = {old: new for new, old in enumerate(indices)}
        table: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        for a, i in enumerate(indices):
            for b, j in enumerate(indices):
                if a >= b:
                    continue
                vec = self.bracket_basis(i, j)
                if any(t not in where for t in vec):
                    raise InputError(f"Span is not closed: [{self.label(i)}, {self.label(j)}] leaves it")
                table[(a, b)] = {where[t]: c for t, c in vec.items()}
        degrees = [self.degrees[i] for i in indices]
        k = max([abs(d) for d in degrees] + [1])
        labels = tuple(self.label(i) for i in indices) if self.labels else ()
        return GradedLieAlgebra.from_table(name or f"{self.name}|sub", degrees, table, k, labels=labels)

    def negative_part(self) -> "NilpotentGradedAlgebra":
        """g_- = g_{-k} + ... + g_{-1} as a nilpotent graded algebra"""
        sub = self.restrict(self.negative_indices(), name=f"{self.name}_minus")
        depth = max([-d for d in sub.degrees] + [1])
        return NilpotentGradedAlgebra(
            name=sub.name, degrees=sub.degrees, brackets=sub.brackets, k=depth,
            family=self.family, params=self.params, labels=sub.labels,
        )

    def change_basis(self, columns: Sequence[Mapping[int, Fraction]], name: Optional[str] = None) -> "GradedLieAlgebra":
        """
        Structure constants in the basis f_i = sum_j columns[i][j] e_j

        Args:
            columns: new basis vectors, each homogeneous of the degree of e_i

        Returns:
            algebra of the same type in the new basis
        """
        if len(columns) != self.dim:
            raise InputError("change_basis needs one vector per basis element")
        for i, col in enumerate(columns):
            d, _ = self.to_component(col)
            if d != self.degrees[i]:
                raise InputError(f"New basis vector {i} has degree {d}, expected {self.degrees[i]}")
        solver = CoordinateSolver(columns, self.dim)
        table = {}
        for a in range(self.dim):
            for b in range(a + 1, self.dim):
                vec = self.bracket(columns[a], columns[b])
                if vec:
                    table[(a, b)] = solver.coordinates(vec)
        cartan = tuple(pack(solver.coordinates(dict(h))) for h in self.cartan)
        return type(self).from_table(
            name or self.name, self.degrees, table, self.k,
            family=self.family, params=self.params, cartan=cartan,
        )

    def grading_element(self) -> Optional[SparseRow]:
        """The element E of g_0 with [E, x] = deg(x) x, if g_0 contains one"""
        zero = self.component(0)
        if not zero:
            return None
        # unknowns: coefficients of E on g_0; equations: [E, e_j] = deg_j e_j
        rows: List[SparseRow] = []
        rhs: SparseRow = {}
        for j in range(self.dim):
            images = {a: self.bracket_basis(a, j) for a in zero}
            targets = set(t for vec in images.values() for t in vec) | {j}
            for t in sorted(targets):
                eq = {col: images[a].get(t, Fraction(0)) for col, a in enumerate(zero)}
                rows.append({c: v for c, v in eq.items() if v})
                value = Fraction(self.degrees[j]) if t == j else Fraction(0)
                if value:
                    rhs[len(rows) - 1] = value
        try:
            x = solve(RatMatrix.from_rows(rows, len(zero)), rhs)
        except InputError:
            return None
        return {zero[c]: v for c, v in x.items() if v}

    # -- metadata ---------------------------------------------------------

    def param(self, key: str, default: Optional[int] = None) -> Optional[int]:
        return dict(self.params).get(key, default)

    def summary(self) -> Dict:
        return {
            'name': self.name,
            'family': self.family,
            'dim': self.dim,
            'k': self.k,
            'component_dims': self.dims_profile(),
            'timestamp': datetime.now().isoformat(),
        }


@dataclass(frozen=True)
class NilpotentGradedAlgebra(GradedLieAlgebra):
    """Graded algebra with all degrees in [-k, -1]"""

    def __post_init__(self):
        super().__post_init__()
        bad = [d for d in self.degrees if not -self.k <= d <= -1]
        if bad:
            raise InputError(f"Nilpotent graded algebra needs degrees in [-{self.k}, -1], got {sorted(set(bad))}")

    @property
    def depth(self) -> int:
        return -min(self.degrees) if self.degrees else 0

    def generators(self) -> List[int]:
        return self.component(-1)


# -- families ----------------------------------------------------------------


@dataclass
class FamilyConfig:
    """Expected values and parameters for one family"""
    code: str
    name: str
    params: Dict[str, int]
    expected: Dict[str, Dict]
    gap_interval: List[int] = field(default_factory=list)
    nonflat_bound: Optional[Dict] = None
    source: str = ""

    @classmethod
    def from_json(cls, config_path: str):
        """Load config from a JSON file"""
        with open(config_path, 'r') as f:
            data = json.load(f)
        return cls(**data)

    def expected_value(self, key: str, n: Optional[int] = None):
        """Exact expected value, None when the config records none for this n"""
        return self._lookup(self.expected.get(key), n, 'value')

    def lower_bound(self, key: str) -> Optional[int]:
        return self.expected.get(key, {}).get('at_least')

    def citation(self, key: str) -> str:
        return self.expected.get(key, {}).get('citation', '')

    def cited_bound(self, n: Optional[int] = None) -> Optional[int]:
        return self._lookup(self.nonflat_bound, n, 'value')

    @staticmethod
    def _lookup(entry: Optional[Dict], n: Optional[int], key: str):
        if not entry:
            return None
        if 'by_n' in entry:
            return entry['by_n'].get(str(n)) if n is not None else None
        return entry.get(key)


class FamilyBase(ABC):
    """
    Abstract base class for the built-in families.
    Every family builds its algebra and knows its own extremal witnesses.
    """

    code: str = ""

    def __init__(self, config: Optional[FamilyConfig] = None):
        self.config = config or self.load_config(self.code)
        self.family_code = self.config.code
        self.family_name = self.config.name

    @abstractmethod
    def build(self, **params) -> GradedLieAlgebra:
        """
        Construct the graded algebra

        Args:
            params: family parameters (only `n` for the so-split family)

        Returns:
            GradedLieAlgebra with `family`, `params` and `cartan` filled in
        """
        pass

    @abstractmethod
    def witnesses(self, g: GradedLieAlgebra) -> Dict[str, Dict[int, List[SparseRow]]]:
        """
        Family-specific maximal graded subalgebras

        Args:
            g: algebra returned by `build`

        Returns:
            name -> {degree: spanning vectors in full coordinates}
        """
        pass

    def gap_interval(self, n: Optional[int] = None) -> Tuple[int, int]:
        lo, hi = self.config.gap_interval
        return lo, hi

    @staticmethod
    def load_config(code: str) -> FamilyConfig:
        """Load family configuration from data/families/<code>/config.json"""
        config_path = FAMILY_DATA_DIR / code / "config.json"
        if not config_path.exists():
            raise FileNotFoundError(f"Config file not found: {config_path}")
        return FamilyConfig.from_json(str(config_path))


def full_components(g: GradedLieAlgebra, degrees: Iterable[int]) -> Dict[int, List[SparseRow]]:
    """{d: basis of g_d} for the given degrees"""
    return {d: [{i: Fraction(1)} for i in g.component(d)] for d in degrees}


def unit(i: int) -> SparseRow:
    return {i: Fraction(1)}


__all__ = [
    'CheckStatus', 'CheckResult', 'Report', 'GradedLieAlgebra', 'NilpotentGradedAlgebra',
    'FamilyConfig', 'FamilyBase', 'full_components', 'unit', 'pack', 'combine', 'inverse',
]
