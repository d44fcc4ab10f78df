"""
Distribution Service - derived flags and symbol algebras of polynomial distributions
File: services/distribution_service.py

Vector fields have sympy Poly components over QQ in the variables
x0, ..., x(m-1). Everything is evaluated exactly.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple
import logging

import sympy

from core.exact_linalg import (
    CoordinateSolver, RatMatrix, SparseRow, Subspace, inertia, inverse, kernel, rank,
)
from core.exceptions import InputError, NotBracketGeneratingError
from models.algebra_base import GradedLieAlgebra, NilpotentGradedAlgebra, Report
from services.algebra_service import generated_dims, graded_derivations


logger = logging.getLogger(__name__)

DEFAULT_DEPTH_CAP = 6


def variables(m: int) -> Tuple[sympy.Symbol, ...]:
    return tuple(sympy.symbols(f"x0:{m}"))


def _rational(value) -> sympy.Rational:
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def _fraction(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


@dataclass(frozen=True)
class PolyVectorField:
    """sum_i components[i] d/dx_i"""
    num_vars: int
    components: Tuple[sympy.Poly, ...]

    def __post_init__(self):
        if len(self.components) != self.num_vars:
            raise InputError(f"Expected {self.num_vars} components, got {len(self.components)}")

    @classmethod
    def from_terms(cls, m: int, comps: Sequence[Sequence[Tuple[Fraction, Sequence[int]]]]) -> "PolyVectorField":
        """Components given as lists of (coefficient, exponent vector)"""
        gens = variables(m)
        polys = []
        for terms in comps:
            data = {}
            for coeff, exps in terms:
                if len(exps) != m:
                    raise InputError(f"Exponent vector {list(exps)} has length {len(exps)}, expected {m}")
                key = tuple(int(e) for e in exps)
                data[key] = data.get(key, 0) + _rational(coeff)
            polys.append(sympy.Poly.from_dict(data, *gens, domain='QQ') if data else sympy.Poly(0, *gens, domain='QQ'))
        return cls(m, tuple(polys))

    @classmethod
    def from_exprs(cls, m: int, exprs: Sequence) -> "PolyVectorField":
        gens = variables(m)
        return cls(m, tuple(sympy.Poly(e, *gens, domain='QQ') for e in exprs))

    def terms(self) -> List[List[Tuple[Fraction, Tuple[int, ...]]]]:
        return [[(_fraction(c), tuple(exps)) for exps, c in p.terms() if c] for p in self.components]

    def is_zero(self) -> bool:
        return all(p.is_zero for p in self.components)

    def coefficient_vector(self) -> Dict[Tuple[int, Tuple[int, ...]], Fraction]:
        """(component, monomial) -> coefficient"""
        out = {}
        for i, p in enumerate(self.components):
            for exps, c in p.terms():
                if c:
                    out[(i, tuple(exps))] = _fraction(c)
        return out

    def __add__(self, other: "PolyVectorField") -> "PolyVectorField":
        _check_same(self, other)
        return PolyVectorField(self.num_vars, tuple(a + b for a, b in zip(self.components, other.components)))

    def scale(self, c) -> "PolyVectorField":
        return PolyVectorField(self.num_vars, tuple(p * _rational(c) for p in self.components))

    def __repr__(self):
        parts = [f"({p.as_expr()})*d{i}" for i, p in enumerate(self.components) if not p.is_zero]
        return " + ".join(parts) if parts else "0"


def _check_same(x: PolyVectorField, y: PolyVectorField):
    if x.num_vars != y.num_vars:
        raise InputError(f"Fields live on R^{x.num_vars} and R^{y.num_vars}")


def coordinate_field(m: int, i: int) -> PolyVectorField:
    """d/dx_i on R^m"""
    if not 0 <= i < m:
        raise InputError(f"Coordinate {i} out of range for R^{m}")
    return PolyVectorField.from_terms(m, [[(Fraction(1), [0] * m)] if j == i else [] for j in range(m)])


def field_bracket(x: PolyVectorField, y: PolyVectorField) -> PolyVectorField:
    """[X, Y]_i = sum_j X_j d_j Y_i - Y_j d_j X_i"""
    _check_same(x, y)
    gens = variables(x.num_vars)
    comps = []
    for i in range(x.num_vars):
        total = sympy.Poly(0, *gens, domain='QQ')
        for j, var in enumerate(gens):
            if not x.components[j].is_zero:
                total += x.components[j] * y.components[i].diff(var)
            if not y.components[j].is_zero:
                total -= y.components[j] * x.components[i].diff(var)
        comps.append(total)
    return PolyVectorField(x.num_vars, tuple(comps))


def evaluate(f: PolyVectorField, point: Sequence[Fraction]) -> List[Fraction]:
    if len(point) != f.num_vars:
        raise InputError(f"Point has {len(point)} coordinates, fields live on R^{f.num_vars}")
    values = [_rational(c) for c in point]
    return [_fraction(p.eval(dict(zip(p.gens, values))) if not p.is_zero else 0) for p in f.components]


def _as_row(values: Sequence[Fraction]) -> SparseRow:
    return {i: v for i, v in enumerate(values) if v}


def transform_fields(
    fields: Sequence[PolyVectorField], p: RatMatrix, point: Optional[Sequence[Fraction]] = None,
) -> Tuple[List[PolyVectorField], Optional[List[Fraction]]]:
    """
    Push fields forward along the linear map y = P x

    Returns:
        (transformed fields, image of `point` if given)
    """
    if not fields:
        return [], None
    m = fields[0].num_vars
    if p.nrows != m or p.ncols != m:
        raise InputError(f"Coordinate change must be {m}x{m}")
    p_inv = inverse(p)
    gens = variables(m)
    # x = P^-1 y, written in the same symbols
    substitution = {
        gens[k]: sum((_rational(v) * gens[c] for c, v in p_inv.rows[k]), sympy.Integer(0)) for k in range(m)
    }
    out = []
    for f in fields:
        _check_same(fields[0], f)
        pulled = [c.as_expr().subs(substitution, simultaneous=True) for c in f.components]
        exprs = [sum((_rational(v) * pulled[c] for c, v in p.rows[i]), sympy.Integer(0)) for i in range(m)]
        out.append(PolyVectorField.from_exprs(m, [sympy.expand(e) for e in exprs]))
    image = None
    if point is not None:
        moved = p.apply(_as_row([Fraction(c) for c in point]))
        image = [moved.get(i, Fraction(0)) for i in range(m)]
    return out, image


def _independent_fields(fields: Sequence[PolyVectorField]) -> List[PolyVectorField]:
    """Greedy maximal Q-linearly independent subfamily, in order"""
    keys: Dict = {}
    vectors = []
    for f in fields:
        vec = f.coefficient_vector()
        for key in vec:
            keys.setdefault(key, len(keys))
        vectors.append(vec)
    kept, rows = [], []
    span = Subspace.zero(len(keys))
    for f, vec in zip(fields, vectors):
        row = {keys[k]: v for k, v in vec.items()}
        if row and not span.contains_vector(row):
            kept.append(f)
            rows.append(row)
            span = Subspace.from_vectors(rows, len(keys))
    return kept


# -- derived flag -------------------------------------------------------------


@dataclass
class GrowthVector:
    """Ranks r_1 <= r_2 <= ... of the derived flag at a point"""
    dims: Tuple[int, ...]
    num_vars: int
    capped: bool = False

    @property
    def rank(self) -> int:
        return self.dims[0] if self.dims else 0

    @property
    def bracket_generating(self) -> bool:
        return bool(self.dims) and self.dims[-1] == self.num_vars

    def differences(self) -> Tuple[int, ...]:
        return tuple(b - a for a, b in zip((0,) + self.dims[:-1], self.dims))


@dataclass
class _Flag:
    """Fields of every level and the adapted basis chosen at the point"""
    levels: List[List[PolyVectorField]]
    adapted: List[Tuple[int, PolyVectorField]]
    growth: GrowthVector


def _derived_flag(fields: Sequence[PolyVectorField], point: Sequence[Fraction], depth_cap: int) -> _Flag:
    if not fields:
        raise InputError("At least one vector field is required")
    m = fields[0].num_vars
    for f in fields:
        _check_same(fields[0], f)
    if len(point) != m:
        raise InputError(f"Point has {len(point)} coordinates, fields live on R^{m}")

    generators = _independent_fields(fields)
    levels = [generators]
    adapted: List[Tuple[int, PolyVectorField]] = []
    span = Subspace.zero(m)
    dims: List[int] = []
    capped = False
    everything = list(generators)
    level = 1
    while True:
        for f in levels[-1]:
            value = _as_row(evaluate(f, point))
            if value and not span.contains_vector(value):
                adapted.append((level, f))
                span = Subspace.from_vectors([_as_row(evaluate(z, point)) for _, z in adapted], m)
        if dims and span.dim == dims[-1]:
            break
        dims.append(span.dim)
        if span.dim == m:
            break
        if level == depth_cap:
            capped = True
            logger.warning(f"Derived flag not stabilized after {depth_cap} levels: {dims}")
            break
        candidates = [field_bracket(x, y) for x in generators for y in levels[-1]]
        fresh = _independent_fields(everything + [c for c in candidates if not c.is_zero()])[len(everything):]
        everything.extend(fresh)
        levels.append(fresh)
        level += 1
    return _Flag(levels, adapted, GrowthVector(tuple(dims), m, capped))


def growth_vector_at(
    fields: Sequence[PolyVectorField], point: Sequence[Fraction], depth_cap: int = DEFAULT_DEPTH_CAP,
) -> GrowthVector:
    """
    Span dimensions at `point` of the generators, then of generators plus
    iterated brackets, level by level

    Returns:
        GrowthVector; `capped` is set when depth_cap stopped the iteration
    """
    growth = _derived_flag(fields, point, depth_cap).growth
    logger.info(f"Growth vector at {list(map(str, point))}: {growth.dims}")
    return growth


@dataclass
class SymbolAlgebra:
    """Graded nilpotent algebra gr(T_x M) with the adapted fields that span it"""
    algebra: NilpotentGradedAlgebra
    point: Tuple[Fraction, ...]
    growth: GrowthVector
    adapted_fields: List[PolyVectorField] = field(default_factory=list)

    @property
    def component_dims(self) -> Tuple[int, ...]:
        """dims of degrees -1, -2, ..."""
        return tuple(len(self.algebra.component(-d)) for d in range(1, self.algebra.k + 1))


def symbol_at(
    fields: Sequence[PolyVectorField], point: Sequence[Fraction], depth_cap: int = DEFAULT_DEPTH_CAP,
) -> SymbolAlgebra:
    """Levi brackets of the adapted basis at `point`"""
    flag = _derived_flag(fields, point, depth_cap)
    growth = flag.growth
    if not growth.bracket_generating:
        raise NotBracketGeneratingError("Distribution is not bracket generating at the point", growth.dims)
    m = growth.num_vars
    # order the adapted basis by level so degrees come out sorted
    adapted = sorted(flag.adapted, key=lambda t: -t[0])
    values = [_as_row(evaluate(f, point)) for _, f in adapted]
    solver = CoordinateSolver(values, m)
    levels = [lvl for lvl, _ in adapted]
    table: Dict[Tuple[int, int], SparseRow] = {}
    for i in range(m):
        for j in range(i + 1, m):
            target = levels[i] + levels[j]
            if target > len(growth.dims):
                continue
            w = _as_row(evaluate(field_bracket(adapted[i][1], adapted[j][1]), point))
            coords = solver.coordinates(w)
            projected = {t: c for t, c in coords.items() if levels[t] == target}
            if any(levels[t] > target for t in coords):
                raise InputError("Bracket leaves the filtration; the point is singular for the flag")
            if projected:
                table[(i, j)] = projected
    depth = len(growth.dims)
    algebra = NilpotentGradedAlgebra.from_table(
        "symbol", [-lvl for lvl in levels], table, depth,
        labels=tuple(f"X{i}" for i in range(m)),
    )
    return SymbolAlgebra(algebra, tuple(Fraction(c) for c in point), growth, [f for _, f in adapted])


# -- flat models ----------------------------------------------------------------


@lru_cache(maxsize=None)
def bch_coefficients(count: int) -> Tuple[Fraction, ...]:
    """Taylor coefficients c_0..c_(count-1) of z / (1 - exp(-z))"""
    z = sympy.Symbol('z')
    series = sympy.series(z / (1 - sympy.exp(-z)), z, 0, count).removeO()
    return tuple(_fraction(series.coeff(z, k)) for k in range(count))


def model_fields(n: GradedLieAlgebra) -> List[PolyVectorField]:
    """
    Left-invariant fields of the degree -1 basis on the group of n, in
    exponential coordinates of the first kind: X_v(x) = sum_k c_k ad(x)^k v
    with c_k the coefficients of z / (1 - exp(-z)); the sum stops at the
    nilpotency step.
    """
    if any(d >= 0 for d in n.degrees):
        raise InputError(f"{n.name} has components of non-negative degree")
    if sum(generated_dims(n)) != n.dim:
        raise InputError(f"{n.name} is not generated by its degree -1 part")
    m = n.dim
    gens = variables(m)
    zero = sympy.Poly(0, *gens, domain='QQ')
    coords = [sympy.Poly(x, *gens, domain='QQ') for x in gens]
    depth = max(-d for d in n.degrees)
    c = bch_coefficients(depth + 1)

    def ad_x(w: List[sympy.Poly]) -> List[sympy.Poly]:
        out = [zero] * m
        for i in range(m):
            for j in range(m):
                if w[j].is_zero:
                    continue
                for t, coeff in n.bracket_basis(i, j).items():
                    out[t] = out[t] + coords[i] * w[j] * _rational(coeff)
        return out

    fields = []
    for v in n.component(-1):
        term = [sympy.Poly(1 if t == v else 0, *gens, domain='QQ') for t in range(m)]
        total = list(term)
        for k in range(1, depth + 1):
            term = ad_x(term)
            if all(p.is_zero for p in term):
                break
            total = [a + b * _rational(c[k]) for a, b in zip(total, term)]
        fields.append(PolyVectorField(m, tuple(total)))
    logger.info(f"Model fields of {n.name}: {len(fields)} fields on R^{m}")
    return fields


# -- genericity -------------------------------------------------------------------


class Rank4Type(str, Enum):
    ELLIPTIC = "elliptic"
    HYPERBOLIC = "hyperbolic"
    NON_GENERIC = "non_generic"


GENERICITY_FAMILIES = ("so_n", "g2", "rank4")


def _levi_rank(n: GradedLieAlgebra, i: int, j: int) -> int:
    """Rank of the bracket map g_i x g_j -> g_(i+j)"""
    target = n.component(i + j)
    if not target:
        return 0
    where = {t: c for c, t in enumerate(target)}
    if i == j:
        pairs = [(a, b) for a_pos, a in enumerate(n.component(i)) for b in n.component(i)[a_pos + 1:]]
    else:
        pairs = [(a, b) for a in n.component(i) for b in n.component(j)]
    rows = [{where[t]: c for t, c in n.bracket_basis(a, b).items()} for a, b in pairs]
    return rank(RatMatrix.from_rows(rows, len(target))) if rows else 0


def genericity_test(s: SymbolAlgebra, family: str) -> Report:
    """
    Structural genericity criteria for a symbol

    Args:
        s: symbol algebra
        family: so_n, g2 or rank4

    Returns:
        Report with one entry per criterion
    """
    if family not in GENERICITY_FAMILIES:
        raise InputError(f"Unknown genericity family {family!r}; expected one of {GENERICITY_FAMILIES}")
    n = s.algebra
    dims = s.component_dims
    report = Report(f"{family} genericity of {n.name}")
    if family == "so_n":
        r = dims[0] if dims else 0
        expected = (r, comb(r, 2))
        report.add('dims', dims == expected, f"{dims} vs {expected}", dims=list(dims))
        if dims == expected:
            levi = _levi_rank(n, -1, -1)
            report.add('levi', levi == comb(r, 2), f"Lambda^2 of degree -1 -> degree -2 has rank {levi}", rank=levi)
    elif family == "g2":
        report.add('dims', dims == (2, 1, 2), f"{dims} vs (2, 1, 2)", dims=list(dims))
        if dims == (2, 1, 2):
            first, second = _levi_rank(n, -1, -1), _levi_rank(n, -1, -2)
            report.add('levi', first == 1 and second == 2,
                       f"Levi maps of rank {first} and {second}", ranks=[first, second])
    else:
        report.add('dims', dims == (4, 3), f"{dims} vs (4, 3)", dims=list(dims))
        if dims == (4, 3):
            levi = _levi_rank(n, -1, -1)
            report.add('levi', levi == 3, f"Levi bracket has rank {levi}", rank=levi)
            der0 = graded_derivations(n, 0).dim
            report.add('der0', der0 == 7, f"dim der_0 = {der0}", dim=der0)
    logger.info(f"Genericity ({family}) of {n.name}: {'pass' if report.passed else 'FAIL'}")
    return report


def _degree_minus_one_blocks(n: GradedLieAlgebra) -> List[RatMatrix]:
    """Restrictions of a basis of der_0(n) to the degree -1 component"""
    ones = n.component(-1)
    where = {t: c for c, t in enumerate(ones)}
    out = []
    for vec in graded_derivations(n, 0).vectors():
        rows: List[SparseRow] = [{} for _ in ones]
        for c, v in vec.items():
            s, r = divmod(c, n.dim)
            if s in where and r in where:
                rows[where[s]][where[r]] = v
        out.append(RatMatrix.from_rows(rows, len(ones)))
    return out


def invariant_conformal_forms(s: SymbolAlgebra) -> Tuple[Subspace, int]:
    """
    Symmetric Q on the degree -1 component with A^T Q + Q A = (tr A / 2) Q for every
    A in der_0; the factor is forced for a nondegenerate Q on a 4-dim space

    Returns:
        (solution space in packed upper-triangular coordinates, dim der_0)
    """
    blocks = _degree_minus_one_blocks(s.algebra)
    d = len(s.algebra.component(-1))
    unknowns = [(i, j) for i in range(d) for j in range(i, d)]
    col = {u: c for c, u in enumerate(unknowns)}

    def q_index(i: int, j: int) -> int:
        return col[(min(i, j), max(i, j))]

    rows: List[SparseRow] = []
    for a in blocks:
        dense = a.dense()
        half_trace = sum((dense[i][i] for i in range(d)), Fraction(0)) / 2
        for i in range(d):
            for j in range(i, d):
                # (A^T Q + Q A - (tr A / 2) Q)[i][j]
                eq: SparseRow = {}
                for k in range(d):
                    for idx, v in ((q_index(k, j), dense[k][i]), (q_index(i, k), dense[k][j])):
                        if v:
                            eq[idx] = eq.get(idx, Fraction(0)) + v
                eq[q_index(i, j)] = eq.get(q_index(i, j), Fraction(0)) - half_trace
                rows.append({c: v for c, v in eq.items() if v})
    return kernel(RatMatrix.from_rows(rows, len(unknowns))), len(blocks)


def classify_rank4(s: SymbolAlgebra) -> Rank4Type:
    """elliptic / hyperbolic by the signature of the invariant conformal class on degree -1"""
    if s.component_dims != (4, 3):
        raise InputError(f"classify_rank4 needs a symbol with dims (4, 3), got {s.component_dims}")
    forms, der0_dim = invariant_conformal_forms(s)
    if der0_dim != 7 or forms.dim != 1:
        logger.warning(f"No unique invariant conformal class: dim der_0 = {der0_dim}, solutions {forms.dim}")
        return Rank4Type.NON_GENERIC
    packed = forms.vectors()[0]
    d = 4
    rows: List[SparseRow] = [{} for _ in range(d)]
    c = 0
    for i in range(d):
        for j in range(i, d):
            v = packed.get(c, Fraction(0))
            if v:
                rows[i][j] = v
                rows[j][i] = v
            c += 1
    pos, neg, zero = inertia(RatMatrix.from_rows(rows, d))
    logger.info(f"Invariant conformal form has inertia ({pos}, {neg}, {zero})")
    if zero:
        return Rank4Type.NON_GENERIC
    if pos == 4 or neg == 4:
        return Rank4Type.ELLIPTIC
    if pos == 2 and neg == 2:
        return Rank4Type.HYPERBOLIC
    return Rank4Type.NON_GENERIC


def symbol_of(g: GradedLieAlgebra) -> SymbolAlgebra:
    """Symbol of the flat model of g at the origin"""
    n = g.negative_part() if not isinstance(g, NilpotentGradedAlgebra) else g
    fields = model_fields(n)
    return symbol_at(fields, [Fraction(0)] * n.dim)
