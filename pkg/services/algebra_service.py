"""
Graded Lie Algebra Service - construction, validation, invariant forms
File: services/algebra_service.py
"""

from datetime import datetime
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Optional, Tuple
import logging

from core.exact_linalg import RatMatrix, SparseRow, Subspace, kernel, rank
from core.exceptions import InputError
from models.algebra_base import FamilyBase, GradedLieAlgebra, NilpotentGradedAlgebra, Report
from models.family_g2 import FamilyG2
from models.family_so_split import FamilySoSplit
from models.family_sp21 import FamilySp21
from models.family_sp6 import FamilySp6


logger = logging.getLogger(__name__)

BUILTIN_FAMILIES = ("so-split", "g2", "sp6-split", "sp21")


class AlgebraService:
    """Registry of the built-in families plus the checks every algebra goes through"""

    def __init__(self):
        self.families: Dict[str, FamilyBase] = {
            'so-split': FamilySoSplit(),
            'g2': FamilyG2(),
            'sp6-split': FamilySp6(),
            'sp21': FamilySp21(),
        }
        self.algebra_cache: Dict[Tuple, GradedLieAlgebra] = {}

    def get_available_families(self) -> List[str]:
        return list(self.families.keys())

    def get_family(self, code: str) -> FamilyBase:
        if code not in self.families:
            raise InputError(f"Unknown family {code!r}; available: {', '.join(self.families)}")
        return self.families[code]

    def build(self, code: str, **params) -> GradedLieAlgebra:
        key = (code, tuple(sorted(params.items())))
        if key not in self.algebra_cache:
            family = self.get_family(code)
            logger.info(f"Building {family.family_name} with {params or 'default parameters'}")
            self.algebra_cache[key] = family.build(**params)
        return self.algebra_cache[key]

    def process_build(self, code: str, **params) -> Dict:
        """
        Build and validate one family member

        Args:
            code: family code (so-split, g2, sp6-split, sp21)
            params: constructor parameters

        Returns:
            Dictionary with the algebra, its validation report and a timestamp
        """
        try:
            g = self.build(code, **params)
            report = validate(g)
            return {
                'success': True,
                'family': code,
                'algebra': g,
                'report': report,
                'summary': g.summary(),
                'timestamp': datetime.now().isoformat(),
            }
        except Exception as e:
            logger.error(f"Error building {code}: {str(e)}")
            return {
                'success': False,
                'family': code,
                'error': str(e),
                'timestamp': datetime.now().isoformat(),
            }


@lru_cache(maxsize=None)
def default_service() -> AlgebraService:
    return AlgebraService()


def build_so_split(n: int) -> GradedLieAlgebra:
    return default_service().build("so-split", n=n)


def build_g2_split() -> GradedLieAlgebra:
    return default_service().build("g2")


def build_sp6_split() -> GradedLieAlgebra:
    return default_service().build("sp6-split")


def build_sp21() -> GradedLieAlgebra:
    return default_service().build("sp21")


# -- validation --------------------------------------------------------------


def jacobiator(g: GradedLieAlgebra, i: int, j: int, k: int) -> SparseRow:
    ei, ej, ek = ({i: Fraction(1)}, {j: Fraction(1)}, {k: Fraction(1)})
    out: SparseRow = {}
    for a, b, c in ((ei, ej, ek), (ej, ek, ei), (ek, ei, ej)):
        for t, v in g.bracket(a, g.bracket(b, c)).items():
            s = out.get(t, Fraction(0)) + v
            if s:
                out[t] = s
            else:
                out.pop(t, None)
    return out


def generated_dims(g: GradedLieAlgebra) -> List[int]:
    """Dimensions of g_-1, [g_-1, g_-1], [g_-1, [g_-1, g_-1]], ... inside g_-"""
    gens = [{i: Fraction(1)} for i in g.component(-1)]
    layer = Subspace.from_vectors(gens, g.dim)
    dims = []
    while layer.dim:
        dims.append(layer.dim)
        layer = Subspace.from_vectors(
            [g.bracket(x, y) for x in gens for y in layer.vectors()], g.dim,
        )
    return dims


def validate(g: GradedLieAlgebra, require_semisimple: Optional[bool] = None) -> Report:
    """
    Structural checks of a graded Lie algebra

    Args:
        g: algebra to check
        require_semisimple: whether a degenerate Killing form is a failure;
            defaults to True for the built-in families only

    Returns:
        Report with antisymmetry, jacobi, grading, generation and killing entries
    """
    report = Report(g.name)
    if require_semisimple is None:
        require_semisimple = g.family in BUILTIN_FAMILIES and not isinstance(g, NilpotentGradedAlgebra)

    given = {(i, j): dict(vec) for i, j, vec in g.brackets}
    bad_pairs = []
    for (i, j), vec in sorted(given.items()):
        if i == j and vec:
            bad_pairs.append([i, j])
        elif (j, i) in given and i < j:
            other = given[(j, i)]
            if any(vec.get(t, 0) + other.get(t, 0) for t in set(vec) | set(other)):
                bad_pairs.append([i, j])
    report.add('antisymmetry', not bad_pairs,
               f"{len(bad_pairs)} inconsistent pairs" if bad_pairs else "ok", pairs=bad_pairs[:10])

    bad_triple = None
    for i, j, k in combinations(range(g.dim), 3):
        if jacobiator(g, i, j, k):
            bad_triple = [i, j, k]
            break
    report.add('jacobi', bad_triple is None,
               f"fails on triple {bad_triple}" if bad_triple else f"all {g.dim} choose 3 triples",
               triple=bad_triple)

    bad_degrees = [i for i, d in enumerate(g.degrees) if abs(d) > g.k]
    bad_grading = None
    for (i, j), vec in sorted(g.table.items()):
        target = g.degrees[i] + g.degrees[j]
        if any(g.degrees[t] != target for t in vec):
            bad_grading = [i, j]
            break
    report.add('grading', not bad_degrees and bad_grading is None,
               "ok" if not bad_degrees and bad_grading is None
               else f"degrees out of range {bad_degrees}" if bad_degrees
               else f"[e{bad_grading[0]}, e{bad_grading[1]}] has the wrong degree",
               pair=bad_grading)

    dims = generated_dims(g)
    negative = len(g.negative_indices())
    depth_ok = bool(g.component(-g.k))
    report.add('generation', sum(dims) == negative and depth_ok,
               f"g_-1 generates {sum(dims)} of {negative}" + ("" if depth_ok else f"; g_-{g.k} is zero"),
               layers=dims)

    killing_rank = rank(killing_form(g))
    report.add('killing', killing_rank == g.dim or not require_semisimple,
               f"rank {killing_rank} of {g.dim}", rank=killing_rank)

    logger.info(f"Validated {g.name}: {'pass' if report.passed else 'FAIL'}")
    return report


@lru_cache(maxsize=64)
def _validation(g: GradedLieAlgebra) -> Report:
    return validate(g)


def ensure_validated(g: GradedLieAlgebra):
    """Raise InputError unless g passes validate"""
    report = _validation(g)
    if not report.passed:
        failed = ", ".join(f"{c.name} ({c.detail})" for c in report.failures())
        raise InputError(f"Algebra {g.name} failed validation: {failed}")


def ad_entries(g: GradedLieAlgebra, i: int) -> Dict[Tuple[int, int], Fraction]:
    """ad(e_i) as {(row, col): value}"""
    out = {}
    for j in range(g.dim):
        for t, c in g.bracket_basis(i, j).items():
            out[(t, j)] = c
    return out


def killing_form(g: GradedLieAlgebra) -> RatMatrix:
    """B(e_i, e_j) = trace(ad e_i ad e_j)"""
    ads = [ad_entries(g, i) for i in range(g.dim)]
    rows: List[SparseRow] = [{} for _ in range(g.dim)]
    for i in range(g.dim):
        for j in range(i, g.dim):
            aj = ads[j]
            value = sum((v * aj.get((c, r), 0) for (r, c), v in ads[i].items()), Fraction(0))
            if value:
                rows[i][j] = value
                rows[j][i] = value
    return RatMatrix.from_rows(rows, g.dim)


# -- derivations -------------------------------------------------------------


def graded_derivations(n: GradedLieAlgebra, degree: int) -> Subspace:
    """
    Derivations D with D(n_i) inside n_{i+degree}

    Returns:
        Subspace of Q^(dim*dim); coordinate s*dim + r is the e_s
        coefficient of D(e_r)
    """
    dim = n.dim
    unknowns = [(s, r) for r in range(dim) for s in range(dim)
                if n.degrees[s] == n.degrees[r] + degree]
    col = {u: c for c, u in enumerate(unknowns)}
    by_source: Dict[int, List[int]] = {}
    for s, r in unknowns:
        by_source.setdefault(r, []).append(s)

    rows: List[SparseRow] = []
    for a, b in combinations(range(dim), 2):
        eq: Dict[int, SparseRow] = {}

        def add(t: int, c: int, v: Fraction):
            row = eq.setdefault(t, {})
            s = row.get(c, Fraction(0)) + v
            if s:
                row[c] = s
            else:
                row.pop(c, None)

        # D[e_a, e_b]
        for r, coeff in n.bracket_basis(a, b).items():
            for s in by_source.get(r, ()):
                add(s, col[(s, r)], coeff)
        # - [D e_a, e_b]
        for s in by_source.get(a, ()):
            for t, coeff in n.bracket_basis(s, b).items():
                add(t, col[(s, a)], -coeff)
        # - [e_a, D e_b]
        for s in by_source.get(b, ()):
            for t, coeff in n.bracket_basis(a, s).items():
                add(t, col[(s, b)], -coeff)
        rows.extend(row for row in eq.values() if row)

    sol = kernel(RatMatrix.from_rows(rows, len(unknowns)))
    vectors = [{unknowns[c][0] * dim + unknowns[c][1]: v for c, v in x.items()} for x in sol.vectors()]
    logger.info(f"der_{degree}({n.name}) has dimension {len(vectors)}")
    return Subspace.from_vectors(vectors, dim * dim)


def adjoint_derivations(g: GradedLieAlgebra, elements: List[SparseRow]) -> List[SparseRow]:
    """ad(a) restricted to g_-, flattened like graded_derivations output"""
    neg = g.negative_indices()
    where = {old: new for new, old in enumerate(neg)}
    dim = len(neg)
    out = []
    for a in elements:
        vec: SparseRow = {}
        for r, old in enumerate(neg):
            for t, v in g.bracket(a, {old: Fraction(1)}).items():
                if t not in where:
                    raise InputError("Element does not preserve g_-")
                vec[where[t] * dim + r] = v
        out.append(vec)
    return out
