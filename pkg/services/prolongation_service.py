"""
Prolongation Service - Tanaka prolongation of (n, a0)
File: services/prolongation_service.py

An element of the degree-l component (l >= 0) is stored through its values
on the basis of n: the value on e_r lies in degree deg(e_r) + l, given in
n coordinates when that degree is negative and in the basis of the
already computed component otherwise. Degree-l maps are parametrized by
their values on n_-1 and extended to n through a fixed expression of every
basis vector as brackets with generators.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple
import logging

from core.exact_linalg import RatMatrix, SparseRow, Subspace, kernel, solve
from core.exceptions import InputError
from models.algebra_base import GradedLieAlgebra, NilpotentGradedAlgebra, Report
from services.algebra_service import graded_derivations


logger = logging.getLogger(__name__)

# unknown column -> value vector
LinearValue = Dict[int, SparseRow]


@dataclass
class ProlongationResult:
    """Dimensions of the prolongation, degree by degree"""
    component_dims: Dict[int, int]
    terminated: bool
    truncated_at: Optional[int] = None

    @property
    def total(self) -> int:
        return sum(self.component_dims.values())

    def dims_tuple(self) -> Tuple[int, ...]:
        return tuple(self.component_dims[d] for d in sorted(self.component_dims))

    def to_dict(self) -> Dict:
        return {
            'dims': {str(d): v for d, v in sorted(self.component_dims.items())},
            'total': self.total,
            'terminated': self.terminated,
            'truncated_at': self.truncated_at,
        }


def _add_into(target: SparseRow, vec: SparseRow, scale: Fraction):
    for k, v in vec.items():
        s = target.get(k, Fraction(0)) + scale * v
        if s:
            target[k] = s
        else:
            target.pop(k, None)


def _add_linear(target: LinearValue, other: LinearValue, scale: Fraction = Fraction(1)):
    for col, vec in other.items():
        row = target.setdefault(col, {})
        _add_into(row, vec, scale)
        if not row:
            del target[col]


def derivation_commutator(a: SparseRow, b: SparseRow, dim: int) -> SparseRow:
    """[A, B] = AB - BA for derivations flattened as s*dim + r -> A[s][r]"""
    rows_a: List[SparseRow] = [{} for _ in range(dim)]
    rows_b: List[SparseRow] = [{} for _ in range(dim)]
    for c, v in a.items():
        rows_a[c // dim][c % dim] = v
    for c, v in b.items():
        rows_b[c // dim][c % dim] = v
    ma = RatMatrix.from_rows(rows_a, dim)
    mb = RatMatrix.from_rows(rows_b, dim)
    ab, ba = ma @ mb, mb @ ma
    out: SparseRow = {}
    for s in range(dim):
        for r, v in ab.rows[s]:
            out[s * dim + r] = out.get(s * dim + r, Fraction(0)) + v
        for r, v in ba.rows[s]:
            out[s * dim + r] = out.get(s * dim + r, Fraction(0)) - v
    return {c: v for c, v in out.items() if v}


def derivation_algebra_check(n: NilpotentGradedAlgebra, a0: Subspace) -> Report:
    """Whether a0 lies in der_0(n) and is closed under commutator, reported separately"""
    report = Report(f"a0 in der_0({n.name})")
    if a0.ambient_dim != n.dim * n.dim:
        raise InputError(f"a0 must live in Q^{n.dim * n.dim}, got ambient dimension {a0.ambient_dim}")
    der0 = graded_derivations(n, 0)
    inside = der0.contains(a0)
    report.add('inside_der0', inside, f"dim a0 = {a0.dim}, dim der_0 = {der0.dim}",
               dim_a0=a0.dim, dim_der0=der0.dim)
    basis = a0.vectors()
    bad = None
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if not a0.contains_vector(derivation_commutator(basis[i], basis[j], n.dim)):
                bad = [i, j]
                break
        if bad:
            break
    report.add('closed', bad is None, "ok" if bad is None else f"[a{bad[0]}, a{bad[1]}] leaves a0", pair=bad)
    return report


class Prolongation:
    """Degree-by-degree construction of the prolongation of (n, a0)"""

    def __init__(self, n: GradedLieAlgebra, a0: Subspace):
        self.n = n
        self.dim = n.dim
        self.generators = n.component(-1)
        if not self.generators:
            raise InputError(f"{n.name} has no degree -1 part")
        # values[l][b][r]: value of the b-th basis element of degree l on e_r
        self.values: Dict[int, List[List[SparseRow]]] = {}
        self.values[0] = []
        for d in a0.vectors():
            table: List[SparseRow] = [{} for _ in range(self.dim)]
            for c, v in d.items():
                table[c % self.dim][c // self.dim] = v
            self.values[0].append(table)
        self.spanning = self._spanning_expressions()

    def _spanning_expressions(self) -> Dict[int, List[Tuple[Fraction, int, int]]]:
        """e_r = sum c [e_a, e_w] with e_a in n_-1 and deg e_w = deg e_r + 1"""
        n = self.n
        out: Dict[int, List[Tuple[Fraction, int, int]]] = {}
        for r in range(self.dim):
            d = n.degrees[r]
            if d == -1:
                continue
            pairs = [(a, w) for a in self.generators for w in n.component(d + 1)]
            cols = [n.bracket_basis(a, w) for a, w in pairs]
            system = RatMatrix.from_rows(cols, self.dim).transpose() if cols else RatMatrix.zeros(self.dim, 0)
            try:
                coeffs = solve(system, {r: Fraction(1)})
            except InputError:
                raise InputError(f"{n.name} is not generated by its degree -1 part ({n.label(r)})")
            out[r] = [(c, pairs[i][0], pairs[i][1]) for i, c in coeffs.items()]
        return out

    def _act(self, degree: int, vec: SparseRow, r: int) -> SparseRow:
        """[x, e_r] for x of the given degree (n coordinates or component basis)"""
        if degree < 0:
            return self.n.bracket(vec, {r: Fraction(1)})
        out: SparseRow = {}
        for b, c in vec.items():
            _add_into(out, self.values[degree][b][r], c)
        return out

    def _act_linear(self, degree: int, value: LinearValue, r: int) -> LinearValue:
        out: LinearValue = {}
        for col, vec in value.items():
            image = self._act(degree, vec, r)
            if image:
                out[col] = image
        return out

    def step(self, level: int) -> int:
        """Compute the degree-`level` component; returns its dimension"""
        n = self.n
        previous = len(self.values[level - 1])
        unknowns = [(a, b) for a in self.generators for b in range(previous)]
        col_of = {u: i for i, u in enumerate(unknowns)}

        # phi(e_r) as a linear function of the unknowns, degree deg(e_r) + level
        phi: Dict[int, LinearValue] = {}
        for a in self.generators:
            phi[a] = {col_of[(a, b)]: {b: Fraction(1)} for b in range(previous)}
        for r in sorted(self.spanning, key=lambda i: -n.degrees[i]):
            value: LinearValue = {}
            for c, a, w in self.spanning[r]:
                # phi([a, w]) = [phi a, w] + [a, phi w]
                _add_linear(value, self._act_linear(level - 1, phi[a], w), c)
                _add_linear(value, self._act_linear(n.degrees[w] + level, phi[w], a), -c)
            phi[r] = value

        rows: List[SparseRow] = []
        for x in range(self.dim):
            for y in range(x + 1, self.dim):
                # phi([x, y]) - [phi x, y] + [phi y, x]
                eq: LinearValue = {}
                for t, c in n.bracket_basis(x, y).items():
                    _add_linear(eq, phi[t], c)
                _add_linear(eq, self._act_linear(n.degrees[x] + level, phi[x], y), Fraction(-1))
                _add_linear(eq, self._act_linear(n.degrees[y] + level, phi[y], x), Fraction(1))
                by_coord: Dict[int, SparseRow] = {}
                for col, vec in eq.items():
                    for k, v in vec.items():
                        by_coord.setdefault(k, {})[col] = v
                rows.extend(row for row in by_coord.values() if row)

        sols = kernel(RatMatrix.from_rows(rows, len(unknowns))).vectors() if unknowns else []
        self.values[level] = []
        for sol in sols:
            table = []
            for r in range(self.dim):
                out: SparseRow = {}
                for col, vec in phi[r].items():
                    if sol.get(col):
                        _add_into(out, vec, sol[col])
                table.append(out)
            self.values[level].append(table)
        logger.info(f"Prolongation of {n.name}: degree {level} has dimension {len(sols)}")
        return len(sols)


def tanaka_prolong(
    n: NilpotentGradedAlgebra, a0: Optional[Subspace] = None, max_degree: Optional[int] = None,
) -> ProlongationResult:
    """
    Tanaka prolongation of (n, a0)

    Args:
        n: nilpotent graded algebra generated by its degree -1 part
        a0: subalgebra of der_0(n) in flattened coordinates; all of der_0 if omitted
        max_degree: last degree computed, 2k+1 by default

    Returns:
        ProlongationResult; terminated is True when a zero component was reached
    """
    k = max(-d for d in n.degrees) if n.degrees else 1
    if max_degree is None:
        max_degree = 2 * k + 1
    if max_degree < 1:
        raise InputError(f"max_degree must be at least 1, got {max_degree}")
    if a0 is None:
        a0 = graded_derivations(n, 0)
    else:
        check = derivation_algebra_check(n, a0)
        if not check.passed:
            failed = ", ".join(f"{c.name} ({c.detail})" for c in check.failures())
            raise InputError(f"a0 is not a subalgebra of der_0: {failed}")

    dims = {d: len(n.component(d)) for d in range(-k, 0)}
    dims[0] = a0.dim
    builder = Prolongation(n, a0)
    terminated = a0.dim == 0
    level = 0
    while not terminated and level < max_degree:
        level += 1
        dim = builder.step(level)
        if dim == 0:
            terminated = True
        else:
            dims[level] = dim
    result = ProlongationResult(dims, terminated, None if terminated else max_degree)
    logger.info(f"Prolongation of {n.name}: total {result.total}, terminated={terminated}")
    return result


def compare_with_algebra(r: ProlongationResult, g: GradedLieAlgebra) -> Report:
    """Degree-by-degree comparison of prolongation dims with the grading of g"""
    report = Report(f"prolongation vs {g.name}")
    degrees = sorted(set(r.component_dims) | set(range(-g.k, g.k + 1)))
    mismatches = []
    for d in degrees:
        got = r.component_dims.get(d, 0)
        want = len(g.component(d))
        if got != want:
            mismatches.append({'degree': d, 'prolongation': got, 'algebra': want})
    first = mismatches[0] if mismatches else None
    report.add('dims', not mismatches,
               "ok" if not mismatches
               else f"dimension mismatch at degree {first['degree']}: {first['prolongation']} vs {first['algebra']}",
               mismatches=mismatches)
    report.add('terminated', r.terminated,
               "zero component reached" if r.terminated else f"truncated at degree {r.truncated_at}")
    report.add('total', r.total == g.dim, f"{r.total} vs dim g = {g.dim}", total=r.total, dim=g.dim)
    return report
