"""
Split G2 with the |3|-grading of the short simple root
File: models/family_g2.py
"""

from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Tuple
import logging

from core.exact_linalg import RatMatrix, kernel
from core.exceptions import InputError
from models.algebra_base import FamilyBase, FamilyConfig, GradedLieAlgebra, full_components
from models.matrix_realization import (
    MatrixBasisElement, SparseMatrix, algebra_from_matrices, commutator, mat_scale,
)


logger = logging.getLogger(__name__)

Root = Tuple[int, int]

# A[i][j] = <alpha_i, alpha_j^vee>; alpha_1 is the short root
CARTAN_MATRIX = ((2, -1), (-3, 2))

# Basis e0, e1, e2, e3, f1, f2, f3 of R^7, weights in (eps1, eps2) coordinates
WEIGHTS: Tuple[Tuple[int, int], ...] = ((0, 0), (1, 0), (0, 1), (-1, -1), (-1, 0), (0, -1), (1, 1))

# Split 3-form e^123 + f^123 + sum_i e^0 e^i f^i on sorted index triples
THREE_FORM: Dict[Tuple[int, int, int], int] = {
    (1, 2, 3): 1, (4, 5, 6): 1, (0, 1, 4): 1, (0, 2, 5): 1, (0, 3, 6): 1,
}


def _phi(a: int, b: int, c: int) -> int:
    """Alternating extension of THREE_FORM"""
    if len({a, b, c}) < 3:
        return 0
    triple = [a, b, c]
    sign = 1
    for i in range(3):
        for j in range(2 - i):
            if triple[j] > triple[j + 1]:
                triple[j], triple[j + 1] = triple[j + 1], triple[j]
                sign = -sign
    return sign * THREE_FORM.get(tuple(triple), 0)


def positive_roots() -> List[Root]:
    """Positive roots as (c1, c2) in simple-root coordinates, by height then lexicographically"""
    simple = [(1, 0), (0, 1)]
    found = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            for i in range(2):
                # alpha_i string through beta: beta - r alpha_i, ..., beta + q alpha_i
                r = 0
                while True:
                    lower = tuple(beta[j] - (r + 1) * (j == i) for j in range(2))
                    if lower in found:
                        r += 1
                    else:
                        break
                pairing = sum(beta[j] * CARTAN_MATRIX[j][i] for j in range(2))
                q = r - pairing
                if q > 0:
                    up = tuple(beta[j] + (j == i) for j in range(2))
                    if up not in found:
                        found.add(up)
                        nxt.append(up)
        frontier = nxt
    return sorted(found, key=lambda r: (sum(r), r))


def root_weight(root: Root, sign: int = 1) -> Tuple[int, int]:
    """alpha_1 = eps2, alpha_2 = eps1 - eps2"""
    c1, c2 = root
    return sign * c2, sign * (c1 - c2)


def _root_space(weight: Tuple[int, int]) -> SparseMatrix:
    """The one-dimensional weight space of the 3-form stabilizer"""
    unknowns = [(a, b) for a in range(7) for b in range(7)
                if (WEIGHTS[a][0] - WEIGHTS[b][0], WEIGHTS[a][1] - WEIGHTS[b][1]) == weight]
    rows = []
    for u, v, w in combinations(range(7), 3):
        eq: Dict[int, Fraction] = {}
        for col, (d, x) in enumerate(unknowns):
            # X acts on the x-th slot; X[d][x] moves e_x to e_d
            coeff = 0
            if x == u:
                coeff += _phi(d, v, w)
            if x == v:
                coeff += _phi(u, d, w)
            if x == w:
                coeff += _phi(u, v, d)
            if coeff:
                eq[col] = eq.get(col, Fraction(0)) + coeff
        if eq:
            rows.append(eq)
    space = kernel(RatMatrix.from_rows(rows, len(unknowns)))
    if space.dim != 1:
        raise InputError(f"Weight {weight} has a {space.dim}-dimensional stabilizer space")
    vec = space.vectors()[0]
    return {unknowns[c]: v for c, v in vec.items()}


def _ratio(a: SparseMatrix, b: SparseMatrix) -> Fraction:
    """c with a = c * b, for b nonzero and a proportional to b"""
    key = next(iter(b))
    c = a.get(key, Fraction(0)) / b[key]
    if {k: v for k, v in a.items()} != mat_scale(b, c):
        raise InputError("Matrices are not proportional")
    return c


class FamilyG2(FamilyBase):
    """Split G2 inside gl(7), graded by the alpha_1 coefficient"""

    code = "g2"

    def __init__(self, config: Optional[FamilyConfig] = None):
        super().__init__(config)

    def build(self, **params) -> GradedLieAlgebra:
        roots = positive_roots()
        simple = [(1, 0), (0, 1)]
        e: Dict[Root, SparseMatrix] = {}
        f: Dict[Root, SparseMatrix] = {}
        h: List[SparseMatrix] = []
        for alpha in simple:
            e[alpha] = _root_space(root_weight(alpha))
            f_raw = _root_space(root_weight(alpha, -1))
            h_raw = commutator(e[alpha], f_raw)
            c = _ratio(commutator(h_raw, e[alpha]), e[alpha])
            scale = Fraction(2) / c
            f[alpha] = mat_scale(f_raw, scale)
            h.append(mat_scale(h_raw, scale))

        found = set(simple)
        for beta in roots:
            if beta in found:
                continue
            i = next(i for i, a in enumerate(simple)
                     if tuple(b - s for b, s in zip(beta, a)) in found)
            alpha = simple[i]
            prev = tuple(b - s for b, s in zip(beta, alpha))
            p = 0
            while tuple(x - (p + 1) * s for x, s in zip(prev, alpha)) in found:
                p += 1
            e[beta] = mat_scale(commutator(e[alpha], e[prev]), Fraction(1, p + 1))
            f[beta] = mat_scale(commutator(f[alpha], f[prev]), Fraction(1, p + 1))
            found.add(beta)

        elements = [
            MatrixBasisElement("h1", 0, h[0]),
            MatrixBasisElement("h2", 0, h[1]),
        ]
        # degree 0 first keeps h1, h2 ahead of the root vectors after the stable sort
        ordered = sorted(roots, key=lambda r: (sum(r), r))
        for beta in ordered:
            if beta[0] == 0:
                elements.append(MatrixBasisElement(f"e{beta}", 0, e[beta]))
                elements.append(MatrixBasisElement(f"f{beta}", 0, f[beta]))
        for beta in ordered:
            if beta[0]:
                elements.append(MatrixBasisElement(f"f{beta}", -beta[0], f[beta]))
        for beta in ordered:
            if beta[0]:
                elements.append(MatrixBasisElement(f"e{beta}", beta[0], e[beta]))

        logger.info(f"G2 positive roots: {ordered}")
        return algebra_from_matrices(
            "g2(split)", 7, elements, k=3, family=self.code, cartan_labels=["h1", "h2"],
        )

    def line_witness(self, g: GradedLieAlgebra) -> Dict[int, List[Dict[int, Fraction]]]:
        """g_- + b_0 + b_1 with b_1 the root line e(1, 0) of g_1 and b_0 its stabilizer in g_0"""
        line = [{g.labels.index("e(1, 0)"): Fraction(1)}]
        comps = full_components(g, (-3, -2, -1))
        comps[0] = g.stabilizer(1, line)
        comps[1] = line
        return comps

    def witnesses(self, g: GradedLieAlgebra) -> Dict[str, Dict[int, List[Dict[int, Fraction]]]]:
        return {"g_- + b0 + line": self.line_witness(g)}
