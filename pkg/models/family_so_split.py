"""
Split orthogonal family so(n+1, n)
File: models/family_so_split.py
"""

from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional

from core.exceptions import InputError
from models.algebra_base import FamilyBase, FamilyConfig, GradedLieAlgebra, full_components
from models.matrix_realization import MatrixBasisElement, algebra_from_matrices


ONE = Fraction(1)


class FamilySoSplit(FamilyBase):
    """
    so(n+1, n) with the |2|-grading from blocks of sizes n, 1, n.

    The invariant form pairs the first and last blocks and is 1 on the
    middle line; a matrix entry in row block r and column block c has
    degree c - r.
    """

    code = "so-split"

    def __init__(self, config: Optional[FamilyConfig] = None):
        super().__init__(config)

    def build(self, n: int = 3, **params) -> GradedLieAlgebra:
        if not isinstance(n, int) or n < 3:
            raise InputError(f"so-split needs n >= 3, got {n}")
        mid, last = n, n + 1
        elements: List[MatrixBasisElement] = []

        for i, j in combinations(range(n), 2):
            elements.append(MatrixBasisElement(
                f"C[{i},{j}]", -2, {(last + i, j): ONE, (last + j, i): -ONE}))
        for j in range(n):
            elements.append(MatrixBasisElement(
                f"w[{j}]", -1, {(mid, j): ONE, (last + j, mid): -ONE}))
        for i in range(n):
            for j in range(n):
                m = {(i, j): ONE}
                m[(last + j, last + i)] = m.get((last + j, last + i), Fraction(0)) - ONE
                elements.append(MatrixBasisElement(f"A[{i},{j}]", 0, {key: v for key, v in m.items() if v}))
        for i in range(n):
            elements.append(MatrixBasisElement(
                f"v[{i}]", 1, {(i, mid): ONE, (mid, last + i): -ONE}))
        for i, j in combinations(range(n), 2):
            elements.append(MatrixBasisElement(
                f"B[{i},{j}]", 2, {(i, last + j): ONE, (j, last + i): -ONE}))

        return algebra_from_matrices(
            f"so({n + 1},{n})", 2 * n + 1, elements, k=2,
            family=self.code, params=(("n", n),),
            cartan_labels=[f"A[{i},{i}]" for i in range(n)],
        )

    def bk_components(self, g: GradedLieAlgebra, k: int) -> Dict[int, List[Dict[int, Fraction]]]:
        """b^k = g_- + (block upper triangular A) + span(v_i, i < k) + span(B_ij, i < j < k)"""
        n = g.param("n")
        if n is None:
            raise InputError("b^k needs an so-split algebra")
        if not 1 <= k <= n - 1:
            raise InputError(f"b^k needs 1 <= k <= n-1, got k={k} for n={n}")
        index = {label: i for i, label in enumerate(g.labels)}
        comps = full_components(g, (-2, -1))
        comps[0] = [{index[f"A[{i},{j}]"]: ONE} for i in range(n) for j in range(n)
                    if not (i >= k and j < k)]
        comps[1] = [{index[f"v[{i}]"]: ONE} for i in range(k)]
        comps[2] = [{index[f"B[{i},{j}]"]: ONE} for i, j in combinations(range(k), 2)]
        return comps

    def witnesses(self, g: GradedLieAlgebra) -> Dict[str, Dict[int, List[Dict[int, Fraction]]]]:
        n = g.param("n")
        return {f"b^{n - 1}": self.bk_components(g, n - 1)}

    def gap_interval(self, n: Optional[int] = None):
        n = n or 3
        return 2 * n * n - n + 1, 2 * n * n + n

    def stabilizer_formula(self, n: int, ell: int) -> int:
        return n * n - (n - ell) * ell
