"""
Split symplectic algebra sp(6, R) with its |2|-grading (hyperbolic type)
File: models/family_sp6.py
"""

from fractions import Fraction
from typing import Dict, List, Optional

from models.algebra_base import FamilyBase, FamilyConfig, GradedLieAlgebra, full_components
from models.matrix_realization import SparseMatrix, algebra_from_matrices, three_block_elements


ONE = Fraction(1)

# gl(2) matrix units in lexicographic order
GL2 = [(f"E{r}{c}", {(r, c): ONE}) for r in range(2) for c in range(2)]
SL2 = [("H", {(0, 0): ONE, (1, 1): -ONE}), ("E01", {(0, 1): ONE}), ("E10", {(1, 0): ONE})]


def adjugate(a: SparseMatrix) -> SparseMatrix:
    """Classical adjoint of a 2x2 matrix: [[a, b], [c, d]] -> [[d, -b], [-c, a]]"""
    moves = {(0, 0): ((1, 1), ONE), (1, 1): ((0, 0), ONE), (0, 1): ((0, 1), -ONE), (1, 0): ((1, 0), -ONE)}
    out: SparseMatrix = {}
    for key, v in a.items():
        target, sign = moves[key]
        out[target] = out.get(target, Fraction(0)) + sign * v
    return {key: v for key, v in out.items() if v}


class FamilySp6(FamilyBase):
    """sp(6, R) as 3x3 block matrices with 2x2 blocks"""

    code = "sp6-split"

    def __init__(self, config: Optional[FamilyConfig] = None):
        super().__init__(config)

    def build(self, **params) -> GradedLieAlgebra:
        elements = three_block_elements(2, GL2, SL2, adjugate)
        return algebra_from_matrices(
            "sp(6,R)", 6, elements, k=2, family=self.code,
            cartan_labels=["A11[E00]", "A11[E11]", "A22[H]"],
        )

    def upper_witness(self, g: GradedLieAlgebra) -> Dict[int, List[Dict[int, Fraction]]]:
        """
        The 16-dimensional subalgebra: A11 upper triangular, A12 with zero
        second row, A13 a multiple of E01, everything else free.
        """
        index = {label: i for i, label in enumerate(g.labels)}

        def units(labels):
            return [{index[label]: ONE} for label in labels]

        comps = full_components(g, (-2, -1))
        comps[0] = units(["A11[E00]", "A11[E01]", "A11[E11]", "A22[H]", "A22[E01]", "A22[E10]"])
        comps[1] = units(["A12[E00]", "A12[E01]"])
        comps[2] = units(["A13[E01]"])
        return comps

    def witnesses(self, g: GradedLieAlgebra) -> Dict[str, Dict[int, List[Dict[int, Fraction]]]]:
        return {"upper block": self.upper_witness(g)}
