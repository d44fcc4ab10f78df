"""
Quaternionic real form sp(2, 1) with its |2|-grading (elliptic type)
File: models/family_sp21.py
"""

from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from models.algebra_base import FamilyBase, FamilyConfig, GradedLieAlgebra
from models.matrix_realization import SparseMatrix, algebra_from_matrices, three_block_elements


UNITS = ("1", "i", "j", "k")

# unit products: (a, b) -> (sign, index) for basis 1, i, j, k
_PRODUCT: Dict[Tuple[int, int], Tuple[int, int]] = {
    (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}


def unit_product(a: int, b: int) -> Tuple[int, int]:
    if a == 0:
        return 1, b
    if b == 0:
        return 1, a
    return _PRODUCT[(a, b)]


def left_multiplication(a: int) -> SparseMatrix:
    """4x4 real matrix of x -> q_a x; column b holds q_a q_b"""
    out: SparseMatrix = {}
    for b in range(4):
        sign, t = unit_product(a, b)
        out[(t, b)] = Fraction(sign)
    return out


def conjugate(m: SparseMatrix) -> SparseMatrix:
    """Quaternion conjugation; on left-multiplication matrices it is the transpose"""
    return {(c, r): v for (r, c), v in m.items()}


QUATERNIONS = [(UNITS[a], left_multiplication(a)) for a in range(4)]
IMAGINARY = QUATERNIONS[1:]


class FamilySp21(FamilyBase):
    """sp(2, 1) as 3x3 quaternionic block matrices, realized in gl(12, R)"""

    code = "sp21"

    def __init__(self, config: Optional[FamilyConfig] = None):
        super().__init__(config)

    def build(self, **params) -> GradedLieAlgebra:
        elements = three_block_elements(4, QUATERNIONS, IMAGINARY, conjugate)
        return algebra_from_matrices(
            "sp(2,1)", 12, elements, k=2, family=self.code,
            cartan_labels=["A11[1]", "A11[i]", "A22[i]"],
        )

    def witnesses(self, g: GradedLieAlgebra) -> Dict[str, Dict[int, List[Dict[int, Fraction]]]]:
        # the parabolic subalgebra is the extremal one here; it is already in the common catalog
        return {}
