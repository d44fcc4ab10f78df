"""
Matrix realizations: basis matrices -> structure constants
File: models/matrix_realization.py
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple
import logging

from core.exact_linalg import CoordinateSolver
from core.exceptions import InputError
from models.algebra_base import GradedLieAlgebra, pack


logger = logging.getLogger(__name__)

SparseMatrix = Dict[Tuple[int, int], Fraction]


@dataclass
class MatrixBasisElement:
    """One basis element of a matrix Lie algebra"""
    label: str
    degree: int
    matrix: SparseMatrix


def mat_add(a: SparseMatrix, b: SparseMatrix, scale: Fraction = Fraction(1)) -> SparseMatrix:
    out = dict(a)
    for key, v in b.items():
        s = out.get(key, Fraction(0)) + scale * v
        if s:
            out[key] = s
        else:
            out.pop(key, None)
    return out


def mat_scale(a: SparseMatrix, c: Fraction) -> SparseMatrix:
    return {key: c * v for key, v in a.items() if c * v}


def mat_mul(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    rows_b: Dict[int, List[Tuple[int, Fraction]]] = {}
    for (r, c), v in b.items():
        rows_b.setdefault(r, []).append((c, v))
    out: SparseMatrix = {}
    for (r, c), v in a.items():
        for c2, w in rows_b.get(c, ()):
            s = out.get((r, c2), Fraction(0)) + v * w
            if s:
                out[(r, c2)] = s
            else:
                out.pop((r, c2), None)
    return out


def commutator(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    return mat_add(mat_mul(a, b), mat_mul(b, a), Fraction(-1))


def place_block(target: SparseMatrix, block: SparseMatrix, row0: int, col0: int, scale: Fraction = Fraction(1)):
    """Add scale * block at offset (row0, col0) into target, in place"""
    for (r, c), v in block.items():
        key = (row0 + r, col0 + c)
        s = target.get(key, Fraction(0)) + scale * v
        if s:
            target[key] = s
        else:
            target.pop(key, None)


def flatten(m: SparseMatrix, size: int) -> Dict[int, Fraction]:
    return {r * size + c: v for (r, c), v in m.items() if v}


def algebra_from_matrices(
    name: str,
    size: int,
    elements: Sequence[MatrixBasisElement],
    k: int,
    family: Optional[str] = None,
    params: Tuple[Tuple[str, int], ...] = (),
    cartan_labels: Sequence[str] = (),
) -> GradedLieAlgebra:
    """
    Structure constants of the span of `elements` under the commutator

    Args:
        name: algebra name
        size: matrix size
        elements: basis, already in the canonical order (stably sorted by degree here)
        k: grading depth
        cartan_labels: labels of the basis elements spanning the Cartan subalgebra

    Returns:
        GradedLieAlgebra; raises InputError if the span is not closed
    """
    ordered = sorted(elements, key=lambda e: e.degree)
    vectors = [flatten(e.matrix, size) for e in ordered]
    solver = CoordinateSolver(vectors, size * size)
    table: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for i, a in enumerate(ordered):
        for j in range(i + 1, len(ordered)):
            comm = commutator(a.matrix, ordered[j].matrix)
            if not comm:
                continue
            coords = solver.coordinates(flatten(comm, size))
            for t in coords:
                if ordered[t].degree != a.degree + ordered[j].degree:
                    raise InputError(
                        f"[{a.label}, {ordered[j].label}] leaves degree {a.degree + ordered[j].degree}"
                    )
            table[(i, j)] = coords
    labels = tuple(e.label for e in ordered)
    where = {label: i for i, label in enumerate(labels)}
    cartan = tuple(pack({where[label]: Fraction(1)}) for label in cartan_labels)
    logger.debug(f"Built {name} from {len(ordered)} matrices of size {size}")
    return GradedLieAlgebra.from_table(
        name, [e.degree for e in ordered], table, k,
        family=family, params=params, cartan=cartan, labels=labels,
    )


def three_block_elements(
    block: int,
    full: Sequence[Tuple[str, SparseMatrix]],
    traceless: Sequence[Tuple[str, SparseMatrix]],
    anti,
) -> List[MatrixBasisElement]:
    """
    Basis of the block matrices

        [[A11,  A12,        A13       ],
         [A21,  A22,       -anti(A12) ],
         [A31, -anti(A21), -anti(A11) ]]

    with A11, A12, A21 running over `full` and A13, A22, A31 over
    `traceless`; a block in block row r and block column c has degree c - r.
    """
    elements: List[MatrixBasisElement] = []

    def element(name: str, degree: int, parts) -> MatrixBasisElement:
        m: SparseMatrix = {}
        for (r, c), blk, scale in parts:
            place_block(m, blk, r * block, c * block, scale)
        return MatrixBasisElement(name, degree, m)

    for name, t in traceless:
        elements.append(element(f"A31[{name}]", -2, [((2, 0), t, Fraction(1))]))
    for name, a in full:
        elements.append(element(f"A21[{name}]", -1, [((1, 0), a, Fraction(1)), ((2, 1), anti(a), Fraction(-1))]))
    for name, a in full:
        elements.append(element(f"A11[{name}]", 0, [((0, 0), a, Fraction(1)), ((2, 2), anti(a), Fraction(-1))]))
    for name, t in traceless:
        elements.append(element(f"A22[{name}]", 0, [((1, 1), t, Fraction(1))]))
    for name, a in full:
        elements.append(element(f"A12[{name}]", 1, [((0, 1), a, Fraction(1)), ((1, 2), anti(a), Fraction(-1))]))
    for name, t in traceless:
        elements.append(element(f"A13[{name}]", 2, [((0, 2), t, Fraction(1))]))
    return elements
