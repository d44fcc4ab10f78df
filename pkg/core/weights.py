"""
Joint eigenspaces of commuting semisimple rational matrices
File: core/weights.py

A complex vector x + iy is stored as the real pair (x, y) in Q^(2d); a
complex eigenvalue a + ib is stored as the pair (a, b). Only eigenvalues
with rational real and imaginary part are found; callers check the
returned dimensions against d.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple
import logging

import numpy as np
import sympy

from core.exact_linalg import RatMatrix, SparseRow, Subspace, kernel, solve

logger = logging.getLogger(__name__)

Eigenvalue = Tuple[Fraction, Fraction]
Weight = Tuple[Eigenvalue, ...]


@dataclass(frozen=True)
class WeightSpace:
    """Joint eigenspace in realified coordinates (real dim = 2 * complex dim)"""
    weight: Weight
    basis: Tuple[Tuple[Tuple[int, Fraction], ...], ...]

    @property
    def complex_dim(self) -> int:
        return len(self.basis) // 2

    def vectors(self) -> List[SparseRow]:
        return [dict(v) for v in self.basis]

    def is_zero_weight(self) -> bool:
        return all(a == 0 and b == 0 for a, b in self.weight)


def krylov_minimal_polynomial(m: RatMatrix, v: SparseRow) -> List[Fraction]:
    """
    Monic polynomial p of least degree with p(m) v = 0

    Returns:
        coefficients [c_0, ..., c_{deg-1}, 1]
    """
    seq = [dict(v)]
    while True:
        nxt = m.apply(seq[-1])
        span = Subspace.from_vectors(seq, m.ncols)
        if span.contains_vector(nxt):
            # nxt = sum c_i seq[i]
            cols = RatMatrix.from_rows(seq, m.ncols).transpose()
            coeffs = solve(cols, nxt)
            return [-coeffs.get(i, Fraction(0)) for i in range(len(seq))] + [Fraction(1)]
        seq.append(nxt)


def rational_eigenvalues(coeffs: Sequence[Fraction]) -> List[Eigenvalue]:
    """Roots a + ib of the polynomial with a, b rational (both signs of b)"""
    x = sympy.Symbol('x')
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], x, domain='QQ')
    found: List[Eigenvalue] = []
    for factor, _ in sympy.factor_list(poly)[1]:
        fac = sympy.Poly(factor, x, domain='QQ')
        lead = fac.LC()
        c = [sympy.Rational(t) / lead for t in fac.all_coeffs()]
        if fac.degree() == 1:
            root = -c[1]
            found.append((Fraction(int(root.p), int(root.q)), Fraction(0)))
        elif fac.degree() == 2:
            # x^2 + bx + c0 with negative discriminant
            b, c0 = c[1], c[2]
            alpha = -b / 2
            beta = sympy.sqrt(c0 - alpha ** 2)
            if beta.is_Rational and beta != 0:
                a = Fraction(int(alpha.p), int(alpha.q))
                bb = Fraction(int(beta.p), int(beta.q))
                found.extend([(a, bb), (a, -bb)])
            else:
                logger.warning(f"Skipping eigenvalues of {factor}: not Gaussian rational")
        else:
            logger.warning(f"Skipping irreducible factor of degree {fac.degree()}")
    return found


def _realified_condition(m: RatMatrix, value: Eigenvalue) -> RatMatrix:
    """Rows of (m - a)x + b y = 0 and (m - a)y - b x = 0 on Q^(2d)"""
    a, b = value
    d = m.ncols
    rows: List[SparseRow] = []
    for r in range(m.nrows):
        row = dict(m.row(r))
        top = {c: v for c, v in row.items()}
        top[r] = top.get(r, Fraction(0)) - a
        bottom = {d + c: v for c, v in top.items()}
        top = {c: v for c, v in top.items() if v}
        if b:
            top[d + r] = top.get(d + r, Fraction(0)) + b
            bottom[r] = bottom.get(r, Fraction(0)) - b
        rows.append({c: v for c, v in top.items() if v})
        rows.append({c: v for c, v in bottom.items() if v})
    return RatMatrix.from_rows(rows, 2 * d)


def restrict_kernel(basis: List[SparseRow], condition: RatMatrix) -> List[SparseRow]:
    """Vectors of span(basis) killed by `condition`"""
    if not basis:
        return []
    images = [condition.apply(v) for v in basis]
    system = RatMatrix.from_rows(images, condition.nrows).transpose()
    out = []
    for coeffs in kernel(system).vectors():
        vec: SparseRow = {}
        for i, c in coeffs.items():
            for k, v in basis[i].items():
                vec[k] = vec.get(k, Fraction(0)) + c * v
        out.append({k: v for k, v in vec.items() if v})
    return out


def joint_weight_spaces(matrices: Sequence[RatMatrix], seed: int = 0) -> List[WeightSpace]:
    """
    Joint eigenspaces of commuting semisimple matrices over C, realified

    Args:
        matrices: commuting d x d matrices
        seed: drives the random Krylov start vectors

    Returns:
        list of WeightSpace; the complex dims sum to d when every eigenvalue
        is Gaussian rational
    """
    if not matrices:
        return []
    d = matrices[0].ncols
    rng = np.random.default_rng(seed)
    pieces: List[Tuple[Weight, List[SparseRow]]] = [
        ((), [{i: Fraction(1)} for i in range(2 * d)])
    ]
    for m in matrices:
        values = set()
        # two start vectors; an eigenvalue is missed only if both have no component on it
        for _ in range(2):
            start = {i: Fraction(int(x)) for i, x in enumerate(rng.integers(-3, 4, size=d)) if x}
            values.update(rational_eigenvalues(krylov_minimal_polynomial(m, start or {0: Fraction(1)})))
        values = sorted(values)
        refined = []
        for weight, basis in pieces:
            for value in values:
                sub = restrict_kernel(basis, _realified_condition(m, value))
                if sub:
                    refined.append((weight + (value,), sub))
        pieces = refined
    spaces = [WeightSpace(w, tuple(tuple(sorted(v.items())) for v in b)) for w, b in pieces]
    total = sum(s.complex_dim for s in spaces)
    if total != d:
        logger.warning(f"Joint eigenspaces cover {total} of {d} complex dimensions")
    return spaces


def complex_apply(re: RatMatrix, im: Optional[RatMatrix], v: SparseRow, d: int) -> SparseRow:
    """(re + i im)(x + i y) in realified coordinates"""
    x = {c: val for c, val in v.items() if c < d}
    y = {c - d: val for c, val in v.items() if c >= d}
    out: Dict[int, Fraction] = {}

    def add(vec: SparseRow, offset: int, sign: int):
        for c, val in vec.items():
            s = out.get(offset + c, Fraction(0)) + sign * val
            if s:
                out[offset + c] = s
            else:
                out.pop(offset + c, None)

    add(re.apply(x), 0, 1)
    add(re.apply(y), d, 1)
    if im is not None:
        add(im.apply(y), 0, -1)
        add(im.apply(x), d, 1)
    return out
