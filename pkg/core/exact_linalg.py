"""
Exact Rational Linear Algebra
File: core/exact_linalg.py

Sparse rational matrices, certified reduced row echelon forms, subspaces in
canonical form. Large eliminations run modulo several word-sized primes and
are lifted back by Chinese remaindering and rational reconstruction; a lifted
echelon form is accepted only after an exact check against the input rows.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd, lcm
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union
import logging

import numpy as np

from core.exceptions import InputError
from core.modular import (
    ELIMINATION_PRIMES,
    crt_combine,
    random_prime,
    rank_mod_p,
    rational_reconstruction,
    rref_mod_p,
)


logger = logging.getLogger(__name__)

Number = Union[int, Fraction, str]
SparseRow = Dict[int, Fraction]

# Below this many stored entries elimination is done directly over Q
EXACT_CUTOFF = 6000


def to_fraction(value: Number) -> Fraction:
    """Parse int, Fraction or "p/q" string into an exact rational"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"Not a rational number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InputError(f"Not a rational number: {value!r}") from e
    raise InputError(f"Not a rational number: {value!r}")


def fraction_to_str(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class RatMatrix:
    """Sparse exact rational matrix; rows hold (column, value) pairs sorted by column"""
    nrows: int
    ncols: int
    rows: Tuple[Tuple[Tuple[int, Fraction], ...], ...]

    def __post_init__(self):
        if len(self.rows) != self.nrows:
            raise InputError(f"Expected {self.nrows} rows, got {len(self.rows)}")

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[Number]], ncols: Optional[int] = None) -> "RatMatrix":
        data = [list(r) for r in data]
        if ncols is None:
            ncols = len(data[0]) if data else 0
        rows = []
        for r in data:
            if len(r) != ncols:
                raise InputError(f"Ragged matrix: row of length {len(r)}, expected {ncols}")
            rows.append({c: to_fraction(v) for c, v in enumerate(r)})
        return cls.from_rows(rows, ncols)

    @classmethod
    def from_rows(cls, rows: Iterable[Mapping[int, Number]], ncols: int) -> "RatMatrix":
        packed = []
        for r in rows:
            entries = []
            for c, v in sorted(r.items()):
                if not 0 <= c < ncols:
                    raise InputError(f"Column {c} out of range for {ncols} columns")
                v = to_fraction(v)
                if v:
                    entries.append((c, v))
            packed.append(tuple(entries))
        return cls(len(packed), ncols, tuple(packed))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "RatMatrix":
        return cls(nrows, ncols, tuple(() for _ in range(nrows)))

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, tuple(((i, Fraction(1)),) for i in range(n)))

    # -- access -----------------------------------------------------------

    def row(self, i: int) -> SparseRow:
        return dict(self.rows[i])

    def row_dicts(self) -> List[SparseRow]:
        return [dict(r) for r in self.rows]

    def entry(self, i: int, j: int) -> Fraction:
        for c, v in self.rows[i]:
            if c == j:
                return v
        return Fraction(0)

    def dense(self) -> List[List[Fraction]]:
        out = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for i, r in enumerate(self.rows):
            for c, v in r:
                out[i][c] = v
        return out

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def is_zero(self) -> bool:
        return self.nnz == 0

    # -- algebra ----------------------------------------------------------

    def transpose(self) -> "RatMatrix":
        cols: List[SparseRow] = [{} for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for c, v in r:
                cols[c][i] = v
        return RatMatrix.from_rows(cols, self.nrows)

    def apply(self, vector: Mapping[int, Fraction]) -> SparseRow:
        """Matrix times a sparse column vector"""
        out: SparseRow = {}
        for i, r in enumerate(self.rows):
            s = sum((v * vector[c] for c, v in r if c in vector), Fraction(0))
            if s:
                out[i] = s
        return out

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.ncols != other.nrows:
            raise InputError(f"Shape mismatch {self.nrows}x{self.ncols} @ {other.nrows}x{other.ncols}")
        result = []
        for r in self.rows:
            acc: SparseRow = {}
            for k, v in r:
                for c, w in other.rows[k]:
                    acc[c] = acc.get(c, Fraction(0)) + v * w
            result.append(acc)
        return RatMatrix.from_rows(result, other.ncols)

    def permuted(self, row_order: Sequence[int], col_order: Sequence[int]) -> "RatMatrix":
        """Rows taken in `row_order`; new column j is old column col_order[j]"""
        where = {old: new for new, old in enumerate(col_order)}
        rows = [{where[c]: v for c, v in self.rows[i]} for i in row_order]
        return RatMatrix.from_rows(rows, self.ncols)

    def stack(self, other: "RatMatrix") -> "RatMatrix":
        if self.ncols != other.ncols:
            raise InputError("Cannot stack matrices with different column counts")
        return RatMatrix(self.nrows + other.nrows, self.ncols, self.rows + other.rows)


@dataclass(frozen=True)
class Echelon:
    """Reduced row echelon form: rows[i] has leading 1 at pivots[i]"""
    ncols: int
    rows: Tuple[Tuple[Tuple[int, Fraction], ...], ...]
    pivots: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def matrix(self) -> RatMatrix:
        return RatMatrix(len(self.rows), self.ncols, self.rows)

    def reduce(self, vector: Mapping[int, Fraction]) -> SparseRow:
        """Normal form of a vector modulo the row space"""
        out = {c: v for c, v in vector.items() if v}
        for p, r in zip(self.pivots, self.rows):
            f = out.get(p)
            if not f:
                continue
            for c, v in r:
                s = out.get(c, Fraction(0)) - f * v
                if s:
                    out[c] = s
                else:
                    out.pop(c, None)
        return out

    def kernel_rows(self) -> List[SparseRow]:
        """Basis of the right null space, one vector per free column"""
        pivot_set = set(self.pivots)
        free = [c for c in range(self.ncols) if c not in pivot_set]
        basis: Dict[int, SparseRow] = {f: {f: Fraction(1)} for f in free}
        for p, r in zip(self.pivots, self.rows):
            for c, v in r:
                if c != p:
                    basis[c][p] = -v
        return [basis[f] for f in free]


# -- elimination engines ---------------------------------------------------


def _primitive(row: Mapping[int, Fraction]) -> Dict[int, int]:
    """Scale a rational row to coprime integers"""
    den = reduce(lcm, (v.denominator for v in row.values()), 1)
    ints = {c: int(v * den) for c, v in row.items() if v}
    g = reduce(gcd, (abs(v) for v in ints.values()), 0)
    if g > 1:
        ints = {c: v // g for c, v in ints.items()}
    return ints


def _fraction_free_echelon(rows: Iterable[Mapping[int, Fraction]]) -> List[Dict[int, int]]:
    """
    Row echelon form with integer rows.

    Rows are bucketed by leading column; within a bucket the sparsest row is
    the pivot and the others are combined as a*r - b*pivot (no division),
    then divided by their content.
    """
    buckets: Dict[int, List[Dict[int, int]]] = {}
    for r in rows:
        ints = _primitive(r)
        if ints:
            buckets.setdefault(min(ints), []).append(ints)

    echelon: List[Dict[int, int]] = []
    while buckets:
        c = min(buckets)
        group = buckets.pop(c)
        group.sort(key=len)
        pivot = group[0]
        a = pivot[c]
        for r in group[1:]:
            b = r[c]
            combined: Dict[int, int] = {}
            for k in set(r) | set(pivot):
                v = a * r.get(k, 0) - b * pivot.get(k, 0)
                if v:
                    combined[k] = v
            if not combined:
                continue
            g = reduce(gcd, (abs(v) for v in combined.values()), 0)
            if g > 1:
                combined = {k: v // g for k, v in combined.items()}
            buckets.setdefault(min(combined), []).append(combined)
        echelon.append(pivot)
    return echelon


def _back_substitute(echelon: List[Dict[int, int]], ncols: int) -> Echelon:
    pivots = [min(r) for r in echelon]
    reduced: List[SparseRow] = []
    for r, p in zip(echelon, pivots):
        lead = Fraction(r[p])
        reduced.append({c: Fraction(v) / lead for c, v in r.items()})
    pivot_set = set(pivots)
    for i in range(len(reduced) - 1, -1, -1):
        row = reduced[i]
        for j in range(i + 1, len(reduced)):
            f = row.get(pivots[j])
            if not f:
                continue
            for c, v in reduced[j].items():
                s = row.get(c, Fraction(0)) - f * v
                if s:
                    row[c] = s
                else:
                    row.pop(c, None)
        assert all(c == pivots[i] or c not in pivot_set for c in row)
    packed = tuple(tuple(sorted(r.items())) for r in reduced)
    return Echelon(ncols, packed, tuple(pivots))


def exact_rref(m: RatMatrix) -> Echelon:
    """Reduced row echelon form by fraction-free elimination over Z"""
    return _back_substitute(_fraction_free_echelon(m.row_dicts()), m.ncols)


def _residue_matrix(int_rows: List[Dict[int, int]], ncols: int, p: int) -> np.ndarray:
    a = np.zeros((len(int_rows), ncols), dtype=np.int64)
    for i, r in enumerate(int_rows):
        for c, v in r.items():
            a[i, c] = v % p
    return a


def _verify_echelon(m: RatMatrix, ech: Echelon) -> bool:
    """Every input row must equal the combination of echelon rows read at the pivots"""
    for r in m.rows:
        if not r:
            continue
        if ech.reduce(dict(r)):
            return False
    return True


def _modular_rref(m: RatMatrix) -> Optional[Echelon]:
    int_rows = [_primitive(dict(r)) for r in m.rows]
    int_rows = [r for r in int_rows if r]
    if not int_rows:
        return Echelon(m.ncols, (), ())

    images: List[Tuple[int, np.ndarray, Tuple[int, ...]]] = []
    for count, p in enumerate(ELIMINATION_PRIMES, start=1):
        ech_p, piv_p = rref_mod_p(_residue_matrix(int_rows, m.ncols, p), p)
        images.append((p, ech_p, tuple(piv_p)))
        if count < 2:
            continue

        # Unlucky primes lose rank or shift pivots to the right
        best_rank = max(len(piv) for _, _, piv in images)
        best_piv = min(piv for _, _, piv in images if len(piv) == best_rank)
        good = [(q, e) for q, e, piv in images if piv == best_piv]
        if len(good) < 2:
            continue

        lifted = _lift(good, best_piv, m.ncols)
        if lifted is None:
            logger.debug(f"Rational reconstruction failed with {len(good)} primes, adding one")
            continue
        if _verify_echelon(m, lifted):
            return lifted
        logger.debug("Lifted echelon form failed exact verification, adding a prime")
    return None


def _lift(good: List[Tuple[int, np.ndarray]], pivots: Tuple[int, ...], ncols: int) -> Optional[Echelon]:
    moduli = [q for q, _ in good]
    stacked = np.stack([e for _, e in good])
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    rows = []
    for i, p in enumerate(pivots):
        entries = [(p, Fraction(1))]
        if free:
            block = stacked[:, i, free]
            for j in np.nonzero(block.any(axis=0))[0]:
                residues = [int(x) for x in block[:, j]]
                value, modulus = crt_combine(residues, moduli)
                f = rational_reconstruction(value, modulus)
                if f is None:
                    return None
                if f:
                    entries.append((free[j], f))
        rows.append(tuple(sorted(entries)))
    return Echelon(ncols, tuple(rows), pivots)


def rref(m: RatMatrix) -> Echelon:
    """
    Certified reduced row echelon form over Q

    Args:
        m: input matrix

    Returns:
        Echelon with canonical rows and pivot columns
    """
    if m.nnz <= EXACT_CUTOFF or m.nrows < 8 or m.ncols < 8:
        return exact_rref(m)
    lifted = _modular_rref(m)
    if lifted is not None:
        return lifted
    logger.info(f"Falling back to exact elimination for a {m.nrows}x{m.ncols} matrix")
    return exact_rref(m)


def rank(m: RatMatrix) -> int:
    """Exact rank; eliminates in the orientation with fewer columns"""
    if m.ncols > m.nrows:
        m = m.transpose()
    return rref(m).rank


def kernel(m: RatMatrix) -> "Subspace":
    """Right null space; dim(kernel) + rank = cols"""
    return Subspace.from_vectors(rref(m).kernel_rows(), m.ncols, independent=True)


def left_kernel(m: RatMatrix) -> "Subspace":
    return kernel(m.transpose())


def image(m: RatMatrix) -> "Subspace":
    """Column space, as a subspace of Q^nrows"""
    return Subspace.from_vectors(m.transpose().row_dicts(), m.nrows)


def solve(m: RatMatrix, b: Mapping[int, Fraction]) -> SparseRow:
    """Particular solution x of m x = b"""
    aug = [dict(r) for r in m.rows]
    for i in range(m.nrows):
        if b.get(i):
            aug[i][m.ncols] = b[i]
    ech = rref(RatMatrix.from_rows(aug, m.ncols + 1))
    if ech.pivots and ech.pivots[-1] == m.ncols:
        raise InputError("Inconsistent linear system")
    x: SparseRow = {}
    for p, r in zip(ech.pivots, ech.rows):
        for c, v in r:
            if c == m.ncols:
                x[p] = v
    return x


def inverse(m: RatMatrix) -> RatMatrix:
    if m.nrows != m.ncols:
        raise InputError("Only square matrices can be inverted")
    n = m.nrows
    aug = [dict(r) for r in m.rows]
    for i in range(n):
        aug[i][n + i] = Fraction(1)
    ech = rref(RatMatrix.from_rows(aug, 2 * n))
    if ech.pivots != tuple(range(n)):
        raise InputError("Matrix is singular")
    return RatMatrix.from_rows([{c - n: v for c, v in r if c >= n} for r in ech.rows], n)


def inertia(sym: RatMatrix) -> Tuple[int, int, int]:
    """
    (positive, negative, zero) counts of a symmetric matrix

    Symmetric Gaussian elimination; a zero diagonal with a nonzero
    off-diagonal entry a_ij is handled by the congruence row_i += row_j,
    col_i += col_j which makes a_ii = 2 a_ij.
    """
    if sym.nrows != sym.ncols:
        raise InputError("inertia needs a square matrix")
    a = sym.dense()
    n = sym.nrows
    for i in range(n):
        for j in range(n):
            if a[i][j] != a[j][i]:
                raise InputError("inertia needs a symmetric matrix")
    active = list(range(n))
    pos = neg = 0
    while active:
        i = next((i for i in active if a[i][i]), None)
        if i is None:
            pair = next(((i, j) for i in active for j in active if i != j and a[i][j]), None)
            if pair is None:
                break
            i, j = pair
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            continue
        d = a[i][i]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(i)
        for j in active:
            if not a[j][i]:
                continue
            f = a[j][i] / d
            for k in active:
                a[j][k] -= f * a[i][k]
        for j in active:
            a[i][j] = a[j][i] = Fraction(0)
    return pos, neg, n - pos - neg


def rank_mod(m: RatMatrix, p: int) -> int:
    """Rank of the row-wise integer scaling of m over GF(p)"""
    int_rows = [r for r in (_primitive(dict(row)) for row in m.rows) if r]
    if not int_rows:
        return 0
    return rank_mod_p(_residue_matrix(int_rows, m.ncols, p), p)


def multimodular_rank_check(m: RatMatrix, seed: int, primes: int = 2) -> Dict:
    """
    Cross-check the exact rank against ranks modulo random large primes

    Returns:
        dict with exact rank, modular ranks, primes and an `agree` flag
        (true when the modular ranks agree with each other and with the
        exact rank)
    """
    rng = np.random.default_rng(seed)
    ps = [random_prime(rng) for _ in range(primes)]
    exact = rank(m)
    modular = [rank_mod(m, p) for p in ps]
    return {
        'exact': exact,
        'primes': ps,
        'modular': modular,
        'agree': len(set(modular)) == 1 and modular[0] == exact,
    }


# -- subspaces -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Subspace:
    """Row span of `basis` in Q^ambient_dim; equality by reduced row echelon form"""
    ambient_dim: int
    basis: RatMatrix

    @classmethod
    def from_vectors(
        cls,
        vectors: Iterable[Union[Mapping[int, Number], Sequence[Number]]],
        ambient_dim: int,
        independent: bool = False,
    ) -> "Subspace":
        rows: List[SparseRow] = []
        for v in vectors:
            if isinstance(v, Mapping):
                rows.append({c: to_fraction(x) for c, x in v.items()})
            else:
                if len(v) != ambient_dim:
                    raise InputError(f"Vector of length {len(v)} in ambient dimension {ambient_dim}")
                rows.append({c: to_fraction(x) for c, x in enumerate(v)})
        m = RatMatrix.from_rows(rows, ambient_dim)
        if independent:
            return cls(ambient_dim, m)
        ech = rref(m)
        sub = cls(ambient_dim, ech.matrix())
        sub.__dict__['echelon'] = ech
        return sub

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, RatMatrix.zeros(0, ambient_dim))

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls.from_vectors(RatMatrix.identity(ambient_dim).row_dicts(), ambient_dim)

    @cached_property
    def echelon(self) -> Echelon:
        return rref(self.basis)

    @property
    def dim(self) -> int:
        return self.echelon.rank

    def canonical(self) -> Tuple[int, Tuple]:
        return (self.ambient_dim, self.echelon.rows)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def vectors(self) -> List[SparseRow]:
        """Canonical basis vectors"""
        return [dict(r) for r in self.echelon.rows]

    def dense_vectors(self) -> List[List[Fraction]]:
        return self.echelon.matrix().dense()

    def reduce(self, vector: Mapping[int, Fraction]) -> SparseRow:
        return self.echelon.reduce(vector)

    def contains_vector(self, vector: Mapping[int, Fraction]) -> bool:
        return not self.reduce(vector)

    def contains(self, other: "Subspace") -> bool:
        self._check_ambient(other)
        return all(self.contains_vector(dict(r)) for r in other.basis.rows)

    def coordinates(self, vector: Mapping[int, Fraction]) -> List[Fraction]:
        """Coordinates with respect to the canonical basis"""
        if self.reduce(vector):
            raise InputError("Vector does not lie in the subspace")
        return [vector.get(p, Fraction(0)) for p in self.echelon.pivots]

    def sum(self, other: "Subspace") -> "Subspace":
        self._check_ambient(other)
        return Subspace.from_vectors(self.vectors() + other.vectors(), self.ambient_dim)

    def intersection(self, other: "Subspace") -> "Subspace":
        self._check_ambient(other)
        a, b = self.vectors(), other.vectors()
        if not a or not b:
            return Subspace.zero(self.ambient_dim)
        # left kernel of the stacked bases gives alpha*A + beta*B = 0
        stacked = RatMatrix.from_rows(a + b, self.ambient_dim)
        relations = left_kernel(stacked)
        out = []
        for rel in relations.basis.rows:
            vec: SparseRow = {}
            for i, coeff in rel:
                if i >= len(a):
                    continue
                for c, v in a[i].items():
                    vec[c] = vec.get(c, Fraction(0)) + coeff * v
            out.append(vec)
        return Subspace.from_vectors(out, self.ambient_dim)

    def _check_ambient(self, other: "Subspace"):
        if other.ambient_dim != self.ambient_dim:
            raise InputError(
                f"Ambient dimension mismatch: {self.ambient_dim} vs {other.ambient_dim}"
            )


@dataclass(frozen=True)
class SubspaceOps:
    sum: Subspace
    intersection: Subspace
    contains: bool


def subspace_ops(a: Subspace, b: Subspace) -> SubspaceOps:
    """Sum, intersection and containment (b inside a) of two subspaces"""
    if a.ambient_dim != b.ambient_dim:
        raise InputError(f"Ambient dimension mismatch: {a.ambient_dim} vs {b.ambient_dim}")
    return SubspaceOps(sum=a.sum(b), intersection=a.intersection(b), contains=a.contains(b))


class CoordinateSolver:
    """
    Coordinates in a fixed (non-canonical) basis of independent vectors

    The basis is inverted once on a set of pivot columns; every solve is
    checked exactly against the full vector.
    """

    def __init__(self, vectors: Sequence[Mapping[int, Fraction]], ambient_dim: int):
        self.ambient_dim = ambient_dim
        self.vectors = [dict(v) for v in vectors]
        m = RatMatrix.from_rows(self.vectors, ambient_dim)
        ech = rref(m)
        if ech.rank != len(self.vectors):
            raise InputError(f"{len(self.vectors)} vectors span only {ech.rank} dimensions")
        self.pivots = ech.pivots
        square = RatMatrix.from_rows(
            [{j: v.get(p, Fraction(0)) for j, p in enumerate(self.pivots)} for v in self.vectors],
            len(self.pivots),
        )
        # row vector w[P] times inv(V[:, P]) gives the coordinates
        self._inverse = inverse(square) if self.vectors else RatMatrix.zeros(0, 0)

    def __len__(self):
        return len(self.vectors)

    def coordinates(self, vector: Mapping[int, Fraction], check: bool = True) -> SparseRow:
        restricted = {j: vector[p] for j, p in enumerate(self.pivots) if vector.get(p)}
        coords: SparseRow = {}
        for j, w in restricted.items():
            for c, v in self._inverse.rows[j]:
                coords[c] = coords.get(c, Fraction(0)) + w * v
        coords = {c: v for c, v in coords.items() if v}
        if check:
            rebuilt: SparseRow = {}
            for i, x in coords.items():
                for c, v in self.vectors[i].items():
                    rebuilt[c] = rebuilt.get(c, Fraction(0)) + x * v
            rebuilt = {c: v for c, v in rebuilt.items() if v}
            target = {c: v for c, v in vector.items() if v}
            if rebuilt != target:
                raise InputError("Vector is not in the span of the basis")
        return coords


def combine(terms: Iterable[Tuple[Fraction, Mapping[int, Fraction]]]) -> SparseRow:
    """Sparse linear combination sum(c * v)"""
    out: SparseRow = {}
    for coeff, vec in terms:
        if not coeff:
            continue
        for k, v in vec.items():
            s = out.get(k, Fraction(0)) + coeff * v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out
