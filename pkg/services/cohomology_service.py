"""
Cohomology Service - Chevalley-Eilenberg cohomology H^q(g_-, g)
File: services/cohomology_service.py

A basis q-cochain is a pair (I, t): I a sorted q-tuple of positions in the
basis of g_-, t a basis index of g, standing for e^I (x) e_t. Its
homogeneity is deg(e_t) - sum of the degrees in I.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple
import logging

import numpy as np

from core.exact_linalg import RatMatrix, SparseRow, Subspace, kernel, rank
from core.exceptions import InputError
from core.weights import WeightSpace, complex_apply, joint_weight_spaces
from models.algebra_base import GradedLieAlgebra, pack
from services.algebra_service import ensure_validated


logger = logging.getLogger(__name__)

CochainKey = Tuple[Tuple[int, ...], int]

# weights l(mu) = sum_j POSITIVITY_BASE**j * (Re mu_j + Im mu_j) decide positive roots
POSITIVITY_BASE = 1000


@dataclass(frozen=True)
class CochainComplexSlice:
    """Differentials around C^q at one homogeneity"""
    q: int
    homogeneity: int
    d_in: RatMatrix
    d_out: RatMatrix
    space_dim: int
    basis: Tuple[CochainKey, ...] = ()

    def composition_is_zero(self) -> bool:
        if self.d_in.ncols == 0 or self.d_out.nrows == 0:
            return True
        return (self.d_out @ self.d_in).is_zero()

    def cohomology_dim(self) -> int:
        return self.space_dim - rank(self.d_out) - rank(self.d_in)


@dataclass(frozen=True)
class CohomologyClass:
    """
    Class of a cocycle in a (q, h) slice; `imag` makes it a class of the
    complexified cohomology.
    """
    q: int
    homogeneity: int
    cocycle: Tuple[Tuple[int, Fraction], ...]
    imag: Tuple[Tuple[int, Fraction], ...] = ()

    @property
    def vector(self) -> SparseRow:
        return dict(self.cocycle)

    @property
    def imag_vector(self) -> SparseRow:
        return dict(self.imag)

    @property
    def is_complex(self) -> bool:
        return bool(self.imag)

    def scaled(self, c: Fraction) -> "CohomologyClass":
        return CohomologyClass(
            self.q, self.homogeneity,
            pack({i: c * v for i, v in self.cocycle}),
            pack({i: c * v for i, v in self.imag}),
        )


@dataclass
class H2Module:
    """
    H^2 at one homogeneity as a g_0-module

    `quotient` holds representatives reduced modulo coboundaries, in
    reduced echelon form; coordinates of a class are read at its pivots.
    """
    homogeneity: int
    basis: Tuple[CochainKey, ...]
    boundaries: Subspace
    cocycles: Subspace
    quotient: Subspace
    rho: Dict[int, RatMatrix] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.quotient.dim

    def representatives(self) -> List[SparseRow]:
        return self.quotient.vectors()

    def coordinates(self, cocycle: Mapping[int, Fraction]) -> List[Fraction]:
        return self.quotient.coordinates(self.boundaries.reduce(cocycle))

    def from_coordinates(self, coords: Sequence[Fraction]) -> SparseRow:
        if len(coords) != self.dim:
            raise InputError(f"H^2_{self.homogeneity} has dimension {self.dim}, got {len(coords)} coordinates")
        out: SparseRow = {}
        for c, rep in zip(coords, self.representatives()):
            for k, v in rep.items():
                out[k] = out.get(k, Fraction(0)) + Fraction(c) * v
        return {k: v for k, v in out.items() if v}


class CohomologyService:
    """Cochain complex of g_- with values in g, sliced by homogeneity"""

    def __init__(self, g: GradedLieAlgebra):
        ensure_validated(g)
        self.g = g
        self.neg = g.negative_indices()
        self.m = len(self.neg)
        self.neg_deg = [g.degrees[i] for i in self.neg]
        self._bases: Dict[Tuple[int, int], Tuple[CochainKey, ...]] = {}
        self._columns: Dict[Tuple[int, int], List[SparseRow]] = {}
        self._ranks: Dict[Tuple[int, int], int] = {}
        self._h2: Dict[int, H2Module] = {}

    @classmethod
    @lru_cache(maxsize=16)
    def for_algebra(cls, g: GradedLieAlgebra) -> "CohomologyService":
        return cls(g)

    # -- bookkeeping ------------------------------------------------------

    @lru_cache(maxsize=None)
    def _combos(self, q: int) -> Dict[int, List[Tuple[int, ...]]]:
        by_sum: Dict[int, List[Tuple[int, ...]]] = {}
        for combo in combinations(range(self.m), q):
            by_sum.setdefault(sum(self.neg_deg[i] for i in combo), []).append(combo)
        return by_sum

    @cached_property
    def _pairs_into(self) -> Dict[int, List[Tuple[int, int, Fraction]]]:
        """For u in g_-: pairs a < b of g_- with the e_u coefficient of [e_a, e_b]"""
        where = {g_idx: pos for pos, g_idx in enumerate(self.neg)}
        out: Dict[int, List[Tuple[int, int, Fraction]]] = {}
        for a, b in combinations(range(self.m), 2):
            for t, c in self.g.bracket_basis(self.neg[a], self.neg[b]).items():
                out.setdefault(where[t], []).append((a, b, c))
        return out

    def homogeneities(self, q: int) -> List[int]:
        if q < 0 or q > self.m:
            return []
        return sorted({self.g.degrees[t] - s for s in self._combos(q) for t in range(self.g.dim)})

    def basis(self, q: int, h: int) -> Tuple[CochainKey, ...]:
        key = (q, h)
        if key not in self._bases:
            if q < 0 or q > self.m:
                self._bases[key] = ()
            else:
                items = []
                for s, combos in self._combos(q).items():
                    targets = self.g.component(h + s) if -self.g.k <= h + s <= self.g.k else []
                    items.extend((combo, t) for combo in combos for t in targets)
                self._bases[key] = tuple(sorted(items))
        return self._bases[key]

    @lru_cache(maxsize=None)
    def index(self, q: int, h: int) -> Dict[CochainKey, int]:
        return {b: i for i, b in enumerate(self.basis(q, h))}

    def space_dim(self, q: int, h: int) -> int:
        return len(self.basis(q, h))

    # -- differential -----------------------------------------------------

    def differential_columns(self, q: int, h: int) -> List[SparseRow]:
        """Columns of d: C^q_h -> C^(q+1)_h, one per basis cochain"""
        key = (q, h)
        if key in self._columns:
            return self._columns[key]
        target = self.index(q + 1, h)
        g = self.g
        columns = []
        for combo, t in self.basis(q, h):
            col: SparseRow = {}

            def add(row: int, v: Fraction):
                s = col.get(row, Fraction(0)) + v
                if s:
                    col[row] = s
                else:
                    col.pop(row, None)

            present = set(combo)
            # X_i . phi(..., X_i omitted, ...)
            for x in range(self.m):
                if x in present:
                    continue
                j_set = tuple(sorted(combo + (x,)))
                sign = -1 if j_set.index(x) % 2 else 1
                for s, c in g.bracket_basis(self.neg[x], t).items():
                    add(target[(j_set, s)], sign * c)
            # phi([X_i, X_j], ...)
            for pu, u in enumerate(combo):
                rest = combo[:pu] + combo[pu + 1:]
                for a, b, c in self._pairs_into.get(u, ()):
                    if a in rest or b in rest:
                        continue
                    j_set = tuple(sorted(rest + (a, b)))
                    power = j_set.index(a) + j_set.index(b) + pu
                    add(target[(j_set, t)], -c if power % 2 else c)
            columns.append(col)
        self._columns[key] = columns
        return columns

    def differential(self, q: int, h: int) -> RatMatrix:
        """Matrix of d: C^q_h -> C^(q+1)_h (rows indexed by the target basis)"""
        if q < 0:
            return RatMatrix.zeros(self.space_dim(0, h), 0)
        cols = self.differential_columns(q, h)
        return RatMatrix.from_rows(cols, self.space_dim(q + 1, h)).transpose()

    def differential_rank(self, q: int, h: int) -> int:
        key = (q, h)
        if key not in self._ranks:
            if q < 0 or self.space_dim(q, h) == 0 or self.space_dim(q + 1, h) == 0:
                self._ranks[key] = 0
            else:
                # rows of this matrix are the columns of d
                self._ranks[key] = rank(RatMatrix.from_rows(self.differential_columns(q, h), self.space_dim(q + 1, h)))
        return self._ranks[key]

    def slice(self, q: int, h: int) -> CochainComplexSlice:
        if q < 0:
            raise InputError(f"Cochain degree must be non-negative, got {q}")
        return CochainComplexSlice(
            q=q, homogeneity=h,
            d_in=self.differential(q - 1, h),
            d_out=self.differential(q, h),
            space_dim=self.space_dim(q, h),
            basis=self.basis(q, h),
        )

    def cohomology_dim(self, q: int, h: int) -> int:
        return self.space_dim(q, h) - self.differential_rank(q, h) - self.differential_rank(q - 1, h)

    def dims(self, q: int) -> Dict[int, int]:
        out = {}
        for h in self.homogeneities(q):
            d = self.cohomology_dim(q, h)
            if d:
                out[h] = d
        logger.info(f"H^{q}({self.g.name}) by homogeneity: {out}")
        return out

    def euler_characteristic(self, h: int) -> Tuple[int, int]:
        """(sum (-1)^q dim C^q_h, sum (-1)^q dim H^q_h) over q = 0..dim g_-"""
        chain = sum((-1) ** q * self.space_dim(q, h) for q in range(self.m + 1))
        homology = sum((-1) ** q * self.cohomology_dim(q, h) for q in range(self.m + 1))
        return chain, homology

    # -- g_0 action -------------------------------------------------------

    def act(self, a: Mapping[int, Fraction], q: int, h: int, cochain: Mapping[int, Fraction]) -> SparseRow:
        """(a.phi)(X, ...) = [a, phi(X, ...)] - sum phi(..., [a, X_m], ...) for a in g_0"""
        g = self.g
        basis = self.basis(q, h)
        index = self.index(q, h)
        where = {g_idx: pos for pos, g_idx in enumerate(self.neg)}
        # dual[x] lists (w, c) with c the e_x coefficient of [a, e_w]
        dual: Dict[int, List[Tuple[int, Fraction]]] = {}
        for w_pos, w in enumerate(self.neg):
            for t, c in g.bracket(a, {w: Fraction(1)}).items():
                if t not in where:
                    raise InputError("Element does not preserve g_-")
                dual.setdefault(where[t], []).append((w_pos, c))
        out: SparseRow = {}

        def add(key: CochainKey, v: Fraction):
            row = index[key]
            s = out.get(row, Fraction(0)) + v
            if s:
                out[row] = s
            else:
                out.pop(row, None)

        for col, coeff in cochain.items():
            if not coeff:
                continue
            combo, t = basis[col]
            for s, c in g.bracket(a, {t: Fraction(1)}).items():
                add((combo, s), coeff * c)
            for pos, x in enumerate(combo):
                for w_pos, c in dual.get(x, ()):
                    if w_pos in combo and w_pos != x:
                        continue
                    replaced = combo[:pos] + (w_pos,) + combo[pos + 1:]
                    add((tuple(sorted(replaced)), t), -coeff * c * _sort_sign(replaced))
        return out

    # -- H^2 as a g_0-module ----------------------------------------------

    def h2_module(self, h: int) -> H2Module:
        if h not in self._h2:
            basis = self.basis(2, h)
            n = len(basis)
            boundaries = Subspace.from_vectors(self.differential_columns(1, h), n)
            if self.space_dim(3, h):
                cocycles = kernel(self.differential(2, h))
            else:
                cocycles = Subspace.full(n)
            reduced = [boundaries.reduce(z) for z in cocycles.vectors()]
            quotient = Subspace.from_vectors([r for r in reduced if r], n)
            self._h2[h] = H2Module(h, basis, boundaries, cocycles, quotient)
            logger.info(f"H^2_{h}({self.g.name}) has dimension {quotient.dim}")
        return self._h2[h]

    def rho(self, h: int, s: int) -> RatMatrix:
        """Matrix of the g_0 basis element e_s on H^2_h in the representative basis"""
        module = self.h2_module(h)
        if s not in module.rho:
            cols = [module.coordinates(self.act({s: Fraction(1)}, 2, h, rep)) for rep in module.representatives()]
            dense = [[cols[j][i] for j in range(len(cols))] for i in range(module.dim)]
            module.rho[s] = RatMatrix.from_dense(dense, module.dim)
        return module.rho[s]

    def rho_of(self, h: int, a: Mapping[int, Fraction]) -> RatMatrix:
        module = self.h2_module(h)
        rows: List[SparseRow] = [{} for _ in range(module.dim)]
        for s, c in a.items():
            if not c:
                continue
            for i, row in enumerate(self.rho(h, s).rows):
                for j, v in row:
                    rows[i][j] = rows[i].get(j, Fraction(0)) + c * v
        return RatMatrix.from_rows(rows, module.dim)

    def nonzero_h2(self) -> List[int]:
        return sorted(self.dims(2))


def _sort_sign(values: Sequence[int]) -> int:
    sign = 1
    vals = list(values)
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            if vals[i] > vals[j]:
                sign = -sign
    return sign


# -- operations ---------------------------------------------------------------


def service(g: GradedLieAlgebra) -> CohomologyService:
    return CohomologyService.for_algebra(g)


def cochain_differential(g: GradedLieAlgebra, q: int, h: int) -> CochainComplexSlice:
    return service(g).slice(q, h)


def cohomology_dims(g: GradedLieAlgebra, q: int) -> Dict[int, int]:
    if q < 0:
        raise InputError(f"Cochain degree must be non-negative, got {q}")
    return service(g).dims(q)


def h1_negative_test(g: GradedLieAlgebra) -> bool:
    return all(h < 0 for h in cohomology_dims(g, 1))


def euler_characteristic(g: GradedLieAlgebra, h: int) -> Tuple[int, int]:
    return service(g).euler_characteristic(h)


def _check_degree_zero(g: GradedLieAlgebra, a: Mapping[int, Fraction]):
    bad = [i for i, v in a.items() if v and g.degrees[i] != 0]
    if bad:
        raise InputError(f"Element has components outside g_0: {bad}")


def _check_class(g: GradedLieAlgebra, c: CohomologyClass) -> H2Module:
    if c.q != 2:
        raise InputError(f"Only classes in H^2 are supported, got q={c.q}")
    svc = service(g)
    module = svc.h2_module(c.homogeneity)
    for vec in (c.vector, c.imag_vector):
        if vec and svc.differential(2, c.homogeneity).apply(vec):
            raise InputError("Cochain is not a cocycle")
    return module


def g0_action_on_h2(g: GradedLieAlgebra, a: Mapping[int, Fraction], c: CohomologyClass) -> CohomologyClass:
    """Class of a.c, returned by its representative reduced modulo coboundaries"""
    _check_degree_zero(g, a)
    module = _check_class(g, c)
    svc = service(g)
    real = module.boundaries.reduce(svc.act(a, 2, c.homogeneity, c.vector))
    imag = module.boundaries.reduce(svc.act(a, 2, c.homogeneity, c.imag_vector)) if c.imag else {}
    return CohomologyClass(2, c.homogeneity, pack(real), pack(imag))


def class_coordinates(g: GradedLieAlgebra, c: CohomologyClass) -> Tuple[List[Fraction], List[Fraction]]:
    module = _check_class(g, c)
    imag = module.coordinates(c.imag_vector) if c.imag else [Fraction(0)] * module.dim
    return module.coordinates(c.vector), imag


def class_from_coordinates(
    g: GradedLieAlgebra, h: int, coords: Sequence[Fraction], imag: Optional[Sequence[Fraction]] = None,
) -> CohomologyClass:
    module = service(g).h2_module(h)
    real = module.from_coordinates(coords)
    im = module.from_coordinates(imag) if imag is not None else {}
    return CohomologyClass(2, h, pack(real), pack(im))


def _real_system(g: GradedLieAlgebra, h: int, x: Sequence[Fraction]) -> RatMatrix:
    """Columns rho(e_s) x for the basis e_s of g_0"""
    svc = service(g)
    xs = {i: v for i, v in enumerate(x) if v}
    cols = [svc.rho(h, s).apply(xs) for s in g.component(0)]
    return RatMatrix.from_rows(cols, len(x)).transpose()


def _complex_system(g: GradedLieAlgebra, h: int, x: Sequence[Fraction], y: Sequence[Fraction]) -> RatMatrix:
    """
    System in (b, c) in g_0 + g_0 for (b + ic).(x + iy) = 0:
    rho(b)x - rho(c)y = 0 and rho(b)y + rho(c)x = 0
    """
    svc = service(g)
    d = len(x)
    xs = {i: v for i, v in enumerate(x) if v}
    ys = {i: v for i, v in enumerate(y) if v}
    images = [(svc.rho(h, s).apply(xs), svc.rho(h, s).apply(ys)) for s in g.component(0)]
    columns: List[SparseRow] = []
    for rx, ry in images:
        columns.append({**rx, **{d + i: v for i, v in ry.items()}})
    for rx, ry in images:
        col = {i: -v for i, v in ry.items()}
        col.update({d + i: v for i, v in rx.items()})
        columns.append(col)
    return RatMatrix.from_rows(columns, 2 * d).transpose()


def class_stabilizer(g: GradedLieAlgebra, c: CohomologyClass) -> List[Tuple[SparseRow, SparseRow]]:
    """
    Spanning set of {a in g_0 (x) C : a.c = 0}

    Returns:
        pairs (b, c) of g_0 vectors standing for b + ic; for a real class
        c is always zero and the b's form a basis
    """
    x, y = class_coordinates(g, c)
    if not any(x) and not any(y):
        raise InputError("The zero class has the whole of g_0 as stabilizer")
    zero = g.component(0)
    n0 = len(zero)
    if not c.is_complex:
        sols = kernel(_real_system(g, c.homogeneity, x)).vectors()
        return [({zero[i]: v for i, v in s.items()}, {}) for s in sols]
    out = []
    for s in kernel(_complex_system(g, c.homogeneity, x, y)).vectors():
        out.append((
            {zero[i]: v for i, v in s.items() if i < n0},
            {zero[i - n0]: v for i, v in s.items() if i >= n0},
        ))
    return out


def class_stabilizer_dim(g: GradedLieAlgebra, c: CohomologyClass) -> int:
    """
    dim {a in g_0 : a.c = 0 in H^2}; for a complex class the complex
    dimension of the stabilizer in g_0 (x) C
    """
    x, y = class_coordinates(g, c)
    if not any(x) and not any(y):
        raise InputError("class_stabilizer_dim needs a nonzero class")
    if not c.is_complex:
        return kernel(_real_system(g, c.homogeneity, x)).dim
    # the solution space is complex, so its real dimension is even
    return kernel(_complex_system(g, c.homogeneity, x, y)).dim // 2


def common_annihilator_dim(g: GradedLieAlgebra, b0: Sequence[Mapping[int, Fraction]]) -> int:
    """dim {c in H^2 : a.c = 0 for all a in b0}, summed over homogeneities"""
    for a in b0:
        _check_degree_zero(g, a)
    svc = service(g)
    total = 0
    for h in svc.nonzero_h2():
        module = svc.h2_module(h)
        rows: List[SparseRow] = []
        for a in b0:
            rows.extend(svc.rho_of(h, a).row_dicts())
        total += kernel(RatMatrix.from_rows(rows, module.dim)).dim if rows else module.dim
    return total


# -- highest weight probe -----------------------------------------------------


@dataclass
class ProbeResult:
    best_dim: int
    witness: CohomologyClass
    candidates: int
    certified_weights: bool
    details: List[Dict] = field(default_factory=list)


def _positivity(weight) -> Fraction:
    return sum((Fraction(POSITIVITY_BASE) ** j * (a + b) for j, (a, b) in enumerate(weight)), Fraction(0))


def _g0_root_vectors(g: GradedLieAlgebra, seed: int) -> List[Tuple[SparseRow, SparseRow]]:
    """Positive root vectors of g_0 as (real part, imaginary part) in full coordinates"""
    zero = g.component(0)
    n0 = len(zero)
    where = {s: i for i, s in enumerate(zero)}
    mats = []
    for hvec in g.cartan:
        h = dict(hvec)
        rows: List[SparseRow] = [{} for _ in zero]
        for j, s in enumerate(zero):
            for t, v in g.bracket(h, {s: Fraction(1)}).items():
                rows[where[t]][j] = v
        mats.append(RatMatrix.from_rows(rows, n0))
    positive = []
    for space in joint_weight_spaces(mats, seed):
        if space.is_zero_weight():
            continue
        level = _positivity(space.weight)
        if level == 0:
            logger.warning(f"Root {space.weight} is neither positive nor negative")
        elif level > 0:
            for v in space.vectors():
                positive.append((
                    {zero[i]: c for i, c in v.items() if i < n0},
                    {zero[i - n0]: c for i, c in v.items() if i >= n0},
                ))
    return positive


def _highest_weight_vectors(
    svc: CohomologyService, h: int, space: WeightSpace, roots: Sequence[Tuple[RatMatrix, Optional[RatMatrix]]],
) -> List[SparseRow]:
    """Vectors of a realified weight space killed by every positive root vector"""
    basis = space.vectors()
    if not roots:
        return basis
    d = svc.h2_module(h).dim
    images = []
    for v in basis:
        img: SparseRow = {}
        for r, (re, im) in enumerate(roots):
            for k, val in complex_apply(re, im, v, d).items():
                img[2 * d * r + k] = val
        images.append(img)
    system = RatMatrix.from_rows(images, 2 * d * len(roots)).transpose()
    out = []
    for coeffs in kernel(system).vectors():
        vec: SparseRow = {}
        for i, c in coeffs.items():
            for k, val in basis[i].items():
                vec[k] = vec.get(k, Fraction(0)) + c * val
        out.append({k: val for k, val in vec.items() if val})
    return out


def max_stabilizer_probe(g: GradedLieAlgebra, seed: int = 0, trials: int = 20) -> ProbeResult:
    """
    Largest stabilizer dimension over highest weight vectors and random classes

    Highest weight vectors are found in each homogeneity component of H^2
    as joint eigenvectors of the Cartan elements (realified when weights are
    complex) killed by all positive root vectors of g_0. Their stabilizers
    are complex dimensions in g_0 (x) C.
    """
    svc = service(g)
    components = svc.nonzero_h2()
    if not components:
        raise InputError(f"H^2({g.name}) is zero")
    roots = _g0_root_vectors(g, seed)
    best: Optional[Tuple[int, CohomologyClass]] = None
    details: List[Dict] = []
    certified = True
    candidates = 0

    for h in components:
        module = svc.h2_module(h)
        d = module.dim
        if not g.cartan:
            certified = False
            continue
        mats = [svc.rho_of(h, dict(hv)) for hv in g.cartan]
        spaces = joint_weight_spaces(mats, seed)
        root_mats = [(svc.rho_of(h, re), svc.rho_of(h, im) if im else None) for re, im in roots]
        if sum(s.complex_dim for s in spaces) != d:
            certified = False
        for space in spaces:
            for v in _highest_weight_vectors(svc, h, space, root_mats):
                x = [v.get(i, Fraction(0)) for i in range(d)]
                y = [v.get(d + i, Fraction(0)) for i in range(d)]
                if not any(y):
                    cls = class_from_coordinates(g, h, x)
                elif not any(x):
                    cls = class_from_coordinates(g, h, y)
                else:
                    cls = class_from_coordinates(g, h, x, y)
                dim = class_stabilizer_dim(g, cls)
                candidates += 1
                details.append({'homogeneity': h, 'weight': [[str(a), str(b)] for a, b in space.weight],
                                'stabilizer_dim': dim, 'kind': 'highest_weight'})
                if best is None or dim > best[0]:
                    best = (dim, cls)

    rng = np.random.default_rng(seed)
    for _ in range(trials):
        h = components[int(rng.integers(0, len(components)))]
        d = svc.h2_module(h).dim
        coords = [Fraction(int(v)) for v in rng.integers(-3, 4, size=d)]
        while not any(coords):
            coords = [Fraction(int(v)) for v in rng.integers(-3, 4, size=d)]
        cls = class_from_coordinates(g, h, coords)
        dim = class_stabilizer_dim(g, cls)
        candidates += 1
        details.append({'homogeneity': h, 'stabilizer_dim': dim, 'kind': 'random'})
        if best is None or dim > best[0]:
            best = (dim, cls)

    logger.info(f"Stabilizer probe on {g.name}: best {best[0]} over {candidates} classes")
    return ProbeResult(best_dim=best[0], witness=best[1], candidates=candidates,
                       certified_weights=certified, details=details)
