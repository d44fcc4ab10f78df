"""
Subalgebra Service - graded subalgebras, witnesses, closures and gap scans
File: services/subalgebra_service.py
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple
import logging

import numpy as np

from core.exact_linalg import SparseRow, Subspace, fraction_to_str
from core.exceptions import InputError
from core.modular import CLOSURE_PRIME, rref_mod_p
from models.algebra_base import GradedLieAlgebra, Report, full_components
from services.algebra_service import build_so_split, default_service


logger = logging.getLogger(__name__)

# random generator sets: 1..MAX_GENERATORS homogeneous elements, coordinates in [-COORD_RANGE, COORD_RANGE]
MAX_GENERATORS = 4
COORD_RANGE = 3


@dataclass
class GradedSubalgebra:
    """Graded subspace b = sum b_i of g, each b_i a Subspace of Q^dim g inside g_i"""
    algebra: GradedLieAlgebra
    components: Dict[int, Subspace] = field(default_factory=dict)
    name: str = ""

    @classmethod
    def from_vectors(
        cls, g: GradedLieAlgebra, comps: Mapping[int, Sequence[Mapping[int, Fraction]]], name: str = "",
    ) -> "GradedSubalgebra":
        return cls(g, {d: Subspace.from_vectors([dict(v) for v in vecs], g.dim) for d, vecs in comps.items()}, name)

    @property
    def dim(self) -> int:
        return sum(s.dim for s in self.components.values())

    @property
    def proper(self) -> bool:
        return self.dim < self.algebra.dim

    def component(self, degree: int) -> Subspace:
        return self.components.get(degree, Subspace.zero(self.algebra.dim))

    def profile(self) -> Tuple[int, ...]:
        """(d_-k, ..., d_k) with d_j = dim b_j"""
        k = self.algebra.k
        return tuple(self.component(d).dim for d in range(-k, k + 1))

    def check_components(self):
        g = self.algebra
        for d, sub in self.components.items():
            if sub.ambient_dim != g.dim:
                raise InputError(f"Component {d} lives in dimension {sub.ambient_dim}, expected {g.dim}")
            for vec in sub.vectors():
                if any(g.degrees[i] != d for i in vec):
                    raise InputError(f"Component {d} has a vector outside g_{d}")

    def local_coordinates(self) -> Dict[int, List[List[Fraction]]]:
        """Component bases in coordinates of g_i"""
        out = {}
        for d, sub in sorted(self.components.items()):
            if sub.dim:
                out[d] = [self.algebra.to_component(v)[1] for v in sub.vectors()]
        return out

    def to_dict(self) -> Dict:
        return {
            'algebra': self.algebra.name,
            'name': self.name,
            'dim': self.dim,
            'profile': list(self.profile()),
            'components': {
                str(d): [[fraction_to_str(c) for c in row] for row in rows]
                for d, rows in self.local_coordinates().items()
            },
        }


def verify_subalgebra(b: GradedSubalgebra) -> Report:
    """
    Closure of b under bracket on all pairs of component basis vectors

    Returns:
        Report with a 'closure' entry; dim and profile in its data
    """
    b.check_components()
    g = b.algebra
    report = Report(b.name or f"subalgebra of {g.name}")
    bases = {d: sub.vectors() for d, sub in b.components.items() if sub.dim}
    degrees = sorted(bases)
    failure = None
    for a, i in enumerate(degrees):
        for j in degrees[a:]:
            target = b.component(i + j)
            for u in bases[i]:
                for v in bases[j]:
                    w = g.bracket(u, v)
                    if w and not target.contains_vector(w):
                        failure = (i, j)
                        break
                if failure:
                    break
            if failure:
                break
        if failure:
            break
    report.add('closure', failure is None,
               "closed" if failure is None else f"[b_{failure[0]}, b_{failure[1]}] is not inside b_{failure[0] + failure[1]}",
               dim=b.dim, profile=list(b.profile()), proper=b.proper)
    return report


def witness_bk(n: int, k: int) -> GradedSubalgebra:
    """b^k inside so(n+1, n)"""
    g = build_so_split(n)
    family = default_service().get_family("so-split")
    return GradedSubalgebra.from_vectors(g, family.bk_components(g, k), name=f"b^{k}")


def witness_catalog(g: GradedLieAlgebra) -> List[GradedSubalgebra]:
    """Parabolic p, g_- + g_0 and the family-specific maximal witnesses"""
    if g.family is None:
        raise InputError(f"{g.name} is not one of the built-in families")
    family = default_service().get_family(g.family)
    k = g.k
    parabolic: Dict[int, List[SparseRow]] = {}
    for i in g.filtration(0):
        parabolic.setdefault(g.degrees[i], []).append({i: Fraction(1)})
    catalog = [
        GradedSubalgebra.from_vectors(g, parabolic, name="p"),
        GradedSubalgebra.from_vectors(g, full_components(g, range(-k, 1)), name="g_- + g_0"),
    ]
    for name, comps in family.witnesses(g).items():
        catalog.append(GradedSubalgebra.from_vectors(g, comps, name=name))
    return catalog


# -- closure ------------------------------------------------------------------


def _homogeneous_degree(g: GradedLieAlgebra, vec: Mapping[int, Fraction]) -> Optional[int]:
    if not any(vec.values()):
        return None
    return g.to_component(vec)[0]


def bracket_closure(g: GradedLieAlgebra, generators: Sequence[Mapping[int, Fraction]]) -> GradedSubalgebra:
    """Smallest graded subalgebra containing the (homogeneous) generators"""
    grouped: Dict[int, List[SparseRow]] = {}
    for gen in generators:
        d = _homogeneous_degree(g, gen)
        if d is not None:
            grouped.setdefault(d, []).append({i: Fraction(v) for i, v in gen.items() if v})
    comps = {d: Subspace.from_vectors(vecs, g.dim) for d, vecs in grouped.items()}

    for _ in range(g.dim + 1):
        bases = {d: s.vectors() for d, s in comps.items() if s.dim}
        found: Dict[int, List[SparseRow]] = {}
        degrees = sorted(bases)
        for a, i in enumerate(degrees):
            for j in degrees[a:]:
                if abs(i + j) > g.k:
                    continue
                for u in bases[i]:
                    for v in bases[j]:
                        w = g.bracket(u, v)
                        if w:
                            found.setdefault(i + j, []).append(w)
        grew = False
        for d, vecs in found.items():
            current = comps.get(d, Subspace.zero(g.dim))
            fresh = [w for w in vecs if not current.contains_vector(w)]
            if fresh:
                comps[d] = Subspace.from_vectors(current.vectors() + fresh, g.dim)
                grew = True
        if not grew:
            break
    return GradedSubalgebra(g, comps, name="closure")


class ModularStructure:
    """Structure constants of g reduced mod CLOSURE_PRIME"""

    def __init__(self, g: GradedLieAlgebra, p: int = CLOSURE_PRIME):
        self.g = g
        self.p = p
        self.valid = True
        tensor = np.zeros((g.dim, g.dim, g.dim), dtype=np.int64)
        for (i, j), vec in g.table.items():
            for t, c in vec.items():
                if c.denominator % p == 0:
                    self.valid = False
                    return
                tensor[i, j, t] = (c.numerator * pow(c.denominator, -1, p)) % p
        self.flat = tensor.reshape(g.dim, g.dim * g.dim)

    def bracket_all(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """All brackets of rows of a with rows of b, mod p"""
        dim = self.g.dim
        left = (a @ self.flat % self.p).reshape(a.shape[0], dim, dim)
        # out[x, y, t] = sum_j left[x, j, t] * b[y, j]
        out = np.einsum('xjt,yj->xyt', left, b) % self.p
        return out.reshape(-1, dim)

    def closure_dim(self, generators: Dict[int, List[SparseRow]]) -> int:
        """Dimension of the closure over GF(p), a lower bound for the rational one"""
        g, p = self.g, self.p
        comps: Dict[int, np.ndarray] = {}
        for d, vecs in generators.items():
            rows = np.zeros((len(vecs), g.dim), dtype=np.int64)
            for r, vec in enumerate(vecs):
                for i, c in vec.items():
                    rows[r, i] = (c.numerator * pow(c.denominator, -1, p)) % p
            comps[d] = rref_mod_p(rows, p)[0]
        grew = True
        while grew:
            grew = False
            degrees = sorted(d for d, m in comps.items() if m.shape[0])
            for a, i in enumerate(degrees):
                for j in degrees[a:]:
                    if abs(i + j) > g.k:
                        continue
                    products = self.bracket_all(comps[i], comps[j])
                    current = comps.get(i + j, np.zeros((0, g.dim), dtype=np.int64))
                    reduced = rref_mod_p(np.vstack([current, products]), p)[0]
                    if reduced.shape[0] > current.shape[0]:
                        comps[i + j] = reduced
                        grew = True
        return sum(m.shape[0] for m in comps.values())


# -- gap scan -----------------------------------------------------------------


def random_generators(g: GradedLieAlgebra, rng: np.random.Generator) -> List[SparseRow]:
    """1..MAX_GENERATORS homogeneous elements with integer coordinates in [-COORD_RANGE, COORD_RANGE]"""
    degrees = [d for d in range(-g.k, g.k + 1) if g.component(d)]
    size = int(rng.integers(1, MAX_GENERATORS + 1))
    gens = []
    for _ in range(size):
        d = degrees[int(rng.integers(0, len(degrees)))]
        coords = rng.integers(-COORD_RANGE, COORD_RANGE + 1, size=len(g.component(d)))
        gens.append({i: Fraction(int(c)) for i, c in zip(g.component(d), coords) if c})
    return [v for v in gens if v]


def _scan_chunk(args) -> Tuple[Dict[int, int], List[Dict], int]:
    g, seed, trials, start, stop, forbidden = args
    lo, hi = forbidden
    children = np.random.SeedSequence(seed).spawn(trials)[start:stop]
    modular = ModularStructure(g)
    histogram: Dict[int, int] = {}
    violations: List[Dict] = []
    full = 0
    for offset, child in enumerate(children):
        rng = np.random.default_rng(child)
        gens = random_generators(g, rng)
        grouped: Dict[int, List[SparseRow]] = {}
        for v in gens:
            grouped.setdefault(g.to_component(v)[0], []).append(v)
        if modular.valid and modular.closure_dim(grouped) == g.dim:
            full += 1
            continue
        b = bracket_closure(g, gens)
        if not b.proper:
            full += 1
            continue
        histogram[b.dim] = histogram.get(b.dim, 0) + 1
        if lo < b.dim < hi:
            violations.append({
                'trial': start + offset,
                'dim': b.dim,
                'profile': list(b.profile()),
                'generators': [
                    {'degree': g.to_component(v)[0],
                     'coords': [fraction_to_str(c) for c in g.to_component(v)[1]]}
                    for v in gens
                ],
            })
    return histogram, violations, full


def gap_scan(
    g: GradedLieAlgebra,
    forbidden: Tuple[int, int],
    trials: int,
    seed: int,
    workers: int = 1,
) -> Dict:
    """
    Random search for proper graded subalgebras with dimension strictly inside `forbidden`

    Args:
        g: algebra to scan
        forbidden: open interval (lo, hi)
        trials: number of random generator sets
        seed: master seed; trial t uses SeedSequence(seed).spawn(trials)[t]
        workers: processes; the result does not depend on it

    Returns:
        Dictionary with histogram (dim -> count of proper closures), violations and counts
    """
    if trials < 1:
        raise InputError(f"trials must be at least 1, got {trials}")
    lo, hi = forbidden
    workers = max(1, int(workers))
    bounds = np.linspace(0, trials, workers + 1).astype(int)
    chunks = [(g, seed, trials, int(bounds[i]), int(bounds[i + 1]), (lo, hi))
              for i in range(workers) if bounds[i] < bounds[i + 1]]
    if workers == 1:
        results = [_scan_chunk(c) for c in chunks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_chunk, chunks))

    histogram: Dict[int, int] = {}
    violations: List[Dict] = []
    full = 0
    for hist, viol, f in results:
        for d, c in hist.items():
            histogram[d] = histogram.get(d, 0) + c
        violations.extend(viol)
        full += f
    violations.sort(key=lambda v: v['trial'])
    logger.info(f"Gap scan on {g.name}: {trials} trials, {len(violations)} violations in ({lo}, {hi})")
    if violations:
        logger.warning(f"Found {len(violations)} proper subalgebras inside ({lo}, {hi})")
    return {
        'algebra': g.name,
        'forbidden': [lo, hi],
        'trials': trials,
        'seed': seed,
        'histogram': {str(d): histogram[d] for d in sorted(histogram)},
        'full_closures': full,
        'violations': violations,
    }


# -- stabilizers ----------------------------------------------------------------


def subspace_stabilizer_dim(g: GradedLieAlgebra, module_degree: int, w: Subspace) -> int:
    """dim {a in g_0 : [a, w] inside w} for w inside g_module_degree"""
    if module_degree not in (-2, -1, 1, 2) or abs(module_degree) > g.k:
        raise InputError(f"module degree must be +-1 or +-2 within the grading, got {module_degree}")
    return len(g.stabilizer(module_degree, w.vectors()))


def stabilizer_profile(n: int) -> Dict:
    """
    Stabilizer dims of the coordinate subspaces span(v_0..v_(l-1)) of g_1 in so(n+1, n)

    Returns:
        {'values': {l: computed}, 'formula': {l: n^2 - (n-l)l}, 'max': ..., 'argmax': [...]}
    """
    g = build_so_split(n)
    family = default_service().get_family('so-split')
    ones = g.component(1)
    values, formula = {}, {}
    for ell in range(1, n):
        w = Subspace.from_vectors([{ones[i]: Fraction(1)} for i in range(ell)], g.dim)
        values[ell] = subspace_stabilizer_dim(g, 1, w)
        formula[ell] = family.stabilizer_formula(n, ell)
    best = max(values.values())
    return {
        'n': n,
        'values': values,
        'formula': formula,
        'max': best,
        'argmax': [ell for ell, v in values.items() if v == best],
    }
