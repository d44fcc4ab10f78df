"""
Modular arithmetic helpers for multi-modular elimination
File: core/modular.py
"""

from math import isqrt
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np


# Deterministic Miller-Rabin witnesses, valid below 3.4e14
_MR_BASES = (2, 3, 5, 7, 11, 13, 17)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_below(bound: int, count: int) -> List[int]:
    """Largest `count` primes strictly below `bound`, descending"""
    found = []
    n = bound - 1
    while len(found) < count and n > 1:
        if is_prime(n):
            found.append(n)
        n -= 1
    return found


def random_prime(rng: np.random.Generator, low: int = 2 ** 30, high: int = 2 ** 31) -> int:
    """Random prime in [low, high) drawn from a seeded generator"""
    n = int(rng.integers(low, high))
    while not is_prime(n):
        n += 1
        if n >= high:
            n = low
    return n


# Products of two residues stay below 2**62, safe for int64
ELIMINATION_PRIMES: Tuple[int, ...] = tuple(primes_below(2 ** 31, 8))

# Small enough that d * p**2 fits int64 for d < 128 (closure contractions)
CLOSURE_PRIME: int = primes_below(2 ** 26, 1)[0]


def rref_mod_p(a: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    """
    Reduced row echelon form over GF(p)

    Args:
        a: integer matrix (any int64 values, reduced mod p here)
        p: prime below 2**31

    Returns:
        (echelon rows as int64 array, pivot columns)
    """
    m = np.array(a, dtype=np.int64) % p
    nrows, ncols = m.shape
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r] = (m[r] * inv) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            m[hit] = (m[hit] - (np.outer(col[hit], m[r]) % p)) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank_mod_p(a: np.ndarray, p: int) -> int:
    return len(rref_mod_p(a, p)[1])


def crt_combine(residues: Sequence[int], moduli: Sequence[int]) -> Tuple[int, int]:
    """Chinese remaindering of one value; returns (x mod M, M)"""
    x, modulus = 0, 1
    for r, m in zip(residues, moduli):
        # x + modulus * t == r (mod m)
        t = ((r - x) * pow(modulus, -1, m)) % m
        x += modulus * t
        modulus *= m
    return x % modulus, modulus


def rational_reconstruction(a: int, m: int) -> Optional[Fraction]:
    """
    Smallest p/q with p == a*q (mod m), |p|, q <= sqrt(m/2)

    Returns None when no such fraction exists.
    """
    a %= m
    if a == 0:
        return Fraction(0)
    bound = isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    return Fraction(r1, s1)
