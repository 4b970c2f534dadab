"""Pure-Python (numpy-assisted) implementations of the hot kernels.

Every function here has an identically named twin in the compiled
``_kernels`` extension; ``kgt.kernels`` picks one of the two at import.
"""

from __future__ import annotations

from math import gcd, isqrt

import numpy as np


def count_reduced_forms(disc: int, primitive: bool = True) -> int:
    """Count reduced positive-definite forms ax^2 + bxy + cy^2 of discriminant ``disc``."""
    n = -disc
    count = 0
    a = 1
    while 3 * a * a <= n:
        four_a = 4 * a
        for b in range(-a + 1, a + 1):
            if (b - disc) & 1:
                continue
            num = b * b - disc
            if num % four_a:
                continue
            c = num // four_a
            if c < a or (b < 0 and a == c):
                continue
            if primitive and gcd(gcd(a, b), c) != 1:
                continue
            count += 1
        a += 1
    return count


def count_quadratic_roots(e: int) -> int:
    """Number of residues x mod e with x^2 + x + 1 = 0 mod e."""
    x = np.arange(e, dtype=np.int64)
    return int(np.count_nonzero((x * x + x + 1) % e == 0))


def count_box_points(normals, rhs, lo, hi) -> int:
    """Count integer points u with lo <= u <= hi and normals @ u >= rhs."""
    normals = np.asarray(normals, dtype=np.int64)
    rhs = np.asarray(rhs, dtype=np.int64)
    lo = np.asarray(lo, dtype=np.int64)
    hi = np.asarray(hi, dtype=np.int64)
    if np.any(hi < lo):
        return 0
    # one slab per value of the first coordinate keeps memory bounded
    axes = [np.arange(l, h + 1, dtype=np.int64) for l, h in zip(lo[1:], hi[1:])]
    if axes:
        rest = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(axes))
    else:
        rest = np.zeros((1, 0), dtype=np.int64)
    partial = rest @ normals[:, 1:].T
    total = 0
    for x0 in range(int(lo[0]), int(hi[0]) + 1):
        ok = np.all(partial + x0 * normals[:, 0] >= rhs, axis=1)
        total += int(np.count_nonzero(ok))
    return total


def sl2_subgroup_counts(n: int) -> tuple[int, int, int]:
    """Generate SL(2, Z/n) from S and T and count it and the images of Gamma0(n), Gamma1(n).

    Returns ``(|SL2(Z/n)|, |{c = 0}|, |{c = 0, a = d = 1}|)``.
    """
    if n == 1:
        return 1, 1, 1
    n2, n3 = n * n, n * n * n

    def decode(code):
        a, r = np.divmod(code, n3)
        b, r = np.divmod(r, n2)
        c, d = np.divmod(r, n)
        return a, b, c, d

    def encode(a, b, c, d):
        return ((a % n) * n3 + (b % n) * n2 + (c % n) * n + (d % n)).astype(np.int64)

    seen = np.zeros(n ** 4, dtype=bool)
    start = encode(np.array([1]), np.array([0]), np.array([0]), np.array([1]))
    seen[start] = True
    frontier = start
    found = [start]
    while frontier.size:
        a, b, c, d = decode(frontier)
        # right multiplication by S = [[0,-1],[1,0]] and T = [[1,1],[0,1]]
        cand = np.concatenate([encode(b, -a, d, -c), encode(a, a + b, c, c + d)])
        cand = np.unique(cand)
        cand = cand[~seen[cand]]
        seen[cand] = True
        found.append(cand)
        frontier = cand
    elems = np.concatenate(found)
    a, b, c, d = decode(elems)
    in_g0 = c == 0
    in_g1 = in_g0 & (a == 1 % n) & (d == 1 % n)
    return int(elems.size), int(np.count_nonzero(in_g0)), int(np.count_nonzero(in_g1))


def divisor_count_sieve(limit: int) -> np.ndarray:
    """sigma0(n) for 0 <= n <= limit (entry 0 is 0)."""
    out = np.zeros(limit + 1, dtype=np.int32)
    for i in range(1, limit + 1):
        out[i::i] += 1
    return out


def distinct_prime_sieve(limit: int) -> np.ndarray:
    """nu(n), the number of distinct prime factors, for 0 <= n <= limit."""
    out = np.zeros(limit + 1, dtype=np.int32)
    composite = np.zeros(limit + 1, dtype=bool)
    for p in range(2, limit + 1):
        if composite[p]:
            continue
        out[p::p] += 1
        if p <= isqrt(limit):
            composite[p * p :: p] = True
    return out
