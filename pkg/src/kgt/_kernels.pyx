# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Signatures mirror ``kgt._pykernels``."""

import numpy as np

from libc.stdlib cimport malloc, free


cdef long long _gcd(long long a, long long b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


def count_reduced_forms(long long disc, bint primitive=True):
    cdef long long n = -disc
    cdef long long a = 1, b, c, num, four_a
    cdef long long count = 0
    with nogil:
        while 3 * a * a <= n:
            four_a = 4 * a
            b = -a + 1
            if (b - disc) & 1:
                b += 1
            while b <= a:
                num = b * b - disc
                if num % four_a == 0:
                    c = num // four_a
                    if c >= a and not (b < 0 and a == c):
                        if not primitive or _gcd(_gcd(a, b), c) == 1:
                            count += 1
                b += 2
            a += 1
    return count


def count_quadratic_roots(long long e):
    cdef long long x, count = 0
    with nogil:
        for x in range(e):
            if (x * x + x + 1) % e == 0:
                count += 1
    return count


def count_box_points(normals, rhs, lo, hi):
    cdef long long[:, ::1] A = np.ascontiguousarray(normals, dtype=np.int64)
    cdef long long[::1] r = np.ascontiguousarray(rhs, dtype=np.int64)
    cdef long long[::1] low = np.ascontiguousarray(lo, dtype=np.int64)
    cdef long long[::1] high = np.ascontiguousarray(hi, dtype=np.int64)
    cdef Py_ssize_t m = A.shape[0], n = A.shape[1], i, j
    cdef long long count = 0, s
    cdef bint ok
    for j in range(n):
        if high[j] < low[j]:
            return 0
    cdef long long *u = <long long *> malloc(n * sizeof(long long))
    if u == NULL:
        raise MemoryError()
    try:
        with nogil:
            for j in range(n):
                u[j] = low[j]
            while True:
                ok = True
                for i in range(m):
                    s = 0
                    for j in range(n):
                        s += A[i, j] * u[j]
                    if s < r[i]:
                        ok = False
                        break
                if ok:
                    count += 1
                j = n - 1
                while j >= 0:
                    u[j] += 1
                    if u[j] <= high[j]:
                        break
                    u[j] = low[j]
                    j -= 1
                if j < 0:
                    break
    finally:
        free(u)
    return count


def sl2_subgroup_counts(long long n):
    if n == 1:
        return 1, 1, 1
    cdef long long n2 = n * n, n3 = n * n * n, size = n * n * n * n
    seen_arr = np.zeros(size, dtype=np.uint8)
    queue_arr = np.zeros(n3 + 1, dtype=np.int64)
    cdef unsigned char[::1] seen = seen_arr
    cdef long long[::1] queue = queue_arr
    cdef long long head = 0, tail = 0, code, a, b, c, d, nxt, k
    cdef long long total = 0, g0 = 0, g1 = 0
    cdef long long one = 1 % n
    with nogil:
        code = one * n3 + one
        seen[code] = 1
        queue[tail] = code
        tail += 1
        while head < tail:
            code = queue[head]
            head += 1
            a = code // n3
            b = (code // n2) % n
            c = (code // n) % n
            d = code % n
            total += 1
            if c == 0:
                g0 += 1
                if a == one and d == one:
                    g1 += 1
            for k in range(2):
                if k == 0:
                    # g * S
                    nxt = (b % n) * n3 + ((n - a) % n) * n2 + (d % n) * n + ((n - c) % n)
                else:
                    # g * T
                    nxt = a * n3 + ((a + b) % n) * n2 + c * n + ((c + d) % n)
                if not seen[nxt]:
                    seen[nxt] = 1
                    queue[tail] = nxt
                    tail += 1
    return total, g0, g1


def divisor_count_sieve(long long limit):
    out_arr = np.zeros(limit + 1, dtype=np.int32)
    cdef int[::1] out = out_arr
    cdef long long i, j
    with nogil:
        for i in range(1, limit + 1):
            j = i
            while j <= limit:
                out[j] += 1
                j += i
    return out_arr


def distinct_prime_sieve(long long limit):
    out_arr = np.zeros(limit + 1, dtype=np.int32)
    cdef int[::1] out = out_arr
    cdef long long p, j
    with nogil:
        for p in range(2, limit + 1):
            if out[p] != 0:
                continue
            j = p
            while j <= limit:
                out[j] += 1
                j += p
    return out_arr
