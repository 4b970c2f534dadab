"""Exact integer/rational matrix helpers on nested lists.

Matrices are lists of rows. Entries are ``int`` or ``Fraction``; nothing here
touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

Matrix = list[list]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[0] * c for _ in range(r)]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Matrix, v) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def block(rows: list[list[Matrix]]) -> Matrix:
    """Assemble a block matrix from a grid of equally shaped blocks."""
    out = []
    for brow in rows:
        for i in range(len(brow[0])):
            out.append([x for blk in brow for x in blk[i]])
    return out


def sub(a: Matrix, r0: int, r1: int, c0: int, c1: int) -> Matrix:
    return [row[c0:c1] for row in a[r0:r1]]


def det(a: Matrix):
    """Determinant by fraction-free elimination (Bareiss); exact for ints and Fractions."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = num / prev if isinstance(num, Fraction) or isinstance(prev, Fraction) else num // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def inverse(a: Matrix) -> Matrix:
    """Inverse over Q by Gauss-Jordan."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def solve(a: Matrix, b) -> list[Fraction] | None:
    """Unique solution of a x = b over Q for square nonsingular a, else None."""
    try:
        inv = inverse(a)
    except ZeroDivisionError:
        return None
    return matvec(inv, b)


def rank(a: Matrix) -> int:
    m = [[Fraction(x) for x in row] for row in a]
    r = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
    return r


def is_integral(a) -> bool:
    if isinstance(a, list):
        return all(is_integral(x) for x in a)
    return Fraction(a).denominator == 1


def to_int(a):
    if isinstance(a, list):
        return [to_int(x) for x in a]
    f = Fraction(a)
    if f.denominator != 1:
        raise ValueError(f"{a} is not an integer")
    return f.numerator


def smith_normal_form(a: Matrix) -> tuple[list[int], Matrix, Matrix]:
    """Smith normal form of an integer matrix.

    Returns ``(diag, U, V)`` with ``U @ a @ V`` diagonal, entries ``diag``
    nonnegative and each dividing the next; U and V are unimodular.
    """
    rows, cols = len(a), len(a[0])
    m = [list(map(int, row)) for row in a]
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        m[dst] = [x + f * y for x, y in zip(m[dst], m[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, f):
        for row in m:
            row[dst] += f * row[src]
        for row in v:
            row[dst] += f * row[src]

    t = 0
    while t < min(rows, cols):
        nz = [(abs(m[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if m[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        done = False
        while not done:
            done = True
            for i in range(t + 1, rows):
                if m[i][t]:
                    q = m[i][t] // m[t][t]
                    add_row(i, t, -q)
                    if m[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, cols):
                if m[t][j]:
                    q = m[t][j] // m[t][t]
                    add_col(j, t, -q)
                    if m[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                # divisibility condition on the remaining block
                bad = next(
                    ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if m[i][j] % m[t][t]),
                    None,
                )
                if bad is not None:
                    add_row(t, bad[0], 1)
                    done = False
        if m[t][t] < 0:
            m[t] = [-x for x in m[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    diag = [m[i][i] for i in range(min(rows, cols))]
    return diag, u, v


def nullspace_vector(rows: Matrix) -> list[Fraction] | None:
    """A nonzero vector orthogonal to all given rows when they have corank one, else None."""
    n = len(rows[0])
    if rank(rows) != n - 1:
        return None
    for drop in combinations(range(n), 1):
        j = drop[0]
        sq = [[r[k] for k in range(n) if k != j] for r in rows]
        # pick n-1 independent rows
        for idx in combinations(range(len(rows)), n - 1):
            minor = [sq[i] for i in idx]
            if det(minor) != 0:
                rhs = [-rows[i][j] for i in idx]
                sol = solve(minor, rhs)
                vec = sol[:j] + [Fraction(1)] + sol[j:]
                if all(dot(r, vec) == 0 for r in rows):
                    return vec
                break
    return None
