"""Integral lattices, discriminant forms and the boundary-curve congruence embedding."""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import exact as mx
from .arith import factorize, nu
from .errors import InvalidInput, VerificationFailure

OQL_ORACLE_CAP = 400


# --- Gram matrices -----------------------------------------------------------


@dataclass(frozen=True)
class GramMatrix:
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise InvalidInput("Gram matrix must be square and nonempty")
        if any(rows[i][j] != rows[j][i] for i in range(n) for j in range(i)):
            raise InvalidInput("Gram matrix must be symmetric")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def of(cls, rows) -> "GramMatrix":
        return cls(tuple(tuple(r) for r in rows))

    @property
    def dim(self) -> int:
        return len(self.entries)

    def as_list(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def det(self) -> int:
        return int(mx.det(self.as_list()))

    def signature(self) -> tuple[int, int]:
        ev = np.linalg.eigvalsh(np.array(self.entries, dtype=float))
        return int(np.sum(ev > 0)), int(np.sum(ev < 0))

    def is_even(self) -> bool:
        return all(self.entries[i][i] % 2 == 0 for i in range(self.dim))

    def preserved_by(self, g) -> bool:
        q = self.as_list()
        return mx.matmul(mx.matmul(mx.transpose(g), q), g) == q

    def to_json(self) -> str:
        return json.dumps(self.as_list())

    @classmethod
    def from_json(cls, text: str) -> "GramMatrix":
        return cls.of(json.loads(text))


def direct_sum(*blocks) -> GramMatrix:
    mats = [b.as_list() if isinstance(b, GramMatrix) else b for b in blocks]
    n = sum(len(m) for m in mats)
    out = mx.zeros(n, n)
    k = 0
    for m in mats:
        for i, row in enumerate(m):
            out[k + i][k : k + len(row)] = row
        k += len(m)
    return GramMatrix.of(out)


HYPERBOLIC = [[0, 1], [1, 0]]


def kummer_lattice(d: int) -> GramMatrix:
    """U + U + <-6> + <-2d>."""
    if not isinstance(d, int) or d < 1:
        raise InvalidInput(f"d must be a positive integer, got {d!r}")
    return direct_sum(HYPERBOLIC, HYPERBOLIC, [[-6]], [[-2 * d]])


# --- discriminant groups -----------------------------------------------------


def _mod2(x: Fraction) -> Fraction:
    return x - 2 * math.floor(x / 2)


@dataclass(frozen=True)
class DiscriminantGroup:
    """Finite quadratic module L^v/L given by cyclic generators.

    ``generators`` are rational coordinate vectors in L (x) Q, one per
    cyclic factor; ``gram`` is the ambient bilinear form used to evaluate them.
    """

    cyclic_orders: tuple[int, ...]
    generator_norms: tuple[Fraction, ...]
    generators: tuple[tuple[Fraction, ...], ...] = field(default=(), compare=False)
    gram: GramMatrix | None = field(default=None, compare=False)

    def __post_init__(self):
        if any(o < 1 for o in self.cyclic_orders):
            raise InvalidInput("cyclic orders must be positive")
        object.__setattr__(self, "generator_norms", tuple(_mod2(Fraction(x)) for x in self.generator_norms))

    @property
    def order(self) -> int:
        return math.prod(self.cyclic_orders)

    def invariant_factors(self) -> list[int]:
        return invariant_factors(self.cyclic_orders)

    def bilinear(self, i: int, j: int) -> Fraction:
        """b(g_i, g_j) mod 1."""
        if self.gram is None:
            raise InvalidInput("group carries no ambient form")
        x, y = self.generators[i], self.generators[j]
        val = mx.dot(x, mx.matvec(self.gram.as_list(), y))
        return val - math.floor(val)


def invariant_factors(orders) -> list[int]:
    """Invariant factors (ascending, each dividing the next, 1s dropped) of a product of cyclic groups."""
    by_prime: dict[int, list[int]] = {}
    for o in orders:
        for p, k in factorize(o).factors if o > 1 else ():
            by_prime.setdefault(p, []).append(p**k)
    length = max((len(v) for v in by_prime.values()), default=0)
    out = [1] * length
    for powers in by_prime.values():
        powers.sort(reverse=True)
        for i, q in enumerate(powers):
            out[length - 1 - i] *= q
    return out


def discriminant_group(G: GramMatrix) -> DiscriminantGroup:
    """D(L) from the Smith normal form U G V = S: generators V[:, i] / s_i for s_i > 1."""
    g = G.as_list()
    if mx.det(g) == 0:
        raise InvalidInput("singular Gram matrix has no finite discriminant group")
    diag, _, v = mx.smith_normal_form(g)
    orders, norms, gens = [], [], []
    for i, s in enumerate(diag):
        if s == 1:
            continue
        vec = tuple(Fraction(v[r][i], s) for r in range(G.dim))
        orders.append(s)
        norms.append(mx.dot(vec, mx.matvec(g, vec)))
        gens.append(vec)
    return DiscriminantGroup(tuple(orders), tuple(norms), tuple(gens), G)


def split_2d(d: int) -> tuple[int, int, int]:
    """(a, b, d') with 2^a || 2d, 3^b || 2d and d' = 2d / (2^a 3^b)."""
    m = 2 * d
    a = b = 0
    while m % 2 == 0:
        m //= 2
        a += 1
    while m % 3 == 0:
        m //= 3
        b += 1
    return a, b, m


def kummer_decomposition(d: int) -> DiscriminantGroup:
    """Primary decomposition (C2 + C_{2^a}) + (C3 + C_{3^b}) + C_{d'} with explicit generators."""
    G = kummer_lattice(d)
    a, b, dp = split_2d(d)
    w = [0, 0, 0, 0, 1, 0]
    v = [0, 0, 0, 0, 0, 1]
    parts = [(2, w, 2), (2**a, v, 2**a), (3, w, 3), (3**b, v, 3**b), (dp, v, dp)]
    orders, norms, gens = [], [], []
    g = G.as_list()
    for order, base, den in parts:
        vec = tuple(Fraction(x, den) for x in base)
        orders.append(order)
        norms.append(mx.dot(vec, mx.matvec(g, vec)))
        gens.append(vec)
    return DiscriminantGroup(tuple(orders), tuple(norms), tuple(gens), G)


def decomposition_matches(d: int) -> bool:
    snf = discriminant_group(kummer_lattice(d))
    closed = kummer_decomposition(d)
    return snf.order == 12 * d == closed.order and snf.invariant_factors() == closed.invariant_factors()


# --- congruence counts behind the index bound --------------------------------


def _norm_2part(d: int, a: int, p: int, q: int) -> Fraction:
    return Fraction(-3 * p * p, 2) - Fraction(2 * d * q * q, 4**a)


def _norm_3part(d: int, b: int, p: int, q: int) -> Fraction:
    return Fraction(-2 * p * p, 3) - Fraction(2 * d * q * q, 9**b)


def count_congruence_solutions(d: int, p_fixed: int, prime_part: int) -> int:
    """Number of q with (p_fixed, q) of norm equal to the C_{2^a} (or C_{3^b}) generator norm mod 2.

    For the 2-part q runs over Z/2^a; for the 3-part q runs over the elements
    of order exactly 3^b in Z/3^b. Exact rational arithmetic throughout.
    """
    if d < 1:
        raise InvalidInput("d must be positive")
    a, b, _ = split_2d(d)
    if prime_part == 2:
        if p_fixed not in (0, 1):
            raise InvalidInput("p_fixed must be 0 or 1 for the 2-part")
        target = Fraction(-2 * d, 4**a)
        return sum(1 for q in range(2**a) if _mod2(_norm_2part(d, a, p_fixed, q) - target) == 0)
    if prime_part == 3:
        if p_fixed not in (0, 1, 2):
            raise InvalidInput("p_fixed must be 0, 1 or 2 for the 3-part")
        target = Fraction(-2 * d, 9**b)
        qs = [q for q in range(3**b) if b == 0 or q % 3]
        return sum(1 for q in qs if _mod2(_norm_3part(d, b, p_fixed, q) - target) == 0)
    raise InvalidInput("prime_part must be 2 or 3")


def congruence_1_count(a: int) -> int:
    """Solutions of q^2 = 1 mod 2^(a+1) with q taken mod 2^a."""
    m = 2 ** (a + 1)
    return sum(1 for q in range(2**a) if (q * q - 1) % m == 0)


@dataclass(frozen=True)
class ElementCounts:
    order_2a_with_norm: int
    order_2_with_norm: int
    order_3b_with_norm: int
    order_3_with_norm: int


def element_counts(d: int) -> ElementCounts:
    """Elements of the 2- and 3-primary parts with the orders and norms of the standard generators."""
    a, b, _ = split_2d(d)

    def order(p_ord, p, q_ord, q):
        o1 = p_ord // math.gcd(p, p_ord)
        o2 = q_ord // math.gcd(q, q_ord)
        return o1 * o2 // math.gcd(o1, o2)

    c2a = c2 = c3b = c3 = 0
    t2a, t2 = Fraction(-2 * d, 4**a), Fraction(-3, 2)
    for p in range(2):
        for q in range(2**a):
            n = _mod2(_norm_2part(d, a, p, q))
            o = order(2, p, 2**a, q)
            c2a += o == 2**a and n == _mod2(t2a)
            c2 += o == 2 and n == _mod2(t2)
    t3b, t3 = Fraction(-2 * d, 9**b), Fraction(-2, 3)
    for p in range(3):
        for q in range(3**b):
            n = _mod2(_norm_3part(d, b, p, q))
            o = order(3, p, 3**b, q)
            c3b += o == 3**b and n == _mod2(t3b)
            c3 += o == 3 and n == _mod2(t3)
    return ElementCounts(c2a, c2, c3b, c3)


def index_bound(d: int) -> int:
    if d < 1:
        raise InvalidInput("d must be positive")
    return 2880 * 2 ** nu(2 * d)


def oq_bound(d: int) -> int:
    return 1440 * 2 ** nu(2 * d)


def oqL_order_oracle(d: int, cap: int = OQL_ORACLE_CAP) -> int:
    """|O(q_L)| for L = kummer_lattice(d) by enumerating images of the generators of C6 + C_{2d}.

    Any homomorphism preserving q on a nondegenerate form is injective, so the
    count of norm-preserving, mutually orthogonal generator images is exact.
    """
    if d < 1:
        raise InvalidInput("d must be positive")
    N = 12 * d
    if N > cap:
        raise InvalidInput(f"12d = {N} exceeds the enumeration cap {cap}")
    m = 2 * d
    i, j = np.meshgrid(np.arange(6), np.arange(m), indexing="ij")
    i, j = i.ravel(), j.ravel()
    # q * 12d mod 24d and b * 12d mod 12d, with q(i, j) = -i^2/6 - j^2/(2d)
    q = (-2 * d * i * i - 6 * j * j) % (2 * N)
    ord6 = (6 * i) % 6 == 0  # always true; the order condition is on (i, j) jointly
    x_ok = ord6 & ((6 * j) % m == 0) & (q == (-2 * d) % (2 * N))
    y_ok = ((m * i) % 6 == 0) & (q == (-6) % (2 * N))
    xi, xj = i[x_ok], j[x_ok]
    yi, yj = i[y_ok], j[y_ok]
    b = (-2 * d * np.outer(xi, yi) - 6 * np.outer(xj, yj)) % N
    return int(np.count_nonzero(b == 0))


# --- isotropic normal forms and the Gamma_1 embedding ------------------------


def A_block(a: int, e: int) -> list[list[int]]:
    return [[a, 0], [0, a * e]]


def gram_with_D(a: int, e: int, B, D) -> GramMatrix:
    """[[0, 0, A], [0, B, 0], [A, 0, D]] with A = diag(a, ae)."""
    A = A_block(a, e)
    Z2 = mx.zeros(2, 2)
    return GramMatrix.of(mx.block([[Z2, Z2, A], [Z2, B, Z2], [A, Z2, D]]))


def _wa_term(W, A):
    """tW A + tA W."""
    wa = mx.matmul(mx.transpose(W), A)
    return [[wa[i][j] + wa[j][i] for j in range(2)] for i in range(2)]


def _check_sym2(D):
    if len(D) != 2 or any(len(r) != 2 for r in D) or D[0][1] != D[1][0]:
        raise InvalidInput("D must be a symmetric 2x2 integer matrix")


@dataclass(frozen=True)
class IsotropicNormalForm:
    """Type (a, e) data with D reduced: D11 mod 2a, D12 mod a, D22 mod 2ae."""

    a: int
    e: int
    B: tuple[tuple[int, int], tuple[int, int]]
    D: tuple[tuple[int, int], tuple[int, int]]

    def __post_init__(self):
        if self.a < 1 or self.e < 1:
            raise InvalidInput("a and e must be positive")
        (b11, b12), (b21, b22) = self.B
        if b12 != b21 or not (b11 < 0 and b11 * b22 - b12 * b12 > 0):
            raise InvalidInput("B must be negative definite")
        if not is_reduced_D(self.D, self.a, self.e):
            raise InvalidInput("D block is not reduced")


def is_reduced_D(D, a: int, e: int) -> bool:
    return 0 <= D[0][0] < 2 * a and 0 <= D[0][1] < a and 0 <= D[1][1] < 2 * a * e and D[0][1] == D[1][0]


def reduce_D_block(D, a: int, e: int) -> tuple[list[list[int]], list[list[int]]]:
    """Reduce D by the change of basis [[I,0,W],[0,I,0],[0,0,I]]; returns (D + tWA + tAW, W)."""
    if a < 1 or e < 1:
        raise InvalidInput("a and e must be positive")
    D = [list(map(int, r)) for r in D]
    _check_sym2(D)
    W = [[-(D[0][0] // (2 * a)), -(D[0][1] // a)], [0, -(D[1][1] // (2 * a * e))]]
    shift = _wa_term(W, A_block(a, e))
    return [[D[i][j] + shift[i][j] for j in range(2)] for i in range(2)], W


def normal_form_count(a: int, e: int) -> int:
    return 4 * a**3 * e


def in_gamma1(Z, N: int, convention: str = "transposed") -> bool:
    """Membership of Z in SL2(Z) congruent to [[1,0],[*,1]] ('transposed') or [[1,*],[0,1]] ('upper') mod N."""
    (p, q), (r, s) = Z
    if p * s - q * r != 1:
        return False
    off = q if convention == "transposed" else r
    if convention not in ("transposed", "upper"):
        raise InvalidInput(f"unknown convention {convention!r}")
    return (p - 1) % N == 0 and (s - 1) % N == 0 and off % N == 0


def solve_W(Z, A, D) -> list[list[int]]:
    """Minimal integral W with tWA + tAW = D - tZDZ, or raise VerificationFailure."""
    a, ae = A[0][0], A[1][1]
    R = mx.matmul(mx.matmul(mx.transpose(Z), D), Z)
    R = [[D[i][j] - R[i][j] for j in range(2)] for i in range(2)]
    if R[0][0] % (2 * a) or R[0][1] % a or R[1][1] % (2 * ae):
        raise VerificationFailure(f"no integral W: D - tZDZ = {R} for A = diag({a}, {ae})")
    e = ae // a
    r = R[0][1] // a  # = w12 + e*w21
    w21 = round(Fraction(r, e))
    w12 = r - e * w21
    return [[R[0][0] // (2 * a), w12], [w21, R[1][1] // (2 * ae)]]


def build_gZ(Z, A, D, convention: str = "transposed") -> list[list[int]]:
    """g_Z = [[U, 0, UW], [0, I, 0], [0, 0, Z]] with U = t(A Z^-1 A^-1)."""
    Z = [list(map(int, r)) for r in Z]
    A = [list(map(int, r)) for r in A]
    D = [list(map(int, r)) for r in D]
    _check_sym2(D)
    a, ae = A[0][0], A[1][1]
    if A[0][1] or A[1][0] or a < 1 or ae % a:
        raise InvalidInput("A must be diag(a, ae) with a, e >= 1")
    if not in_gamma1(Z, ae, convention):
        raise InvalidInput(f"Z = {Z} is not in Gamma_1({ae})")
    U = mx.transpose(mx.matmul(mx.matmul(A, mx.inverse(Z)), mx.inverse(A)))
    if not mx.is_integral(U):
        raise VerificationFailure(f"U = t(A Z^-1 A^-1) is not integral for Z = {Z}")
    U = mx.to_int(U)
    W = solve_W(Z, A, D)
    UW = mx.matmul(U, W)
    I2, Z2 = mx.identity(2), mx.zeros(2, 2)
    return mx.block([[U, Z2, UW], [Z2, I2, Z2], [Z2, Z2, Z]])


def _blocks(g):
    return {(i, j): mx.sub(g, 2 * i, 2 * i + 2, 2 * j, 2 * j + 2) for i in range(3) for j in range(3)}


def is_in_NE(g, Q: GramMatrix) -> bool:
    """N(E) membership conditions on the [[0,0,A],[0,B,0],[A,0,D]] basis.

    A nonzero D block is first removed by the rational change of basis with
    W0 = -(1/2) A^-1 D, which puts Q into the D = 0 shape the conditions are
    stated for.
    """
    if len(g) != 6 or any(len(r) != 6 for r in g) or Q.dim != 6:
        raise InvalidInput("is_in_NE expects 6x6 matrices")
    blk = _blocks(g)
    if any(x != 0 for key in ((1, 0), (2, 0), (2, 1)) for row in blk[key] for x in row):
        raise InvalidInput("g must be block upper triangular in the 2+2+2 split")
    if not mx.is_integral(g):
        return False
    qb = _blocks(Q.as_list())
    A, B, D = qb[(0, 2)], qb[(1, 1)], qb[(2, 2)]
    if any(x for key in ((0, 0), (0, 1), (1, 2)) for row in qb[key] for x in row):
        raise InvalidInput("Q is not in isotropic normal-form shape")
    if any(D[i][j] for i in range(2) for j in range(2)):
        W0 = [[-Fraction(x, 2) for x in row] for row in mx.matmul(mx.inverse(A), D)]
        C = mx.block([[mx.identity(2), mx.zeros(2, 2), W0], [mx.zeros(2, 2), mx.identity(2), mx.zeros(2, 2)],
                      [mx.zeros(2, 2), mx.zeros(2, 2), mx.identity(2)]])
        g = mx.matmul(mx.matmul(mx.inverse(C), g), C)
        blk = _blocks(g)
    U, V, W = blk[(0, 0)], blk[(0, 1)], blk[(0, 2)]
    X, Y, Z = blk[(1, 1)], blk[(1, 2)], blk[(2, 2)]
    t = mx.transpose
    conds = [
        mx.matmul(mx.matmul(t(U), A), Z) == A,
        mx.matmul(mx.matmul(t(X), B), X) == B,
        all(x == 0 for row in _add(mx.matmul(mx.matmul(t(X), B), Y), mx.matmul(mx.matmul(t(V), A), Z)) for x in row),
        all(
            x == 0
            for row in _add(
                mx.matmul(mx.matmul(t(Y), B), Y),
                _add(mx.matmul(mx.matmul(t(Z), A), W), mx.matmul(mx.matmul(t(W), A), Z)),
            )
            for x in row
        ),
        mx.det(U) > 0,
    ]
    return all(conds)


def _add(p, q):
    return [[x + y for x, y in zip(r, s)] for r, s in zip(p, q)]


def random_gamma1(rng: random.Random, N: int, bound: int = 1000, convention: str = "transposed"):
    """A random element of Gamma_1(N) with entries of size roughly ``bound``."""
    k = max(1, bound // N)
    while True:
        p = 1 + N * rng.randint(-k, k)
        r = N * rng.randint(-k, k)
        if math.gcd(p, r) != 1:
            continue
        if r == 0:
            if p != 1 and not (p == -1 and N <= 2):
                continue
            Z = [[p, rng.randint(-bound, bound)], [0, p]]
        else:
            s = pow(p, -1, abs(r)) if abs(r) > 1 else 1
            s += abs(r) * rng.randint(-k // max(1, abs(r) // N), k // max(1, abs(r) // N) if abs(r) // N else k)
            q = (p * s - 1) // r
            Z = [[p, q], [r, s]]
        if convention == "transposed":
            Z = mx.transpose(Z)
        if in_gamma1(Z, N, convention):
            return Z
