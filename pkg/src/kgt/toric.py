"""Toric resolution of 1/6(1,1,1,2), divisors on it, and lattice-point counting."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import exact as mx
from . import kernels
from .errors import InvalidInput, VerificationFailure

Vec = tuple[Fraction, ...]


def _vec(v) -> Vec:
    return tuple(Fraction(x) for x in v)


# --- lattices, cones, fans ---------------------------------------------------


@dataclass(frozen=True)
class AmbientLattice:
    """Z^rank enlarged by rational generators, with a chosen Z-basis of the overlattice."""

    rank: int
    overlattice_generators: tuple[Vec, ...]
    basis: tuple[Vec, ...]

    def __post_init__(self):
        if len(self.basis) != self.rank or any(len(b) != self.rank for b in self.basis):
            raise InvalidInput("basis must have rank many vectors of length rank")
        gens = [tuple(Fraction(int(i == j)) for j in range(self.rank)) for i in range(self.rank)]
        gens += list(self.overlattice_generators)
        for g in gens:
            if not mx.is_integral(self.coords(g)):
                raise InvalidInput(f"generator {g} is not in the span of the basis")
        for b in self.basis:
            if not self._in_generated(b):
                raise InvalidInput(f"basis vector {b} is not in the overlattice")

    def _basis_matrix(self):
        return mx.transpose([list(b) for b in self.basis])

    def coords(self, v) -> list[Fraction]:
        sol = mx.solve(self._basis_matrix(), list(_vec(v)))
        if sol is None:
            raise InvalidInput("degenerate basis")
        return sol

    def contains(self, v) -> bool:
        return mx.is_integral(self.coords(v))

    def _in_generated(self, v) -> bool:
        # v lies in Z^n + sum Z g_i iff some integer combination of the g_i differs from v by an integer vector
        orders = []
        for g in self.overlattice_generators:
            den = math.lcm(*(Fraction(x).denominator for x in g))
            orders.append(den)
        ranges = [range(o) for o in orders]
        from itertools import product

        for coeffs in product(*ranges):
            diff = [Fraction(x) - sum(c * g[i] for c, g in zip(coeffs, self.overlattice_generators)) for i, x in enumerate(v)]
            if mx.is_integral(diff):
                return True
        return False

    def index(self) -> int:
        """[overlattice : Z^rank] = 1 / |det basis|."""
        return int(1 / abs(mx.det([list(b) for b in self.basis])))

    def is_primitive(self, v) -> bool:
        c = self.coords(v)
        return mx.is_integral(c) and math.gcd(*(int(x) for x in c)) == 1


@dataclass(frozen=True)
class Cone:
    labels: tuple[str, ...]
    rays: tuple[Vec, ...]

    def contains(self, point) -> bool:
        """Membership for simplicial full-dimensional cones."""
        sol = mx.solve(mx.transpose([list(r) for r in self.rays]), list(_vec(point)))
        if sol is None:
            raise InvalidInput("cone is not simplicial of full dimension")
        return all(x >= 0 for x in sol)

    def support(self, point) -> frozenset[str]:
        """Labels of rays with positive coefficient in the point's expansion."""
        sol = mx.solve(mx.transpose([list(r) for r in self.rays]), list(_vec(point)))
        return frozenset(l for l, x in zip(self.labels, sol) if x > 0)


@dataclass(frozen=True)
class Fan:
    lattice: AmbientLattice
    rays: dict[str, Vec]
    cones: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        for label, v in self.rays.items():
            if not self.lattice.is_primitive(v):
                raise InvalidInput(f"ray {label} = {v} is not primitive in the lattice")
        for c in self.cones:
            if any(l not in self.rays for l in c):
                raise InvalidInput(f"cone {c} uses unknown rays")

    def cone(self, labels) -> Cone:
        return Cone(tuple(labels), tuple(self.rays[l] for l in labels))

    def maximal_cones(self) -> list[Cone]:
        return [self.cone(c) for c in self.cones]

    def ray_coords(self, label) -> list[int]:
        return mx.to_int(self.lattice.coords(self.rays[label]))


E = [tuple(Fraction(int(i == j)) for j in range(4)) for i in range(4)]
V5 = _vec([Fraction(1, 2)] * 3 + [0])
V6 = _vec([Fraction(1, 6)] * 3 + [Fraction(1, 3)])
MAXIMAL_CONES = (
    ("v1", "v2", "v4", "v6"),
    ("v1", "v2", "v5", "v6"),
    ("v1", "v3", "v4", "v6"),
    ("v1", "v3", "v5", "v6"),
    ("v2", "v3", "v4", "v6"),
    ("v2", "v3", "v5", "v6"),
)


def kummer_overlattice() -> AmbientLattice:
    """N + Z (1/6)(1,1,1,2) with basis f = (v6, e2, e3, e4)."""
    return AmbientLattice(4, (V6,), (V6, E[1], E[2], E[3]))


def kummer_resolution_fan() -> Fan:
    lat = kummer_overlattice()
    rays = {"v1": E[0], "v2": E[1], "v3": E[2], "v4": E[3], "v5": V5, "v6": V6}
    return Fan(lat, rays, MAXIMAL_CONES)


def unresolved_cone() -> Cone:
    return Cone(("v1", "v2", "v3", "v4"), tuple(E))


def cone_determinant(cone: Cone, lattice: AmbientLattice) -> int:
    m = [mx.to_int(lattice.coords(r)) for r in cone.rays]
    if len(m) != lattice.rank:
        raise InvalidInput("cone is not simplicial of full dimension")
    return int(mx.det(m))


def verify_smooth(fan_or_cones, lattice: AmbientLattice | None = None) -> dict[tuple[str, ...], bool]:
    """Each maximal cone maps to True iff its rays form a basis of the lattice."""
    if isinstance(fan_or_cones, Fan):
        cones, lattice = fan_or_cones.maximal_cones(), fan_or_cones.lattice
    else:
        cones = list(fan_or_cones)
    return {c.labels: abs(cone_determinant(c, lattice)) == 1 for c in cones}


def covering_check(fan: Fan, outer: Cone, grid: int = 12) -> tuple[int, int]:
    """Sample lattice-grid points of ``outer``; return (points checked, failures).

    A failure is a point contained in no maximal cone, or contained in two
    cones without lying in their common face.
    """
    from itertools import product

    cones = fan.maximal_cones()
    inv = [mx.inverse(mx.transpose([list(r) for r in c.rays])) for c in cones]
    n = len(outer.rays)
    checked = failures = 0
    for coeffs in product(range(grid + 1), repeat=n):
        if not any(coeffs):
            continue
        pt = [sum(Fraction(c, grid) * r[i] for c, r in zip(coeffs, outer.rays)) for i in range(n)]
        checked += 1
        holders = []
        for c, m in zip(cones, inv):
            lam = mx.matvec(m, pt)
            if all(x >= 0 for x in lam):
                holders.append((set(c.labels), frozenset(l for l, x in zip(c.labels, lam) if x > 0)))
        if not holders:
            failures += 1
            continue
        if any(not (s1 <= (l1 & l2) and s2 <= (l1 & l2)) for (l1, s1), (l2, s2) in combinations(holders, 2)):
            failures += 1
    return checked, failures


# --- star fans ---------------------------------------------------------------


def _quotient_map(fan: Fan, label: str):
    """Coordinates in the quotient by the ray, dropping the basis slot the ray occupies."""
    c = fan.ray_coords(label)
    nz = [i for i, x in enumerate(c) if x]
    if len(nz) == 1 and abs(c[nz[0]]) == 1:
        j = nz[0]
        return lambda w: [x for i, x in enumerate(mx.to_int(fan.lattice.coords(w))) if i != j]
    # general primitive ray: complete it to a basis through the Smith form of its coordinate column
    _, U, _ = mx.smith_normal_form([[x] for x in c])
    return lambda w: mx.matvec(U, mx.to_int(fan.lattice.coords(w)))[1:]


def star_fan(fan: Fan, label: str) -> Fan:
    """Star of a ray, in the quotient lattice with the induced basis."""
    if label not in fan.rays:
        raise InvalidInput(f"{label} is not a ray of the fan")
    proj = _quotient_map(fan, label)
    adj = [c for c in fan.cones if label in c]
    rank = fan.lattice.rank - 1
    rays = {}
    for c in adj:
        for l in c:
            if l != label and l not in rays:
                rays[l] = _vec(proj(fan.rays[l]))
    cones = tuple(tuple(l for l in c if l != label) for c in adj)
    ident = tuple(tuple(Fraction(int(i == j)) for j in range(rank)) for i in range(rank))
    return Fan(AmbientLattice(rank, (), ident), dict(sorted(rays.items())), cones)


# --- divisors ----------------------------------------------------------------


@dataclass(frozen=True)
class TorusInvariantDivisor:
    coefficients: dict[str, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "coefficients", {k: Fraction(v) for k, v in self.coefficients.items() if v != 0})

    def coeff(self, label: str) -> Fraction:
        return self.coefficients.get(label, Fraction(0))

    def __add__(self, other: "TorusInvariantDivisor") -> "TorusInvariantDivisor":
        keys = set(self.coefficients) | set(other.coefficients)
        return TorusInvariantDivisor({k: self.coeff(k) + other.coeff(k) for k in keys})

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "TorusInvariantDivisor":
        return TorusInvariantDivisor({k: v * c for k, v in self.coefficients.items()})

    def check_support(self, fan: Fan) -> None:
        bad = [k for k in self.coefficients if k not in fan.rays]
        if bad:
            raise InvalidInput(f"divisor supported on non-rays {bad}")

    def as_row(self, labels) -> list[Fraction]:
        return [self.coeff(l) for l in labels]


def divisor(**coeffs) -> TorusInvariantDivisor:
    return TorusInvariantDivisor(coeffs)


def canonical_divisor(fan: Fan) -> TorusInvariantDivisor:
    """K = -(sum of all invariant prime divisors)."""
    return TorusInvariantDivisor({l: -1 for l in fan.rays})


def principal_divisor(fan: Fan, m) -> TorusInvariantDivisor:
    """div(chi^m) = sum <m, v> E_v, with m on the dual of the lattice basis."""
    return TorusInvariantDivisor({l: mx.dot(m, fan.lattice.coords(v)) for l, v in fan.rays.items()})


def cartier_data(D: TorusInvariantDivisor, fan: Fan) -> dict[tuple[str, ...], list[Fraction]]:
    """Per maximal cone, the m with <m, v> = coeff(v) for each ray v of the cone (dual basis coordinates).

    The sign matches the local-equation tables used for K' on this fan; the
    Fulton sign convention is recovered by negating m.
    """
    D.check_support(fan)
    out = {}
    for cone in fan.cones:
        rows = [fan.ray_coords(l) for l in cone]
        m = mx.solve(rows, [D.coeff(l) for l in cone])
        if m is None:
            raise InvalidInput(f"cone {cone} is not simplicial of full dimension")
        if not mx.is_integral(m) and all(x.denominator == 1 for x in D.coefficients.values()):
            raise VerificationFailure(f"divisor is not Cartier on {cone}")
        out[cone] = m
    return out


def linear_equivalence_witness(D1: TorusInvariantDivisor, D2: TorusInvariantDivisor, fan: Fan):
    """Integral m with D1 - D2 = div(chi^m), or None."""
    diff = D1 - D2
    labels = list(fan.rays)
    rows = [fan.ray_coords(l) for l in labels]
    rhs = diff.as_row(labels)
    n = fan.lattice.rank
    for idx in combinations(range(len(labels)), n):
        sub = [rows[i] for i in idx]
        if mx.det(sub) == 0:
            continue
        m = mx.solve(sub, [rhs[i] for i in idx])
        if all(mx.dot(m, r) == b for r, b in zip(rows, rhs)) and mx.is_integral(m):
            return m
        return None
    return None


def move_support(D: TorusInvariantDivisor, fan: Fan, label: str) -> tuple[TorusInvariantDivisor, list[Fraction]]:
    """D - div(chi^m) with coefficient 0 on ``label``; m is a multiple of the dual vector to that ray."""
    c = fan.ray_coords(label)
    j = next((i for i, x in enumerate(c) if abs(x) == 1), None)
    if j is None or sum(1 for x in c if x) != 1:
        raise InvalidInput("moving support needs the ray to be a basis vector")
    m = [Fraction(0)] * fan.lattice.rank
    m[j] = D.coeff(label) / c[j]
    moved = D - principal_divisor(fan, m)
    assert moved.coeff(label) == 0
    return moved, m


def restrict_to_orbit_closure(D: TorusInvariantDivisor, fan: Fan, label: str = "v6") -> TorusInvariantDivisor:
    """D restricted to V(ray), read off from the images of the Cartier data on the star fan."""
    if D.coeff(label) != 0:
        raise InvalidInput(f"divisor meets the orbit closure of {label}; move its support first")
    if not _is_basis_ray(fan, label):
        raise InvalidInput("restriction implemented for rays that are basis vectors")
    star = star_fan(fan, label)
    j = next(i for i, x in enumerate(fan.ray_coords(label)) if x)
    coeffs: dict[str, Fraction] = {}
    for cone, m in cartier_data(D, fan).items():
        if label not in cone:
            continue
        m_bar = [x for i, x in enumerate(m) if i != j]
        for l in cone:
            if l == label:
                continue
            val = mx.dot(m_bar, star.rays[l])
            if coeffs.setdefault(l, val) != val:
                raise VerificationFailure(f"inconsistent restriction on {l}")
    return TorusInvariantDivisor(coeffs)


def _is_basis_ray(fan: Fan, label: str) -> bool:
    c = fan.ray_coords(label)
    return sum(1 for x in c if x) == 1 and max(abs(x) for x in c) == 1


def ray_weight(fan: Fan, label: str) -> Fraction:
    """Sum of the ray's coordinates on the original basis e_1..e_n."""
    return sum(fan.rays[label], Fraction(0))


def form_bundle_divisor(k: int, fan: Fan | None = None) -> TorusInvariantDivisor:
    """Divisor of the bundle carrying invariant k-canonical forms pulled back to the resolution.

    A g-invariant k-form g(z)(dz)^k/(z_1...z_n)^k has ord_{z_i} g >= k, so by
    the order rule ord_{E_v} g >= k * (sum of the coordinates of v); against the
    log form's pole of order k on every E_v this shifts kK by -k(weight - 1)E_v.
    """
    if not isinstance(k, int) or k <= 0 or k % 6:
        raise InvalidInput(f"k must be a positive multiple of 6, got {k!r}")
    fan = fan or kummer_resolution_fan()
    out = canonical_divisor(fan).scale(k)
    shift = TorusInvariantDivisor({l: -k * (ray_weight(fan, l) - 1) for l in fan.rays})
    return out + shift


# --- polytopes and Ehrhart ---------------------------------------------------


@dataclass(frozen=True)
class LatticePolytope:
    """{u : <u, normal> >= offset for each inequality}."""

    inequalities: tuple[tuple[tuple[int, ...], Fraction], ...]

    @property
    def dim(self) -> int:
        return len(self.inequalities[0][0])

    def normals(self):
        return [list(n) for n, _ in self.inequalities]

    def offsets(self):
        return [Fraction(o) for _, o in self.inequalities]

    def dilate(self, k: int) -> "LatticePolytope":
        return LatticePolytope(tuple((n, Fraction(o) * k) for n, o in self.inequalities))

    def contains(self, u) -> bool:
        return all(mx.dot(n, u) >= o for n, o in self.inequalities)

    def vertices(self) -> list[Vec]:
        verts = set()
        normals, offs = self.normals(), self.offsets()
        for idx in combinations(range(len(normals)), self.dim):
            sub = [normals[i] for i in idx]
            sol = mx.solve(sub, [offs[i] for i in idx])
            if sol is not None and self.contains(sol):
                verts.add(tuple(sol))
        return sorted(verts)

    def is_bounded(self) -> bool:
        normals = self.normals()
        if mx.rank(normals) < self.dim:
            return self.is_empty()
        for idx in combinations(range(len(normals)), self.dim - 1):
            r = mx.nullspace_vector([normals[i] for i in idx]) if self.dim > 1 else [Fraction(1)]
            if r is None:
                continue
            for sign in (1, -1):
                ray = [sign * x for x in r]
                if all(mx.dot(n, ray) >= 0 for n in normals):
                    return self.is_empty()
        return True

    def is_empty(self) -> bool:
        if mx.rank(self.normals()) < self.dim:
            raise InvalidInput("emptiness test needs a pointed polyhedron")
        return not self.vertices()

    def bounding_box(self) -> tuple[list[int], list[int]]:
        vs = self.vertices()
        if not vs:
            return [0] * self.dim, [-1] * self.dim
        lo = [math.ceil(min(v[i] for v in vs)) for i in range(self.dim)]
        hi = [math.floor(max(v[i] for v in vs)) for i in range(self.dim)]
        return lo, hi

    def count_lattice_points(self) -> int:
        if not self.is_bounded():
            raise InvalidInput("cannot count points of an unbounded polyhedron")
        lo, hi = self.bounding_box()
        rhs = [math.ceil(o) for o in self.offsets()]
        return int(kernels.count_box_points(self.normals(), rhs, lo, hi))

    def lattice_points(self) -> list[tuple[int, ...]]:
        """Explicit enumeration (small polytopes only)."""
        from itertools import product

        lo, hi = self.bounding_box()
        return [u for u in product(*(range(l, h + 1) for l, h in zip(lo, hi))) if self.contains(u)]


def divisor_polytope(D: TorusInvariantDivisor, fan: Fan) -> LatticePolytope:
    """P_D = {u : <u, v> >= -coeff(v) for every ray v}."""
    D.check_support(fan)
    return LatticePolytope(tuple((tuple(fan.ray_coords(l)), -D.coeff(l)) for l in fan.rays))


def segment(lo: int, hi: int) -> LatticePolytope:
    return LatticePolytope((((1,), Fraction(lo)), ((-1,), Fraction(-hi))))


@dataclass(frozen=True)
class EhrhartPolynomial:
    """Coefficients from the top degree down."""

    coefficients: tuple[Fraction, ...]
    counts: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, k) -> Fraction:
        val = Fraction(0)
        for c in self.coefficients:
            val = val * k + c
        return val


def _interpolate(xs, ys) -> list[Fraction]:
    """Monomial coefficients (top degree first) of the interpolating polynomial, via a Vandermonde solve."""
    n = len(xs)
    vand = [[Fraction(x) ** (n - 1 - j) for j in range(n)] for x in xs]
    return mx.solve(vand, [Fraction(y) for y in ys])


def ehrhart(P: LatticePolytope, degree_hint: int | None = None) -> EhrhartPolynomial:
    """Interpolate counts of the dilates kP, k = 0..deg, then check k = deg+1 and deg+2."""
    deg = P.dim if degree_hint is None else degree_hint
    if not P.is_bounded():
        raise InvalidInput("Ehrhart polynomial needs a bounded polytope")
    counts = [P.dilate(k).count_lattice_points() if k else 1 for k in range(deg + 3)]
    if P.is_empty():
        counts[0] = 0
    coeffs = _interpolate(list(range(deg + 1)), counts[: deg + 1])
    poly = EhrhartPolynomial(tuple(coeffs), tuple(counts))
    for k in (deg + 1, deg + 2):
        if poly(k) != counts[k]:
            raise VerificationFailure(f"interpolation predicts {poly(k)} points at k={k}, counted {counts[k]}")
    return poly


# --- the Z1 data and the obstruction bound -----------------------------------


def moved_divisors(fan: Fan | None = None) -> tuple[TorusInvariantDivisor, TorusInvariantDivisor]:
    """K' ~ K and E6' ~ E6, both with support off E6."""
    fan = fan or kummer_resolution_fan()
    k_prime, _ = move_support(canonical_divisor(fan), fan, "v6")
    e6_prime, _ = move_support(divisor(v6=1), fan, "v6")
    return k_prime, e6_prime


def z_divisors(fan: Fan | None = None) -> tuple[TorusInvariantDivisor, TorusInvariantDivisor, Fan]:
    fan = fan or kummer_resolution_fan()
    k_prime, e6_prime = moved_divisors(fan)
    z1 = restrict_to_orbit_closure(k_prime, fan, "v6")
    z2 = restrict_to_orbit_closure(e6_prime, fan, "v6")
    return z1, z2, star_fan(fan, "v6")


def six_pz1() -> LatticePolytope:
    z1, _, star = z_divisors()
    return divisor_polytope(z1.scale(6), star)


def obstruction_gap_polynomial() -> EhrhartPolynomial:
    return ehrhart(six_pz1(), 3)


def obstruction_dim_bound(k: int, poly: EhrhartPolynomial | None = None) -> tuple[int, Fraction]:
    """(sum_{a=1}^{k/6} L(6P_Z1, a), (k^4 + 34k^3 + 430k^2 + 2400)/288)."""
    if not isinstance(k, int) or k <= 0 or k % 6:
        raise InvalidInput(f"k must be a positive multiple of 6, got {k!r}")
    poly = poly or obstruction_gap_polynomial()
    exact_sum = sum(poly(a) for a in range(1, k // 6 + 1))
    closed = Fraction(k**4 + 34 * k**3 + 430 * k**2 + 2400, 288)
    if exact_sum.denominator != 1:
        raise VerificationFailure("Ehrhart sum is not an integer")
    return int(exact_sum), closed


def obstruction_literal_sum(k: int, poly: EhrhartPolynomial | None = None) -> int:
    """sum_{a=1}^{k/6} L(6P_Z1, k): the summand evaluated at k rather than a."""
    if k <= 0 or k % 6:
        raise InvalidInput(f"k must be a positive multiple of 6, got {k!r}")
    poly = poly or obstruction_gap_polynomial()
    return int((k // 6) * poly(k))


# --- Reid-Tai ----------------------------------------------------------------


@dataclass(frozen=True)
class PowerAge:
    power: int
    exponents: tuple[int, ...]
    age: Fraction
    unit_eigenvalue: bool
    quasi_reflection: bool


def reid_tai_age(exponents, m: int) -> Fraction:
    ex = [int(x) for x in exponents]
    if m < 1 or any(not 0 <= x < m for x in ex):
        raise InvalidInput("exponents must lie in [0, m)")
    if not any(ex):
        raise InvalidInput("all-zero exponent vector")
    return Fraction(sum(ex), m)


def power_ages(exponents, m: int) -> list[PowerAge]:
    reid_tai_age(exponents, m)
    out = []
    for j in range(1, m):
        ex = tuple(j * x % m for x in exponents)
        if not any(ex):
            continue
        nonzero = sum(1 for x in ex if x)
        out.append(PowerAge(j, ex, Fraction(sum(ex), m), nonzero < len(ex), nonzero == 1))
    return out


def is_noncanonical(exponents, m: int) -> bool:
    """Some nontrivial power that is not a quasi-reflection has age < 1."""
    return any(p.age < 1 and not p.quasi_reflection for p in power_ages(exponents, m))
