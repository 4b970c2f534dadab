"""Indices of Gamma_0(n), Gamma_1(n) in SL2(Z) and order-3 elliptic point counts."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction

from . import kernels
from .arith import factorize, kronecker
from .errors import InvalidInput, VerificationFailure

EPSILON3_ORACLE_CAP = 10**6
COSET_ORACLE_CAP = 60


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise InvalidInput(f"level must be a positive integer, got {n!r}")


def index_gamma0(n: int) -> int:
    """n prod_{p | n} (1 + 1/p)."""
    _check_n(n)
    val = Fraction(n)
    for p in factorize(n).primes:
        val *= Fraction(p + 1, p)
    return int(val)


def index_gamma1(n: int) -> int:
    """n^2 prod_{p | n} (1 - 1/p^2)."""
    _check_n(n)
    val = Fraction(n * n)
    for p in factorize(n).primes:
        val *= Fraction(p * p - 1, p * p)
    return int(val)


def index_oracle(n: int, cap: int = COSET_ORACLE_CAP) -> tuple[int, int]:
    """Both indices as |SL2(Z/n)| over the sizes of the reductions of Gamma_0(n) and Gamma_1(n)."""
    _check_n(n)
    if n > cap:
        raise InvalidInput(f"coset enumeration capped at n = {cap}")
    total, g0, g1 = kernels.sl2_subgroup_counts(n)
    if total % g0 or total % g1:
        raise VerificationFailure(f"subgroup orders {g0}, {g1} do not divide {total}")
    return total // g0, total // g1


def epsilon3(e: int) -> int:
    """Number of order-3 elliptic points of Gamma_0(e)."""
    _check_n(e)
    if e % 9 == 0:
        return 0
    out = 1
    for p in factorize(e).primes:
        out *= 1 + kronecker(-3, p)
    return out


def epsilon3_oracle(e: int, cap: int = EPSILON3_ORACLE_CAP) -> int:
    """Residues x mod e with x^2 + x + 1 = 0."""
    _check_n(e)
    if e > cap:
        raise InvalidInput(f"root-count oracle capped at e = {cap}")
    return int(kernels.count_quadratic_roots(e))


def eta_bound(a: int, e: int) -> int:
    """|Gamma_0(e) : Gamma_1(ae)| eps3(e)."""
    _check_n(a)
    _check_n(e)
    big, small = index_gamma1(a * e), index_gamma0(e)
    if big % small:
        raise VerificationFailure(f"index of Gamma_0({e}) does not divide that of Gamma_1({a * e})")
    return big // small * epsilon3(e)


@dataclass(frozen=True)
class CongruenceIndexReport:
    n: int
    index_gamma0: int
    index_gamma1: int
    epsilon3: int

    def __post_init__(self):
        if self.index_gamma1 % self.index_gamma0:
            raise VerificationFailure("Gamma_0 index must divide Gamma_1 index")

    def to_dict(self) -> dict:
        return asdict(self)


def index_report(n: int) -> CongruenceIndexReport:
    return CongruenceIndexReport(n, index_gamma0(n), index_gamma1(n), epsilon3(n))
