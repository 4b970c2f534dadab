"""Binary quadratic forms, class numbers and the analytic bound on B-block classes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import kernels
from .arith import factorize, kronecker, round_up
from .errors import InvalidInput

EULER_GAMMA = 0.57721566490153286060651209008240243


@dataclass(frozen=True)
class BinaryQuadraticForm:
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_positive_definite(self) -> bool:
        return self.discriminant < 0 and self.a > 0

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        return b >= 0 if (abs(b) == a or a == c) else True

    def is_primitive(self) -> bool:
        return math.gcd(math.gcd(self.a, self.b), self.c) == 1

    def negated(self) -> "BinaryQuadraticForm":
        return BinaryQuadraticForm(-self.a, -self.b, -self.c)

    def gram(self) -> list[list[int]]:
        """Gram matrix of the even lattice with norm 2(ax^2 + bxy + cy^2); needs nothing beyond integers."""
        return [[2 * self.a, self.b], [self.b, 2 * self.c]]


def _check_disc(D: int) -> None:
    if not isinstance(D, int) or D >= 0 or D % 4 not in (0, 1):
        raise InvalidInput(f"discriminant must be a negative integer = 0 or 1 mod 4, got {D!r}")


def reduced_forms(D: int, primitive: bool = True) -> list[BinaryQuadraticForm]:
    """All reduced positive-definite forms of discriminant D (slow reference enumeration)."""
    _check_disc(D)
    out = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            num = b * b - D
            if num % (4 * a):
                continue
            f = BinaryQuadraticForm(a, b, num // (4 * a))
            if f.is_reduced() and (f.is_primitive() or not primitive):
                out.append(f)
        a += 1
    return out


def class_number_exact(D: int, primitive: bool = True) -> int:
    """h(D) by counting reduced forms with a <= sqrt(|D|/3)."""
    _check_disc(D)
    return int(kernels.count_reduced_forms(D, primitive))


# --- characters --------------------------------------------------------------


@dataclass(frozen=True)
class CharacterDecomposition:
    modulus: int
    fundamental_discriminant: int
    conductor: int
    parity: Literal["even", "odd"]
    f: int

    def psi(self, n: int) -> int:
        """The primitive character inducing chi_D."""
        return kronecker(self.fundamental_discriminant, n)

    def chi(self, n: int) -> int:
        return kronecker(self.modulus_discriminant, n)

    @property
    def modulus_discriminant(self) -> int:
        return self.fundamental_discriminant * self.f * self.f


def decompose_character(D: int) -> CharacterDecomposition:
    """Write D = D0 f^2 with D0 fundamental; the conductor of chi_D is |D0|."""
    _check_disc(D)
    sq = 1
    core = 1
    for p, k in factorize(-D).factors:
        sq *= p ** (k // 2)
        core *= p ** (k % 2)
    d0 = -core  # squarefree part with sign
    f = sq
    if d0 % 4 != 1:
        # need the factor 4 back in the fundamental discriminant
        if f % 2:
            raise InvalidInput(f"{D} has no fundamental-discriminant factorization")
        d0 *= 4
        f //= 2
    assert d0 * f * f == D
    return CharacterDecomposition(abs(D), d0, abs(d0), "odd", f)


def kappa(parity: str) -> float:
    if parity == "even":
        return 2 + EULER_GAMMA - math.log(4 * math.pi)
    if parity == "odd":
        return 2 + EULER_GAMMA - math.log(math.pi)
    raise InvalidInput(f"parity must be 'even' or 'odd', got {parity!r}")


KAPPA_PRIME = kappa("odd")


def euler_factor_product(beta: int, dec: CharacterDecomposition) -> float:
    prod = 1.0
    for p in factorize(4 * beta).primes:
        prod *= 1 - dec.psi(p) / p
    return prod


def count_B_classes_bound(beta: int) -> float:
    """(sqrt(beta)/pi) (log 4beta + kappa) prod_{p | 4beta} (1 - psi(p)/p), rounded up."""
    if not isinstance(beta, int) or beta <= 1:
        raise InvalidInput(f"beta must be an integer > 1, got {beta!r}")
    dec = decompose_character(-4 * beta)
    val = math.sqrt(beta) / math.pi * (math.log(4 * beta) + kappa(dec.parity)) * euler_factor_product(beta, dec)
    return round_up(val)


# --- analytic oracle ---------------------------------------------------------


def is_fundamental(D: int) -> bool:
    try:
        return decompose_character(D).f == 1
    except InvalidInput:
        return False


def l_series_truncation(D: int, tol: float = 0.4) -> int:
    """Terms N so that sqrt|D|/pi times the tail of sum chi(n)/n stays below ``tol``.

    Partial sums of a nonprincipal character over any interval are at most
    |D|/2 in size, so summation by parts bounds the tail after N by |D|/(N+1).
    """
    m = abs(D)
    return math.ceil(math.sqrt(m) * m / (math.pi * tol))


def class_number_analytic(D: int, tol: float = 0.4) -> float:
    """sqrt|D|/pi L(1, chi_D) from a truncated character sum (D < -4 fundamental)."""
    _check_disc(D)
    if D >= -4:
        raise InvalidInput("analytic formula holds for D < -4")
    m = abs(D)
    n_terms = l_series_truncation(D, tol)
    period = np.array([kronecker(D, n) for n in range(m)], dtype=np.float64)
    n = np.arange(1, n_terms + 1)
    terms = period[n % m] / n
    return math.sqrt(m) / math.pi * float(np.sum(terms))
