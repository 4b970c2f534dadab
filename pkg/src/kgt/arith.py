"""Number-theoretic primitives and certified growth constants."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Literal

from . import kernels
from .errors import InvalidInput

# Deterministic Miller-Rabin witnesses; valid for n < 3.3e24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_LIMIT = 3_317_044_064_679_887_385_961_981

NICOLAS_ROBIN = 1.538
DEFAULT_SLACK_BITS = 40

EPSILON_FLOOR = {"nu": Fraction(1, 10), "sigma0": Fraction(1, 4)}
SIGMA0_SCAN_LIMIT = 10**6


# --- directed rounding -------------------------------------------------------


def slack_bits() -> int:
    """Relative rounding slack exponent, overridable by ``KGT_SLACK_BITS``."""
    raw = os.environ.get("KGT_SLACK_BITS")
    if raw is None or raw == "":
        return DEFAULT_SLACK_BITS
    try:
        bits = int(raw)
    except ValueError:
        raise InvalidInput(f"KGT_SLACK_BITS must be an integer, got {raw!r}") from None
    if not 8 <= bits <= 52:
        raise InvalidInput(f"KGT_SLACK_BITS must lie in [8, 52], got {bits}")
    return bits


def round_up(x: float, bits: int | None = None) -> float:
    """Move ``x`` upward by a relative slack of 2**-bits (at least one ulp)."""
    b = slack_bits() if bits is None else bits
    return math.nextafter(x + abs(x) * 2.0**-b, math.inf)


def round_down(x: float, bits: int | None = None) -> float:
    b = slack_bits() if bits is None else bits
    return math.nextafter(x - abs(x) * 2.0**-b, -math.inf)


# --- primes and factorization -----------------------------------------------


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    if n >= _MR_LIMIT:
        raise InvalidInput(f"{n} exceeds the deterministic primality range")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
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


def _pollard_brent(n: int) -> int:
    if n % 2 == 0:
        return 2
    c = 1
    while True:
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += 128
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
        c += 1


def _split(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    f = _pollard_brent(n)
    _split(f, out)
    _split(n // f, out)


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for p, k in self.factors:
            if p <= last or k < 1:
                raise InvalidInput(f"malformed factor list {self.factors}")
            last = p
            prod *= p**k
        if prod != self.n:
            raise InvalidInput(f"factors multiply to {prod}, not {self.n}")

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def value(self) -> int:
        return math.prod(p**k for p, k in self.factors)


@lru_cache(maxsize=65536)
def factorize(n: int) -> Factorization:
    if n < 1:
        raise InvalidInput(f"factorize needs n >= 1, got {n}")
    found: dict[int, int] = {}
    m = n
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        while m % p == 0:
            found[p] = found.get(p, 0) + 1
            m //= p
    p = 41
    while m > 1 and p * p <= m and p < 1000:
        while m % p == 0:
            found[p] = found.get(p, 0) + 1
            m //= p
        p += 2
    _split(m, found)
    return Factorization(n, tuple(sorted(found.items())))


def nu(n: int) -> int:
    """Number of distinct prime divisors."""
    return len(factorize(n).factors)


def sigma0(n: int) -> int:
    """Number of positive divisors."""
    return math.prod(k + 1 for _, k in factorize(n).factors)


def divisors(n: int) -> list[int]:
    out = [1]
    for p, k in factorize(n).factors:
        out = [d * p**i for d in out for i in range(k + 1)]
    return sorted(out)


def primes_up_to(limit: int) -> list[int]:
    if limit < 2:
        return []
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, limit + 1, p)))
    return [i for i, flag in enumerate(sieve) if flag]


# --- Kronecker symbol --------------------------------------------------------


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), extended to all integers n."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # now n odd and positive: Jacobi symbol
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


# --- growth constants --------------------------------------------------------


@dataclass(frozen=True)
class GrowthConstant:
    """Certified K with 2^nu(n) <= K n^eps (kind 'nu') or sigma0(n) <= K n^eps ('sigma0')."""

    epsilon: Fraction
    value: float
    kind: Literal["nu", "sigma0"]
    witness: int | None = None
    envelope_from: int | None = None

    def dominates(self, n: int) -> bool:
        lhs = 2 ** nu(n) if self.kind == "nu" else sigma0(n)
        return lhs <= self.value * n ** float(self.epsilon)


def _as_fraction(eps) -> Fraction:
    if isinstance(eps, Fraction):
        return eps
    if isinstance(eps, float):
        return Fraction(str(eps))
    return Fraction(eps)


def _nu_constant(eps: Fraction) -> tuple[float, int]:
    e = float(eps)
    best_log, best_n = 0.0, 1
    log_val = 0.0
    primorial = 1
    k = 0
    for p in primes_up_to(math.ceil(2.0 ** (1 / e)) + 1):
        if p**e > 2:
            break
        k += 1
        primorial *= p
        log_val += math.log(2) - e * math.log(p)
        if log_val > best_log:
            best_log, best_n = log_val, primorial
    return math.exp(best_log), best_n


def _nr_envelope_log(t: float, eps: float) -> float:
    """log of exp(c log d / log log d - eps log d) at t = log d."""
    c = NICOLAS_ROBIN * math.log(2)
    return c * t / math.log(t) - eps * t


def sigma0_envelope_sup(eps: float, start: float) -> float:
    """sup over real d >= start (> e^e) of the Nicolas-Robin envelope, as a log value.

    Writing s = log log d, the envelope's derivative in log d vanishes where
    eps*s^2 - c*s + c = 0; the larger root is the only interior maximum.
    """
    c = NICOLAS_ROBIN * math.log(2)
    t0 = math.log(start)
    if t0 <= math.e:
        raise InvalidInput("envelope start must exceed e^e")
    best = _nr_envelope_log(t0, eps)
    disc = c * c - 4 * eps * c
    if disc >= 0:
        s_max = (c + math.sqrt(disc)) / (2 * eps)
        t_max = math.exp(s_max)
        if t_max > t0:
            best = max(best, _nr_envelope_log(t_max, eps))
    return best


def _sigma0_constant(eps: Fraction, scan_limit: int) -> tuple[float, int]:
    import numpy as np

    e = float(eps)
    sig = kernels.divisor_count_sieve(scan_limit).astype(np.float64)
    n = np.arange(scan_limit + 1, dtype=np.float64)
    ratio = np.zeros_like(sig)
    ratio[1:] = sig[1:] / n[1:] ** e
    witness = int(np.argmax(ratio))
    scanned = float(ratio[witness])
    tail = math.exp(sigma0_envelope_sup(e, scan_limit))
    return max(scanned, tail), witness


def growth_constant(
    kind: Literal["nu", "sigma0"],
    epsilon,
    *,
    scan_limit: int = SIGMA0_SCAN_LIMIT,
    floor=None,
) -> GrowthConstant:
    """Upper-rounded constant K with 2^nu(n) <= K n^eps or sigma0(n) <= K n^eps for all n >= 1.

    kind 'nu' scans primorials (the extremal integers for 2^nu(n)/n^eps) and
    stops at the first prime p with p^eps > 2. kind 'sigma0' takes the exact
    maximum of sigma0(n)/n^eps over n <= scan_limit and bounds the range
    above scan_limit by the supremum of the Nicolas-Robin envelope.
    """
    eps = _as_fraction(epsilon)
    if eps <= 0:
        raise InvalidInput(f"epsilon must be positive, got {eps}")
    if kind not in EPSILON_FLOOR:
        raise InvalidInput(f"unknown growth-constant kind {kind!r}")
    lowest = EPSILON_FLOOR[kind] if floor is None else _as_fraction(floor)
    if eps < lowest:
        raise InvalidInput(f"epsilon {eps} below the {kind} feasibility floor {lowest}")
    if kind == "nu":
        value, witness = _nu_constant(eps)
        return GrowthConstant(eps, round_up(max(value, 1.0)), "nu", witness)
    if scan_limit > 10**8:
        raise InvalidInput("sigma0 scan limit above 1e8; use the envelope alone")
    value, witness = _sigma0_constant(eps, scan_limit)
    return GrowthConstant(eps, round_up(max(value, 1.0)), "sigma0", witness, scan_limit)


def nicolas_robin_ratio(limit: int):
    """log(sigma0(d)) log log d / (log 2 log d) for 3 <= d <= limit (numpy array, index d-3)."""
    import numpy as np

    sig = kernels.divisor_count_sieve(limit)[3:].astype(np.float64)
    d = np.arange(3, limit + 1, dtype=np.float64)
    logd = np.log(d)
    return np.log(sig) * np.log(logd) / (math.log(2) * logd)
