"""Assembly of the four alpha bounds and the general-type certificate."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .arith import GrowthConstant, growth_constant, round_down, round_up, slack_bits
from .bqf import EULER_GAMMA, KAPPA_PRIME
from .errors import InvalidInput
from .lattice import kummer_lattice

# Apery's constant to 30 digits (OEIS A002117).
ZETA3 = 1.20205690315959428539973816151
# Rounded up so that dividing by it weakens the lower bound alpha0.
ZETA3_UP = math.nextafter(ZETA3, math.inf)

D_MIN = 48
D_MAX_SCAN = 10**12
PCOUNT_LEADING = Fraction(11520)
ALPHA3_LEADING = Fraction(40)
EHRHART_LEADING = Fraction(1, 288)

assert PCOUNT_LEADING * EHRHART_LEADING == ALPHA3_LEADING


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


@dataclass(frozen=True)
class CertificateParams:
    d: int
    epsilon: Fraction = Fraction(1, 4)
    gamma: Fraction = Fraction(1, 4)
    a: int = 3

    def __post_init__(self):
        if not isinstance(self.d, int) or isinstance(self.d, bool) or self.d < D_MIN:
            raise InvalidInput(f"d must be an integer >= {D_MIN}, got {self.d!r}")
        object.__setattr__(self, "epsilon", _frac(self.epsilon))
        object.__setattr__(self, "gamma", _frac(self.gamma))
        if self.epsilon <= 0 or self.gamma <= 0:
            raise InvalidInput("epsilon and gamma must be positive")
        if self.a not in (1, 2, 3):
            raise InvalidInput(f"a must be 1, 2 or 3, got {self.a!r}")


@lru_cache(maxsize=64)
def _constants(epsilon: Fraction, gamma: Fraction) -> tuple[GrowthConstant, GrowthConstant]:
    return growth_constant("nu", epsilon), growth_constant("sigma0", gamma)


def det_L(d: int) -> int:
    det = 12 * d
    if d <= 10**6:
        assert kummer_lattice(d).det() == det
    return det


def _check_d(d: int) -> None:
    if not isinstance(d, int) or d < D_MIN:
        raise InvalidInput(f"d must be an integer >= {D_MIN}, got {d!r}")


def alpha0_lower(d: int, bits: int | None = None) -> float:
    """(12d)^{5/2} / (497664 zeta(3) pi^3), rounded down."""
    _check_d(d)
    return round_down((12 * d) ** 2.5 / (497664 * ZETA3_UP * math.pi**3), bits)


def alpha1_upper(d: int, bits: int | None = None) -> float:
    _check_d(d)
    pi2 = math.pi**2
    return round_up(108199 / (360 * pi2) * d**2 + 3243945 / (64 * pi2) * d ** (1 / 6), bits)


def D_of_a(a: int) -> int:
    if a not in (1, 2, 3):
        raise InvalidInput(f"a must be 1, 2 or 3, got {a!r}")
    b = 4 - a
    return 2 * b**3 + 6 * b**2 + 8 * b + 4


def beta_K_bound(r: int, a: int = 3) -> Fraction:
    """Per-embedding constant 16 D(a) r^2 / 675 (to be divided by pi^2)."""
    return Fraction(16 * D_of_a(a) * r * r, 675)


def alpha2_upper(d: int, epsilon, gamma, a: int = 3, bits: int | None = None) -> float:
    """256 D(a)/(225 pi^2) K_nu^3 K_sigma0 / (3+eps) 3^eps 8^{3+eps} d^{3/2 + 3eps/2 + gamma}."""
    _check_d(d)
    eps, gam = _frac(epsilon), _frac(gamma)
    k_nu, k_s = _constants(eps, gam)
    e = float(eps)
    val = (
        256 * D_of_a(a) / (225 * math.pi**2)
        * k_nu.value**3 * k_s.value / (3 + e)
        * 3**e * 8 ** (3 + e)
        * d ** (1.5 + 1.5 * e + float(gam))
    )
    return round_up(val, bits)


def _point_count_core(d: int, epsilon, gamma) -> float:
    """Everything in the boundary point count except the leading constant over pi."""
    eps, gam = _frac(epsilon), _frac(gamma)
    k_nu, k_s = _constants(eps, gam)
    e, g = float(eps), float(gam)
    x = float(det_L(d))
    return (
        x**0.5
        * (math.log(4 * x) + KAPPA_PRIME)
        * math.exp(EULER_GAMMA)
        * math.log(math.log(4 * x))
        * k_nu.value ** (1 + e)
        * x ** (1.5 + e / 2)
        * (k_s.value**2 * x ** (2 * g) + 4 * k_s.value * x**g + 4)
    )


def pcount_upper(d: int, epsilon, gamma, bits: int | None = None) -> float:
    if not isinstance(d, int) or d < 1:
        raise InvalidInput("d must be a positive integer")
    return round_up(float(PCOUNT_LEADING) / math.pi * _point_count_core(d, epsilon, gamma), bits)


def alpha3_upper(d: int, epsilon, gamma, bits: int | None = None) -> float:
    if not isinstance(d, int) or d < 1:
        raise InvalidInput("d must be a positive integer")
    return round_up(float(ALPHA3_LEADING) / math.pi * _point_count_core(d, epsilon, gamma), bits)


# --- independent log-domain evaluation ---------------------------------------


def log_alphas(d: int, epsilon, gamma, a: int = 3) -> dict[str, float]:
    """Natural logs of alpha0..alpha3 assembled term by term in log space (unrounded)."""
    eps, gam = _frac(epsilon), _frac(gamma)
    k_nu, k_s = _constants(eps, gam)
    e, g = float(eps), float(gam)
    lx = math.log(12) + math.log(d)
    lpi = math.log(math.pi)
    la0 = 2.5 * lx - math.log(497664) - math.log(ZETA3) - 3 * lpi
    t1 = math.log(108199 / 360) - 2 * lpi + 2 * math.log(d)
    t2 = math.log(3243945 / 64) - 2 * lpi + math.log(d) / 6
    la1 = max(t1, t2) + math.log1p(math.exp(-abs(t1 - t2)))
    la2 = (
        math.log(256 * D_of_a(a) / 225) - 2 * lpi + 3 * math.log(k_nu.value) + math.log(k_s.value)
        - math.log(3 + e) + e * math.log(3) + (3 + e) * math.log(8) + (1.5 + 1.5 * e + g) * math.log(d)
    )
    # K^2 x^{2g} + 4 K x^g + 4 = (K x^g + 2)^2
    inner = math.log(k_s.value) + g * lx
    la3 = (
        math.log(40) - lpi + 0.5 * lx + math.log(math.log(4) + lx + KAPPA_PRIME) + EULER_GAMMA
        + math.log(math.log(math.log(4) + lx)) + (1 + e) * math.log(k_nu.value) + (1.5 + e / 2) * lx
        + 2 * (max(inner, math.log(2)) + math.log1p(math.exp(-abs(inner - math.log(2)))))
    )
    return {"a0": la0, "a1": la1, "a2": la2, "a3": la3}


# --- certificate -------------------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    d: int
    epsilon: Fraction
    gamma: Fraction
    a: int
    alpha0_lower: float
    alpha1_upper: float
    alpha2_upper: float
    alpha3_upper: float
    K_nu: float
    K_sigma0: float
    kappa_prime: float
    margin: float
    verdict: bool
    slack_bits: int
    rounding: dict = field(
        default_factory=lambda: {"a0": "down", "a1": "up", "a2": "up", "a3": "up", "margin": "down"}
    )

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "epsilon": float(self.epsilon),
            "gamma": float(self.gamma),
            "alpha": {
                "a0": self.alpha0_lower,
                "a1": self.alpha1_upper,
                "a2": self.alpha2_upper,
                "a3": self.alpha3_upper,
            },
            "constants": {"K_nu": self.K_nu, "K_sigma0": self.K_sigma0, "kappa_prime": self.kappa_prime},
            "margin": self.margin,
            "verdict": self.verdict,
        }


def certify(params: CertificateParams, bits: int | None = None) -> BoundReport:
    b = slack_bits() if bits is None else bits
    k_nu, k_s = _constants(params.epsilon, params.gamma)
    a0 = alpha0_lower(params.d, b)
    a1 = alpha1_upper(params.d, b)
    a2 = alpha2_upper(params.d, params.epsilon, params.gamma, params.a, b)
    a3 = alpha3_upper(params.d, params.epsilon, params.gamma, b)
    total = round_up(a1 + a2 + a3, b)
    diff = a0 - total
    margin = round_down(diff, b) if diff != 0 else -0.0
    return BoundReport(
        params.d, params.epsilon, params.gamma, params.a, a0, a1, a2, a3,
        k_nu.value, k_s.value, KAPPA_PRIME, margin, margin > 0, b,
    )


@dataclass(frozen=True)
class Exponents:
    alpha0: Fraction
    alpha1: Fraction
    alpha2: Fraction
    alpha3: Fraction

    def eventually_certifies(self) -> bool:
        return self.alpha0 > max(self.alpha1, self.alpha2, self.alpha3)


def asymptotic_exponents(epsilon, gamma) -> Exponents:
    """Power of d governing each bound (log factors ignored; they only matter at equal powers)."""
    e, g = _frac(epsilon), _frac(gamma)
    return Exponents(
        Fraction(5, 2),
        Fraction(2),
        Fraction(3, 2) + Fraction(3, 2) * e + g,
        Fraction(1, 2) + Fraction(3, 2) + e / 2 + 2 * g,
    )


@dataclass(frozen=True)
class ThresholdResult:
    epsilon: Fraction
    gamma: Fraction
    d_max: int
    threshold: int | None
    evaluations: int
    sampled: tuple[int, ...]
    flips: tuple[int, ...]
    exponents: Exponents

    def to_dict(self) -> dict:
        return {
            "epsilon": float(self.epsilon),
            "gamma": float(self.gamma),
            "dmax": self.d_max,
            "threshold": self.threshold,
            "evaluations": self.evaluations,
            "samples_checked": len(self.sampled),
            "flips": list(self.flips),
            "exponents": {k: str(getattr(self.exponents, k)) for k in ("alpha0", "alpha1", "alpha2", "alpha3")},
            "eventually_certifies": self.exponents.eventually_certifies(),
        }


def threshold_scan(epsilon, gamma, d_max: int = D_MAX_SCAN, seed: int = 0, samples: int = 100) -> ThresholdResult:
    """Least d in [48, d_max] with a positive certified margin, by doubling then bisection.

    After locating d0, ``samples`` log-uniform seeded points in (d0, d_max]
    are re-certified; any false verdict among them is reported as a flip.
    """
    if not isinstance(d_max, int) or d_max < D_MIN or d_max > D_MAX_SCAN:
        raise InvalidInput(f"d_max must lie in [{D_MIN}, {D_MAX_SCAN}]")
    eps, gam = _frac(epsilon), _frac(gamma)
    _constants(eps, gam)
    evals = 0

    def ok(d: int) -> bool:
        nonlocal evals
        evals += 1
        return certify(CertificateParams(d, eps, gam)).verdict

    lo, hi = D_MIN - 1, D_MIN  # invariant: verdict(lo) false or lo < 48; verdict(hi) unknown
    found = None
    while hi <= d_max:
        if ok(hi):
            found = hi
            break
        lo, hi = hi, hi * 2
    if found is None and lo < d_max:
        if ok(d_max):
            found = hi = d_max
    ex = asymptotic_exponents(eps, gam)
    if found is None:
        return ThresholdResult(eps, gam, d_max, None, evals, (), (), ex)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    d0 = hi
    rng = random.Random(seed)
    pts = []
    if d0 < d_max:
        lo_log, hi_log = math.log(d0 + 1), math.log(d_max)
        pts = sorted({min(d_max, max(d0 + 1, int(math.exp(rng.uniform(lo_log, hi_log))))) for _ in range(samples)})
    flips = tuple(d for d in pts if not ok(d))
    return ThresholdResult(eps, gam, d_max, d0, evals, tuple(pts), flips, ex)
