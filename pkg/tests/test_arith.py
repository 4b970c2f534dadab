import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from kgt import arith
from kgt.errors import InvalidInput


@given(st.integers(1, 10**12))
def test_factorize_matches_sympy(n):
    assert dict(arith.factorize(n).factors) == sympy.factorint(n)


@given(st.integers(-10**6, 10**6))
def test_is_prime(n):
    assert arith.is_prime(n) == bool(sympy.isprime(n))


def test_large_prime():
    assert arith.is_prime(2**61 - 1)
    assert not arith.is_prime((2**31 - 1) * (2**43 - 1))
    with pytest.raises(InvalidInput):
        arith.is_prime((2**31 - 1) * (2**61 - 1))


@given(st.integers(1, 10**6))
def test_nu_sigma0(n):
    f = sympy.factorint(n)
    assert arith.nu(n) == len(f)
    assert arith.sigma0(n) == sympy.divisor_count(n)
    assert arith.divisors(n) == sympy.divisors(n)


@given(st.integers(-500, 500), st.integers(1, 2000))
def test_kronecker_jacobi(a, n):
    if n % 2:
        assert arith.kronecker(a, n) == sympy.jacobi_symbol(a, n)


def test_kronecker_at_two():
    # (a/2) = 0 for even a, +1 for a = +-1 mod 8, -1 for a = +-3 mod 8
    for a, want in ((-4, 0), (1, 1), (7, 1), (-3, -1), (5, -1), (-7, 1)):
        assert arith.kronecker(a, 2) == want


def test_primes_up_to():
    assert arith.primes_up_to(100) == list(sympy.primerange(2, 101))


def test_rounding_direction():
    for x in (1.0, -3.5, 1e300, 7e-300):
        assert arith.round_up(x) > x
        assert arith.round_down(x) < x
    assert arith.round_up(1.0, 20) - 1.0 >= 2.0**-20


def test_slack_env(monkeypatch):
    monkeypatch.setenv("KGT_SLACK_BITS", "30")
    assert arith.slack_bits() == 30
    monkeypatch.setenv("KGT_SLACK_BITS", "x")
    with pytest.raises(InvalidInput):
        arith.slack_bits()
    monkeypatch.setenv("KGT_SLACK_BITS", "2")
    with pytest.raises(InvalidInput):
        arith.slack_bits()
    monkeypatch.delenv("KGT_SLACK_BITS")
    assert arith.slack_bits() == arith.DEFAULT_SLACK_BITS


@pytest.mark.parametrize("eps", [Fraction(1, 4), Fraction(1, 2), Fraction(1)])
def test_nu_constant_dominates_primorials(eps):
    K = arith.growth_constant("nu", eps)
    primorial = 1
    for p in arith.primes_up_to(200):
        primorial *= p
        assert 2 ** arith.nu(primorial) <= K.value * primorial ** float(eps) * (1 + 1e-12)


def test_growth_constant_floor():
    with pytest.raises(InvalidInput):
        arith.growth_constant("sigma0", Fraction(1, 8))
    with pytest.raises(InvalidInput):
        arith.growth_constant("nu", 0)
    with pytest.raises(InvalidInput):
        arith.growth_constant("tau", Fraction(1, 2))


def test_sigma0_constant_witness():
    K = arith.growth_constant("sigma0", Fraction(1, 4), scan_limit=10**5)
    w = K.witness
    assert K.value >= arith.sigma0(w) / w**0.25
    assert K.dominates(w)


def test_nicolas_robin_range():
    r = arith.nicolas_robin_ratio(10**5)
    assert r.max() <= arith.NICOLAS_ROBIN


def test_envelope_needs_large_start():
    with pytest.raises(InvalidInput):
        arith.sigma0_envelope_sup(0.25, 10.0)
    assert math.isfinite(arith.sigma0_envelope_sup(0.25, 1e6))
