import math

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from kgt import bqf
from kgt.errors import InvalidInput

# h(D) for small fundamental discriminants (standard tables)
KNOWN = {-3: 1, -4: 1, -7: 1, -8: 1, -15: 2, -20: 2, -23: 3, -47: 5, -71: 7, -163: 1, -164: 8, -399: 16}


@pytest.mark.parametrize("D,h", sorted(KNOWN.items()))
def test_known_class_numbers(D, h):
    assert bqf.class_number_exact(D) == h


@given(st.integers(3, 3000).map(lambda n: -n).filter(lambda D: D % 4 in (0, 1)))
def test_kernel_matches_reference_enumeration(D):
    assert bqf.class_number_exact(D) == len(bqf.reduced_forms(D))
    assert bqf.class_number_exact(D, primitive=False) == len(bqf.reduced_forms(D, primitive=False))


def test_reduced_forms_are_reduced_and_primitive():
    for f in bqf.reduced_forms(-420):
        assert f.is_reduced() and f.is_primitive() and f.is_positive_definite()
        assert f.discriminant == -420


def test_gram_is_even():
    f = bqf.BinaryQuadraticForm(2, 1, 3)
    g = f.gram()
    assert g[0][0] % 2 == 0 and g[1][1] % 2 == 0
    assert g[0][0] * g[1][1] - g[0][1] ** 2 == -f.discriminant


@given(st.integers(3, 10**5).map(lambda n: -n).filter(lambda D: D % 4 in (0, 1)))
def test_decomposition(D):
    dec = bqf.decompose_character(D)
    assert dec.fundamental_discriminant * dec.f**2 == D
    assert bqf.is_fundamental(dec.fundamental_discriminant)
    assert dec.conductor == abs(dec.fundamental_discriminant)
    for n in range(1, 30):
        if math.gcd(n, dec.f) == 1:
            assert dec.chi(n) == dec.psi(n)


def test_is_fundamental_against_sympy():
    for n in range(3, 2000):
        D = -n
        if D % 4 not in (0, 1):
            continue
        sq_free = sympy.factorint(n)
        if D % 4 == 1:
            want = all(k == 1 for k in sq_free.values())
        else:
            m = D // 4
            want = m % 4 in (2, 3) and all(k == 1 for k in sympy.factorint(-m).values())
        assert bqf.is_fundamental(D) == want, D


def test_kappa():
    assert bqf.KAPPA_PRIME == pytest.approx(2 + 0.5772156649 - math.log(math.pi))
    assert bqf.kappa("even") < bqf.kappa("odd")
    with pytest.raises(InvalidInput):
        bqf.kappa("neither")


def test_bound_rejects_small_beta():
    with pytest.raises(InvalidInput):
        bqf.count_B_classes_bound(1)


@given(st.integers(2, 3000))
def test_bound_dominates_class_number(beta):
    assert bqf.class_number_exact(-4 * beta) <= bqf.count_B_classes_bound(beta)


@pytest.mark.parametrize("D", [-7, -23, -47, -71, -163, -164, -399, -1155])
def test_analytic_oracle(D):
    assert abs(bqf.class_number_analytic(D) - bqf.class_number_exact(D)) < 0.5


def test_bad_discriminants():
    for D in (0, 5, -2, -5, 3.0):
        with pytest.raises(InvalidInput):
            bqf.class_number_exact(D)
