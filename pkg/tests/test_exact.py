from fractions import Fraction

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from kgt import exact as mx

small = st.integers(-20, 20)


def square(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)


@given(st.integers(1, 5).flatmap(square))
def test_det_matches_sympy(a):
    assert mx.det(a) == sympy.Matrix(a).det()


@given(st.integers(1, 4).flatmap(square))
def test_inverse_roundtrip(a):
    if mx.det(a) == 0:
        assert mx.solve(a, [1] * len(a)) is None or mx.rank(a) < len(a)
        return
    inv = mx.inverse(a)
    assert mx.matmul(a, inv) == mx.identity(len(a))


@settings(max_examples=60)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(square(n), st.integers(1, 4))))
def test_smith_normal_form(data):
    a, _ = data
    diag, U, V = mx.smith_normal_form(a)
    S = mx.matmul(mx.matmul(U, a), V)
    n = len(a)
    for i in range(n):
        for j in range(n):
            assert S[i][j] == (diag[i] if i == j else 0)
    assert abs(mx.det(U)) == 1 and abs(mx.det(V)) == 1
    nz = [x for x in diag if x]
    assert all(x > 0 for x in nz)
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))
    assert len(nz) == sympy.Matrix(a).rank()


def test_smith_known():
    diag, _, _ = mx.smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert diag == [2, 6, 12]


def test_nullspace_vector():
    v = mx.nullspace_vector([[1, 2, 3], [0, 1, 1]])
    assert v is not None
    assert mx.matvec([[1, 2, 3], [0, 1, 1]], v) == [0, 0]


def test_integrality_helpers():
    assert mx.is_integral([[Fraction(4, 2), 1]])
    assert not mx.is_integral([[Fraction(1, 2)]])
    assert mx.to_int([[Fraction(6, 3)]]) == [[2]]
