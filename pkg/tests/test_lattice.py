import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kgt import exact as mx
from kgt import lattice as lat
from kgt.arith import nu
from kgt.errors import InvalidInput, VerificationFailure


def test_kummer_lattice_shape():
    G = lat.kummer_lattice(5)
    assert G.dim == 6
    assert G.det() == 60
    assert G.signature() == (2, 4)
    assert G.is_even()


def test_gram_json_roundtrip():
    G = lat.kummer_lattice(7)
    assert lat.GramMatrix.from_json(G.to_json()) == G


def test_gram_rejects_asymmetric():
    with pytest.raises(InvalidInput):
        lat.GramMatrix.of([[0, 1], [2, 0]])


@pytest.mark.parametrize("d", [0, -3, 2.5])
def test_kummer_rejects_bad_d(d):
    with pytest.raises(InvalidInput):
        lat.kummer_lattice(d)


def test_discriminant_group_rejects_singular():
    with pytest.raises(InvalidInput):
        lat.discriminant_group(lat.GramMatrix.of([[2, 2], [2, 2]]))


def test_discriminant_group_a2():
    grp = lat.discriminant_group(lat.GramMatrix.of([[2, -1], [-1, 2]]))
    assert grp.order == 3
    assert grp.generator_norms == (Fraction(2, 3),)


@settings(max_examples=40)
@given(st.integers(1, 3000))
def test_discriminant_group_order_and_decomposition(d):
    grp = lat.discriminant_group(lat.kummer_lattice(d))
    assert grp.order == 12 * d
    assert lat.decomposition_matches(d)


def test_generator_norms_closed_form():
    d = 12
    dec = lat.kummer_decomposition(d)
    a, b, dp = lat.split_2d(d)
    assert (a, b, dp) == (3, 1, 1)
    assert dec.generator_norms[0] == Fraction(-3, 2) % 2 or dec.generator_norms[0] == Fraction(-3, 2)


def test_invariant_factors():
    assert lat.invariant_factors([2, 4, 3, 3, 1]) == [6, 12]
    assert lat.invariant_factors([2, 2]) == [2, 2]


def test_congruence_one_count():
    assert [lat.congruence_1_count(a) for a in range(1, 6)] == [1, 2, 2, 2, 2]


def test_congruence_caps_small_range():
    for d in range(1, 400):
        a, _, _ = lat.split_2d(d)
        p0 = lat.count_congruence_solutions(d, 0, 2)
        assert p0 == 1 if a == 1 else (p0 == 2 if a == 2 else p0 <= 2)
        assert lat.count_congruence_solutions(d, 1, 2) <= 4
        assert lat.element_counts(d).order_3_with_norm <= 8


def test_congruence_rejects_bad_args():
    with pytest.raises(InvalidInput):
        lat.count_congruence_solutions(5, 2, 2)
    with pytest.raises(InvalidInput):
        lat.count_congruence_solutions(5, 0, 5)


def test_bounds_formula():
    assert lat.index_bound(6) == 2880 * 2 ** nu(12)
    assert lat.oq_bound(6) * 2 == lat.index_bound(6)


def test_oq_oracle_small():
    # d = 1: L = U + U + <-6> + <-2>, D(L) = C6 + C2
    assert lat.oqL_order_oracle(1) >= 1
    for d in range(1, 11):
        assert lat.oqL_order_oracle(d) <= lat.oq_bound(d)
    with pytest.raises(InvalidInput):
        lat.oqL_order_oracle(100)


def test_oq_oracle_matches_brute_force_d1():
    # D(L) = C6 + C2 with q(i, j) = -i^2/6 - j^2/2 mod 2; count isometries directly
    elems = [(i, j) for i in range(6) for j in range(2)]

    def q(x):
        return Fraction(-x[0] ** 2, 6) - Fraction(x[1] ** 2, 2)

    def b(x, y):
        return Fraction(-x[0] * y[0], 6) - Fraction(x[1] * y[1], 2)

    def mod2(v):
        return v - 2 * (v // 2)

    def mod1(v):
        return v - (v // 1)

    count = 0
    for x in elems:
        for y in elems:
            imgs = {((i * x[0] + j * y[0]) % 6, (i * x[1] + j * y[1]) % 2) for i in range(6) for j in range(2)}
            if len(imgs) != 12:
                continue
            if mod2(q(x) - q((1, 0))) or mod2(q(y) - q((0, 1))) or mod1(b(x, y)):
                continue
            count += 1
    assert lat.oqL_order_oracle(1) == count


# --- normal forms and g_Z ---------------------------------------------------


@given(st.integers(1, 4), st.integers(1, 4), st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50))
def test_reduce_D_block(a, e, d11, d12, d22):
    D = [[d11, d12], [d12, d22]]
    red, W = lat.reduce_D_block(D, a, e)
    assert lat.is_reduced_D(red, a, e)
    shift = lat._wa_term(W, lat.A_block(a, e))
    assert red == [[D[i][j] + shift[i][j] for j in range(2)] for i in range(2)]


def test_normal_form_count_matches_enumeration():
    for a in range(1, 4):
        for e in range(1, 4):
            n = sum(
                1
                for x in range(2 * a)
                for y in range(a)
                for z in range(2 * a * e)
                if lat.is_reduced_D([[x, y], [y, z]], a, e)
            )
            assert n == lat.normal_form_count(a, e)


def test_isotropic_normal_form_validation():
    B = ((-2, 1), (1, -2))
    lat.IsotropicNormalForm(2, 3, B, ((1, 1), (1, 5)))
    with pytest.raises(InvalidInput):
        lat.IsotropicNormalForm(2, 3, B, ((5, 0), (0, 0)))
    with pytest.raises(InvalidInput):
        lat.IsotropicNormalForm(2, 3, ((2, 0), (0, 2)), ((0, 0), (0, 0)))


@given(st.integers(1, 12), st.integers(0, 10**6))
def test_random_gamma1_membership(N, seed):
    Z = lat.random_gamma1(random.Random(seed), N)
    assert lat.in_gamma1(Z, N)
    assert mx.det(Z) == 1


def test_in_gamma1_conventions():
    assert lat.in_gamma1([[6, 5], [1, 1]], 5)
    assert not lat.in_gamma1([[6, 5], [1, 1]], 5, "upper")
    assert lat.in_gamma1([[6, 1], [5, 1]], 5, "upper")
    with pytest.raises(InvalidInput):
        lat.in_gamma1([[1, 0], [0, 1]], 5, "sideways")


def test_build_gZ_zero_D_always_exists():
    rng = random.Random(7)
    B = [[-2, 1], [1, -2]]
    for _ in range(50):
        a, e = rng.choice([(1, 1), (1, 5), (2, 3), (3, 4), (4, 1), (6, 2)])
        Z = lat.random_gamma1(rng, a * e)
        g = lat.build_gZ(Z, lat.A_block(a, e), [[0, 0], [0, 0]])
        Q = lat.gram_with_D(a, e, B, [[0, 0], [0, 0]])
        assert mx.is_integral(g)
        assert Q.preserved_by(g)
        assert lat.is_in_NE(g, Q)


def test_build_gZ_whenever_W_exists():
    rng = random.Random(11)
    B = [[-2, 1], [1, -2]]
    built = 0
    for _ in range(200):
        a, e = rng.choice([(1, 3), (1, 12), (2, 2), (3, 1), (2, 5)])
        D = [[rng.randrange(2 * a), 0], [0, rng.randrange(2 * a * e)]]
        D[0][1] = D[1][0] = rng.randrange(a)
        Z = lat.random_gamma1(rng, a * e)
        try:
            g = lat.build_gZ(Z, lat.A_block(a, e), D)
        except VerificationFailure:
            continue
        built += 1
        Q = lat.gram_with_D(a, e, B, D)
        assert Q.preserved_by(g)
        assert lat.is_in_NE(g, Q)
    assert built > 50


def test_build_gZ_rejects_non_member():
    with pytest.raises(InvalidInput):
        lat.build_gZ([[1, 1], [0, 1]], lat.A_block(1, 5), [[0, 0], [0, 0]])


def test_build_gZ_reports_missing_W():
    # D - tZDZ = diag(-1, 1) is not of the form tWA + tAW (odd diagonal)
    with pytest.raises(VerificationFailure):
        lat.build_gZ([[0, -1], [1, 0]], lat.A_block(1, 1), [[0, 0], [0, 1]])


def test_is_in_NE_rejects_shape():
    with pytest.raises(InvalidInput):
        lat.is_in_NE(mx.identity(4), lat.kummer_lattice(1))


def test_is_in_NE_negative():
    Q = lat.gram_with_D(1, 2, [[-2, 1], [1, -2]], [[0, 0], [0, 0]])
    g = mx.identity(6)
    assert lat.is_in_NE(g, Q)
    g[0][0] = 2
    assert not lat.is_in_NE(g, Q)
