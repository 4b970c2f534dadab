from fractions import Fraction

import pytest

from kgt import toric
from kgt.errors import InvalidInput

F = Fraction


@pytest.fixture(scope="module")
def fan():
    return toric.kummer_resolution_fan()


def test_rays(fan):
    assert sorted(fan.rays) == ["v1", "v2", "v3", "v4", "v5", "v6"]
    assert fan.rays["v5"] == (F(1, 2), F(1, 2), F(1, 2), 0)
    assert fan.rays["v6"] == (F(1, 6), F(1, 6), F(1, 6), F(1, 3))


def test_overlattice_index(fan):
    assert fan.lattice.index() == 6
    assert fan.lattice.contains(toric.V5) and fan.lattice.contains(toric.V6)
    assert not fan.lattice.contains((F(1, 2), 0, 0, 0))


def test_smoothness(fan):
    assert all(toric.verify_smooth(fan).values())
    sigma = toric.unresolved_cone()
    assert toric.cone_determinant(sigma, fan.lattice) == 6


def test_cones_cover_sigma(fan):
    checked, failures = toric.covering_check(fan, toric.unresolved_cone(), grid=5)
    assert checked > 0 and failures == 0


def test_star_fan(fan):
    star = toric.star_fan(fan, "v6")
    assert {k: list(map(int, v)) for k, v in star.rays.items()} == {
        "v1": [-1, -1, -2], "v2": [1, 0, 0], "v3": [0, 1, 0], "v4": [0, 0, 1], "v5": [0, 0, -1],
    }
    assert all(toric.verify_smooth(star).values())


def test_canonical_and_moved(fan):
    K = toric.canonical_divisor(fan)
    assert all(K.coeff(l) == -1 for l in fan.rays)
    k_prime, e6_prime = toric.moved_divisors(fan)
    assert k_prime.coeff("v6") == 0 and e6_prime.coeff("v6") == 0
    assert toric.linear_equivalence_witness(K, k_prime, fan) is not None
    assert toric.linear_equivalence_witness(toric.divisor(v6=1), e6_prime, fan) is not None


def test_not_linearly_equivalent(fan):
    assert toric.linear_equivalence_witness(toric.divisor(v1=1), toric.divisor(), fan) is None


def test_principal_has_trivial_cartier_data(fan):
    P = toric.principal_divisor(fan, [1, -2, 0, 3])
    data = toric.cartier_data(P, fan)
    first = next(iter(data.values()))
    assert all(m == first for m in data.values())


def test_z_divisors(fan):
    z1, z2, _ = toric.z_divisors(fan)
    assert z1.coefficients == {"v1": 5, "v2": -1, "v3": -1, "v4": -1, "v5": 2}
    assert z2.coefficients == {"v1": -6, "v5": -3}


def test_divisor_arithmetic():
    a = toric.divisor(v1=1, v2=F(1, 2))
    b = toric.divisor(v2=F(1, 2), v3=2)
    assert (a + b).coefficients == {"v1": 1, "v2": 1, "v3": 2}
    assert (a - a).coefficients == {}
    assert a.scale(2).coeff("v2") == 1


def test_support_check(fan):
    with pytest.raises(InvalidInput):
        toric.divisor_polytope(toric.divisor(v9=1), fan)


def test_form_bundle(fan):
    L = toric.form_bundle_divisor(6, fan)
    diff = L - toric.canonical_divisor(fan).scale(6)
    assert diff.coefficients == {"v6": 1, "v5": -3}
    assert toric.ray_weight(fan, "v5") == F(3, 2)
    assert toric.ray_weight(fan, "v6") == F(5, 6)


def test_ehrhart_polynomial():
    poly = toric.obstruction_gap_polynomial()
    assert poly.coefficients == (18, F(45, 2), F(17, 2), 1)
    assert poly.counts == (1, 50, 252, 715, 1547, 2856)


def test_ehrhart_segment_and_cube():
    assert toric.ehrhart(toric.segment(0, 1), 1).coefficients == (1, 1)
    cube = toric.LatticePolytope(tuple(
        (tuple(s * int(i == j) for j in range(3)), F(-1 if s < 0 else 0)) for i in range(3) for s in (1, -1)
    ))
    assert toric.ehrhart(cube).coefficients == (1, 3, 3, 1)


def test_empty_and_zero_polytopes():
    _, z2, star = toric.z_divisors()
    assert toric.divisor_polytope(z2, star).is_empty()
    zero = toric.divisor_polytope(toric.TorusInvariantDivisor(), star)
    assert zero.lattice_points() == [(0, 0, 0)]


def test_unbounded_polytope_rejected():
    half_line = toric.LatticePolytope((((1,), F(0)),))
    assert not half_line.is_bounded()
    with pytest.raises(InvalidInput):
        half_line.count_lattice_points()


def test_lattice_points_match_count():
    P = toric.six_pz1()
    assert len(P.lattice_points()) == P.count_lattice_points() == 50


@pytest.mark.parametrize("k,exact,closed", [(6, 50, F(1105, 12)), (12, 302, F(1498, 3))])
def test_obstruction_bound(k, exact, closed):
    assert toric.obstruction_dim_bound(k) == (exact, closed)


def test_obstruction_bound_rejects_bad_k():
    with pytest.raises(InvalidInput):
        toric.obstruction_dim_bound(7)


def test_literal_reading():
    assert toric.obstruction_literal_sum(12) == 68894


def test_reid_tai():
    assert toric.reid_tai_age((1, 1, 1, 2), 6) == F(5, 6)
    assert toric.is_noncanonical((1, 1, 1, 2), 6)
    assert toric.is_noncanonical((0, 1, 1, 2), 6)
    assert not toric.is_noncanonical((1, 1, 1, 1), 2)
    ages = toric.power_ages((0, 1, 1, 2), 6)
    assert all(p.unit_eigenvalue for p in ages)


def test_reid_tai_rejects_bad_input():
    with pytest.raises(InvalidInput):
        toric.reid_tai_age((0, 0), 3)
    with pytest.raises(InvalidInput):
        toric.reid_tai_age((3, 1), 3)
