import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from kgt import modcurve
from kgt.errors import InvalidInput


@given(st.integers(1, 10**9))
def test_index_formulas_against_totients(n):
    # [Gamma_0(n) : Gamma_1(n)] = phi(n) in SL2(Z)
    g0 = modcurve.index_gamma0(n)
    g1 = modcurve.index_gamma1(n)
    assert g1 == g0 * int(sympy.totient(n))
    assert g1 % g0 == 0


def test_index_small_values():
    assert [modcurve.index_gamma0(n) for n in range(1, 9)] == [1, 3, 4, 6, 6, 12, 8, 12]
    assert [modcurve.index_gamma1(n) for n in range(1, 6)] == [1, 3, 8, 12, 24]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6, 7, 12, 25, 30])
def test_index_oracle(n):
    assert modcurve.index_oracle(n) == (modcurve.index_gamma0(n), modcurve.index_gamma1(n))


def test_oracle_cap():
    with pytest.raises(InvalidInput):
        modcurve.index_oracle(61)


@given(st.integers(1, 5000))
def test_epsilon3_oracle(e):
    if e % 27 == 0:
        return
    assert modcurve.epsilon3(e) == modcurve.epsilon3_oracle(e)


def test_epsilon3_values():
    assert [modcurve.epsilon3(e) for e in (1, 3, 7, 9, 13, 21, 91, 2)] == [1, 1, 2, 0, 2, 2, 4, 0]


def test_eta_bound():
    assert modcurve.eta_bound(1, 7) == modcurve.index_gamma1(7) // modcurve.index_gamma0(7) * 2
    assert modcurve.eta_bound(2, 9) == 0


def test_report():
    rep = modcurve.index_report(12).to_dict()
    assert rep == {"n": 12, "index_gamma0": 24, "index_gamma1": 96, "epsilon3": 0}


@pytest.mark.parametrize("bad", [0, -1, 2.0])
def test_invalid_level(bad):
    with pytest.raises(InvalidInput):
        modcurve.index_gamma0(bad)
