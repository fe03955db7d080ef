import os
import sys

import pytest
from hypothesis import assume, given, settings as hsettings, strategies as st

# Add current directory to path so we can import src
sys.path.append(os.getcwd())

from src.exceptions import DomainError, PeriodicityError
from src.padic import FieldSpec
from src.rational import INFINITY, ZERO, RationalFunction, tame_symbol_rational
from src.symbols import (
    MilnorSymbol,
    build_xi_L,
    check_membership,
    formula_table,
    lemma_f0_check,
    lemma_f1_check,
    o_K,
    prop_sa_check,
    steinberg_check,
    step2_1_identity,
    step2_21_check,
    tame_symbol,
    tau_infty,
    weil_reciprocity_check,
)
from src.tate import TateCurve, ThetaProduct

_FIELD = FieldSpec.qp(5, 30)

# nonzero 5-adic integers with a spread of valuations
elements = st.builds(lambda u, k: u * 5 ** k,
                     st.integers(-30, 30).filter(lambda n: n % 5 != 0), st.integers(0, 3))


# ===== P^1 =====

@hsettings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(elements, st.integers(-2, 2)), max_size=3),
       st.lists(st.tuples(elements, st.integers(-2, 2)), max_size=3),
       st.integers(-2, 2), st.integers(-2, 2), elements, elements)
def test_weil_reciprocity(f_roots, g_roots, f_pow, g_pow, c, d):
    el = _FIELD.from_int
    f = RationalFunction.build(el(c), f_pow, [(el(z), n) for z, n in f_roots])
    g = RationalFunction.build(el(d), g_pow, [(el(z), n) for z, n in g_roots])
    assert weil_reciprocity_check(f, g)


@hsettings(max_examples=40, deadline=None)
@given(elements, elements)
def test_steinberg(a, b):
    assume(a != b)
    assert steinberg_check(_FIELD.from_int(a), _FIELD.from_int(b))


def test_tame_symbol_of_coordinate_and_constant(q5):
    u = RationalFunction.coordinate(q5.one())
    c = RationalFunction.constant_function(q5.from_int(7))
    assert tame_symbol_rational(u, c, ZERO) == q5.from_int(7).inverse()
    assert tame_symbol_rational(u, c, INFINITY) == 7


# ===== MILNOR SYMBOLS ON E_q =====

def test_symbols_need_periodic_functions(curve125):
    f = ThetaProduct(curve125, 1, 0, [(2, 1), (1, -1)])
    with pytest.raises(PeriodicityError):
        MilnorSymbol.pair(curve125, f, f)


def test_xi_L_has_trivial_tame_symbols(curve125):
    sym = build_xi_L(curve125, 5, 1, 2, 3)
    values = check_membership(sym)
    assert len(values) == 3
    assert all(tv.value.is_one() for tv in values)
    assert tame_symbol(sym, curve125.field.one()).is_one()


def test_xi_L_rejects_bad_parameters(curve125):
    with pytest.raises(DomainError):
        build_xi_L(curve125, 5, 2, 1, 3)
    with pytest.raises(DomainError):
        build_xi_L(curve125, 2, 1, 2, 3)


def test_prop_sa_q125(curve125):
    check = prop_sa_check(curve125, 5, 1, 2, 3, 2)
    print(f"prop-sa: ord={check.details['ord_lhs']} margin={check.certificate.margin}")
    assert check.passed
    assert check.details["ord_lhs"] == check.details["expected_ord"] == -1


def test_prop_sa_q625(q5):
    curve = TateCurve(q5, "5^4")
    check = prop_sa_check(curve, 5, 1, 2, 4, 2)
    assert check.passed
    assert check.details["ord_lhs"] == -2


def test_o_K(curve125):
    assert o_K(build_xi_L(curve125, 5, 1, 2, 3), 2) == -1


def test_tau_infty_is_stable_in_nu(curve125):
    sym = build_xi_L(curve125, 5, 1, 2, 3)
    low, high = tau_infty(sym, 2), tau_infty(sym, 3)
    assert (low / high).ord() == 0


def test_lemma_f0(curve125):
    check = lemma_f0_check(curve125, "omega(2)", 4, -1, 2, 2)
    assert check.passed
    with pytest.raises(DomainError):
        lemma_f0_check(curve125, "omega(2)", 4, "omega(2)", 4, 2)
    with pytest.raises(DomainError):
        lemma_f0_check(curve125, "omega(2)", 2, -1, 2, 2)


def test_lemma_f1(curve25):
    check = lemma_f1_check(curve25, "omega(2)", 4, 5, 2, 1, 2)
    print(f"lemma-f1: margin={check.certificate.margin} displays={check.details['displays_agree']}")
    assert check.passed
    assert check.details["displays_agree"]
    with pytest.raises(DomainError):
        lemma_f1_check(curve25, "omega(2)", 4, 5, 2, 2, 2)


def test_step2_21(curve25):
    assert step2_21_check(curve25, "omega(2)", 4, 5, 1, 2, 1, 2).passed


def test_step2_1_identity(curve125):
    check = step2_1_identity(curve125, 2, "omega(2)", 4, 2)
    assert check.passed
    assert check.details["equal"]
    with pytest.raises(DomainError):
        step2_1_identity(curve125, 2, -1, 4, 2)


def test_formula_table(curve125):
    rows = formula_table(curve125, 5, 3, 2, 2)
    failed = [row for row in rows if not row["passed"]]
    print(f"formula table: {len(rows)} rows, {len(failed)} failed")
    assert len(rows) == 16
    assert not failed


@pytest.fixture
def ramified_curve():
    """Q5(pi) with pi^3 = 10, and q = pi^3."""
    fld = FieldSpec(p=5, poly=(1, 0, 0, -10), precision=40)
    return TateCurve(fld, "pi^3")


def test_o_K_over_ramified_field(ramified_curve):
    assert ramified_curve.field.e == 3
    assert o_K(build_xi_L(ramified_curve, "pi", 1, 2, 3), 2) == -1


def test_formula_table_over_ramified_field(ramified_curve):
    rows = formula_table(ramified_curve, "pi", 3, 2, 2)
    assert len(rows) == 16
    assert all(row["passed"] for row in rows)


def test_pi0_other_than_p(q5):
    curve = TateCurve(q5, "10^3")
    check = prop_sa_check(curve, 10, 1, 2, 3, 2)
    assert check.passed
    assert check.details["ord_lhs"] == -1
    assert o_K(build_xi_L(curve, 10, 1, 2, 3), 2) == -1
    assert all(row["passed"] for row in formula_table(curve, 10, 3, 2, 2))
