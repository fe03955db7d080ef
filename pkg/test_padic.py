import os
import sys
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings as hsettings, strategies as st

# Add current directory to path so we can import src
sys.path.append(os.getcwd())

from src.exceptions import DomainError, FieldMismatchError, PrecisionError
from src.padic import (
    FieldSpec,
    binomial_root,
    certify_power,
    congruent_mod_powers,
    field_arith,
    parse_element,
    render,
    root_order,
    roots_of_unity,
    teichmuller,
)

nonzero_ints = st.integers(min_value=-10 ** 6, max_value=10 ** 6).filter(lambda n: n != 0)


# ===== FIELD CONSTRUCTION =====

def test_field_kinds():
    assert FieldSpec.qp(5).describe().startswith("Q_p")
    unram = FieldSpec(p=5, poly=(1, 1, 1), precision=30)
    assert (unram.e, unram.f) == (1, 2)
    ram = FieldSpec(p=5, poly=(1, 0, 5), precision=30)
    assert (ram.e, ram.f) == (2, 1)


def test_field_rejects_bad_input():
    with pytest.raises(DomainError):
        FieldSpec(p=4)
    with pytest.raises(DomainError):
        # x^2 + 1 splits mod 5 and is not Eisenstein
        FieldSpec(p=5, poly=(1, 0, 1))
    with pytest.raises(DomainError):
        FieldSpec(p=5, precision=0)


# ===== ARITHMETIC =====

@hsettings(max_examples=60, deadline=None)
@given(nonzero_ints, nonzero_ints)
def test_multiplication_adds_valuations(a, b):
    fld = FieldSpec.qp(5, 40)
    x, y = fld.from_int(a), fld.from_int(b)
    assert (x * y).ord() == x.ord() + y.ord()
    assert (x * y) / y == x


@hsettings(max_examples=60, deadline=None)
@given(st.integers(-10 ** 9, 10 ** 9), st.integers(-10 ** 9, 10 ** 9))
def test_integers_survive_arithmetic(a, b):
    fld = FieldSpec.qp(5, 40)
    assert (fld.from_int(a) + fld.from_int(b)).as_integer() == a + b
    assert (fld.from_int(a) - fld.from_int(b)).as_integer() == a - b


def test_fractions_and_valuation(q5):
    assert q5.from_int(250).ord() == 3
    assert q5.from_int(-250).ord() == 3
    assert FieldSpec(p=5, poly=(1, 0, 0, -10), precision=30).from_int(50).ord() == 6
    x = q5.from_fraction(Fraction(3, 25))
    assert x.ord() == -2
    assert x * 25 == 3


def test_zero_handling(q5):
    with pytest.raises(DomainError):
        q5.zero().inverse()
    cancelled = q5.one() - q5.one()
    assert cancelled.is_zero() and not cancelled.is_exact_zero()
    with pytest.raises(PrecisionError):
        cancelled.inverse()
    with pytest.raises(DomainError):
        q5.zero().ord()


def test_field_arith_dispatch(q5):
    x, y = q5.from_int(10), q5.from_int(4)
    assert field_arith(x, y, "add") == 14
    assert field_arith(x, y, "sub") == 6
    assert field_arith(x, y, "mul").ord() == 1
    assert field_arith(x, y, "div") * 2 == 5
    assert field_arith(x, None, "pow", k=3).as_integer() == 1000
    with pytest.raises(ValueError):
        field_arith(x, y, "mod")


def test_mixed_fields_are_rejected(q5):
    with pytest.raises(FieldMismatchError):
        q5.one() + FieldSpec.qp(7).one()


def test_unramified_generator(q5_zeta3):
    t = q5_zeta3.generator()
    assert t ** 3 == 1
    assert not t.is_one()
    assert t * t + t + 1 == 0


def test_ramified_uniformizer():
    fld = FieldSpec(p=5, poly=(1, 0, 5), precision=30)
    pi = fld.uniformizer()
    assert pi ** 2 == -5
    assert fld.from_int(5).ord() == 2


# ===== ROOTS OF UNITY =====

def test_teichmuller_lift(q5):
    w = q5.omega(2)
    assert w ** 4 == 1
    assert w.residue() == (2,)
    assert teichmuller(q5.from_int(7)) == w


def test_roots_of_unity_counts(q5, q5_zeta3):
    mu, n = roots_of_unity(q5)
    assert n == 4 and len(mu) == 4
    assert sorted(root_order(z, n) for z in mu) == [1, 2, 4, 4]
    _, n2 = roots_of_unity(q5_zeta3)
    assert n2 == 24


# ===== p^nu-TH POWERS =====

def test_power_certificates(q5):
    # threshold over Q5 with nu = 2 is 4
    assert q5.power_threshold(2) == 4
    assert certify_power(1 + q5.from_int(5 ** 5), 2).passed
    assert not certify_power(q5.from_int(6), 2).passed
    assert not certify_power(q5.from_int(5), 2).passed
    assert certify_power(q5.from_int(5) ** 25 * q5.omega(2), 2).passed
    with pytest.raises(DomainError):
        certify_power(q5.zero(), 2)
    x = q5.from_int(7)
    assert congruent_mod_powers(x * (1 + q5.from_int(5 ** 6)), x, 2).passed
    assert not congruent_mod_powers(x * 6, x, 2).passed


def test_binomial_root(q5):
    x = 1 + q5.from_int(5 ** 5)
    root = binomial_root(x, 2)
    assert root ** 25 == x
    with pytest.raises(DomainError):
        binomial_root(q5.from_int(6), 2)


# ===== PARSING AND RENDERING =====

def test_parse_element(q5, q5_zeta3):
    assert parse_element(q5, "5^3") == 125
    assert parse_element(q5, "omega(2)^4") == 1
    assert parse_element(q5, "-1") == -1
    assert parse_element(q5, "1/5").ord() == -1
    assert parse_element(q5, "-omega(2)*pi^2") == -q5.omega(2) * 25
    assert parse_element(q5_zeta3, "t^3") == 1
    with pytest.raises(ValueError):
        parse_element(q5, "sqrt(2)")


def test_render(q5):
    assert render(q5.zero()) == "0"
    assert render(q5.from_int(5)).startswith("pi^1 * [1 0")
    assert render(q5.one() - q5.one()) == "O(pi^40)"


@hsettings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(0, 6))
def test_digits_reconstruct_value(d, v):
    fld = FieldSpec.qp(5, 20)
    x = fld.from_int(d * 5 ** v)
    assume(x.ord() == v)
    assert x.digits()[0] == d
