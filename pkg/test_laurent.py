import os
import sys

import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st

# Add current directory to path so we can import src
sys.path.append(os.getcwd())

from src.exceptions import DomainError, PrecisionError
from src.laurent import (
    LaurentSeries,
    Tail,
    add,
    invert_unit,
    laurent_arith,
    mul,
    reduce_mod_power,
    residue_dlog,
)
from src.padic import FieldSpec
from src.tate import TateCurve, theta_series

small_polys = st.lists(st.integers(-20, 20), min_size=1, max_size=6)


def _poly(fld, coeffs, lo=0):
    return LaurentSeries.polynomial(fld, {lo + i: c for i, c in enumerate(coeffs)})


def _ints(series):
    return [series.coefficient(k).as_integer() for k in range(series.lo, series.hi + 1)]


@hsettings(max_examples=40, deadline=None)
@given(small_polys, small_polys, st.integers(-3, 3))
def test_product_matches_convolution(a, b, shift):
    fld = FieldSpec.qp(5, 30)
    f, g = _poly(fld, a, shift), _poly(fld, b)
    prod = mul(f, g)
    assert prod.lo == shift
    assert _ints(prod) == [int(c) for c in np.convolve(a, b)]
    assert _ints(mul(g, f)) == _ints(prod)


def test_exact_polynomials(q5):
    f = LaurentSeries.polynomial(q5, {0: 1, 1: -1})
    g = LaurentSeries.polynomial(q5, {0: 1, 1: 1})
    h = f * g
    assert h.coefficient(2) == -1
    assert h.coefficient(1) == 0
    # no tails: everything outside the window is exactly zero
    assert h.coefficient(7).is_exact_zero()
    assert (f - f).is_certified_zero_on(-5, 5, 40)


def test_reflect_and_shift(q5):
    f = LaurentSeries.polynomial(q5, {1: 2, 3: 1})
    assert f.reflect().coefficient(-3) == 1
    assert f.shift(2).coefficient(5) == 1
    assert f.derivative().coefficient(2) == 3


def test_unit_inverse(q5):
    f = LaurentSeries.polynomial(q5, {0: 1, 1: -5})
    inv = invert_unit(f)
    residual = add(mul(f, inv), LaurentSeries.monomial(q5, 0, -1))
    assert residual.is_certified_zero_on(0, 10, 30)


def test_non_unit_is_rejected(q5):
    with pytest.raises(DomainError):
        invert_unit(LaurentSeries.polynomial(q5, {0: 5, 1: 1}))


def test_uncertified_products_raise(q5):
    loose = LaurentSeries.from_elements(q5, {0: 1}, low_tail=Tail(0, 0), high_tail=Tail(0, 0))
    with pytest.raises(PrecisionError):
        mul(loose, loose)
    with pytest.raises(PrecisionError):
        loose.coefficient(3)


def test_residue_of_units(q5):
    assert residue_dlog(LaurentSeries.polynomial(q5, {0: 1, 1: -5}), 4) == 0
    assert residue_dlog(LaurentSeries.polynomial(q5, {0: 1, 1: -5}), 4, e=3) == 3


def test_reduce_mod_power(q5):
    T = q5.power_threshold(2)
    f = LaurentSeries.polynomial(q5, {-2: 5 ** 5, -1: 5 + 5 ** 7, 0: 1, 1: 5 ** 4, 2: 5 ** 5})
    g = reduce_mod_power(f, 2)
    assert g.certificate == T
    # coefficients divisible by pi^(T+1) vanish, lower digits survive
    assert g.window == (-1, 1)
    assert g.coefficient(-1).as_integer() % 5 ** (T + 1) == 5
    assert g.coefficient(1).as_integer() % 5 ** (T + 1) == 5 ** 4


def test_theta_reduces_to_finite_product():
    fld = FieldSpec.qp(5, 40)
    curve = TateCurve(fld, "5^3")
    g = reduce_mod_power(theta_series(curve, 3), 2)
    # (1 - u)(1 - q u)(1 - q / u) modulo pi^5
    expected = {-1: -125, 0: 126, 1: -126, 2: 125}
    assert g.window == (-1, 2)
    for k, c in expected.items():
        assert (g.coefficient(k).as_integer() - c) % 5 ** 5 == 0


def test_dispatch(q5):
    f = LaurentSeries.polynomial(q5, {0: 2})
    assert laurent_arith(f, f, "add").coefficient(0) == 4
    assert laurent_arith(f, f, "mul").coefficient(0) == 4
    with pytest.raises(ValueError):
        laurent_arith(f, f, "div")
