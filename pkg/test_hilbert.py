import os
import sys

import pytest
from hypothesis import given, settings as hsettings, strategies as st

# Add current directory to path so we can import src
sys.path.append(os.getcwd())

from src.exceptions import UnsupportedCaseError
from src.hilbert import (
    hilbert_symbol_tame,
    kummer_order,
    power_residue_image,
    symbol_residue,
    torsion_generators,
    torsion_of_K1,
)
from src.padic import FieldSpec, root_order


def test_symbol_of_p_with_a_unit(q5):
    w = q5.omega(2)
    assert hilbert_symbol_tame(q5.from_int(5), w, 4) == w.inverse()
    assert hilbert_symbol_tame(q5.from_int(5), q5.from_int(5), 4) == -1


def test_symbol_needs_tame_order(q5):
    with pytest.raises(UnsupportedCaseError):
        hilbert_symbol_tame(q5.from_int(5), q5.omega(2), 3)


@hsettings(max_examples=50, deadline=None)
@given(st.integers(1, 10 ** 6), st.integers(1, 10 ** 6))
def test_symbol_is_antisymmetric(a, b):
    fld = FieldSpec.qp(5, 20)
    x, y = fld.from_int(a), fld.from_int(b)
    assert (hilbert_symbol_tame(x, y, 4) * hilbert_symbol_tame(y, x, 4)).is_one()


@hsettings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 3))
def test_symbol_is_bimultiplicative(a, b, k):
    fld = FieldSpec.qp(5, 20)
    x, y, z = fld.omega(a), fld.omega(b), fld.from_int(5) ** k * fld.omega(2)
    assert hilbert_symbol_tame(x * y, z, 4) == hilbert_symbol_tame(x, z, 4) * hilbert_symbol_tame(y, z, 4)


def test_torsion_generators(q5, q5_zeta3):
    assert set(torsion_generators(q5)) == {"pi", "omega", "1+pi"}
    gens = torsion_generators(q5_zeta3)
    assert "1+t*pi" in gens
    assert root_order(gens["omega"], 24) == 24


def test_torsion_over_q5():
    fld = FieldSpec.qp(5, 30)
    r1 = torsion_of_K1(fld, fld.from_int(5))
    r2 = torsion_of_K1(fld, fld.from_int(25))
    print(f"q=5: {r1.as_dict()}  q=25: {r2.as_dict()}")
    assert r1.orders == [4, 4, 1]
    assert r2.orders == [4, 4, 2]
    assert r2.symbol_orders["pi"] == 1


def test_torsion_needs_positive_valuation(q5):
    with pytest.raises(UnsupportedCaseError):
        torsion_of_K1(q5, q5.from_int(2))


def test_oracle_agrees_with_symbols():
    assert power_residue_image(5, 5, 4) == {1, 2, 3, 4}
    assert power_residue_image(5, 25, 4) == {1, 4}
    with pytest.raises(UnsupportedCaseError):
        power_residue_image(5, 5, 3)


def test_kummer_order():
    assert kummer_order(5, 5, 4) == 4
    assert kummer_order(5, 25, 4) == 2
    assert kummer_order(5, 625, 4) == 1
    assert kummer_order(5, 2 * 5 ** 4, 4) == 4
    assert kummer_order(5, 4, 4) == 2
    assert kummer_order(7, 7, 3) == 3


@hsettings(max_examples=40, deadline=None)
@given(st.integers(0, 6), st.integers(1, 124).filter(lambda w: w % 5))
def test_oracle_matches_symbol_image(k, w):
    fld = FieldSpec.qp(5, 20)
    q = 5 ** k * w
    values = [symbol_residue(hilbert_symbol_tame(fld.from_int(q), g, 4))
              for g in (fld.uniformizer(), fld.omega(2))]
    image = {1}
    for v in values:
        image |= {x * v ** j % 5 for x in image for j in range(4)}
    assert image == power_residue_image(5, q, 4)


def test_symbol_residue(q5):
    assert symbol_residue(q5.omega(3)) == 3
