import math
import os
import sys

import numpy as np
import pytest
from hypothesis import assume, given, settings as hsettings, strategies as st

# Add current directory to path so we can import src
sys.path.append(os.getcwd())

from src.bloch import (
    ComplexFunction,
    PreBlochElement,
    ab_bracket,
    bloch2cor_check,
    borel_value,
    choose_ray_angles,
    contour_regulator,
    d2,
    d2_checked,
    d2_relations,
    delta_bar,
    distribution_relation,
    eta0,
    five_term,
    galois_beta_check,
    lambda_data,
    nodal_symbol_membership,
    prebloch_combine,
    regulator_matrix,
    regulator_vector,
)
from src.cyclotomic import CyclotomicNumber, embeddings, zeta
from src.exceptions import DomainError

CATALAN = 0.915965594177219015054603514932

complex_points = st.complex_numbers(max_magnitude=20, allow_nan=False, allow_infinity=False)


@st.composite
def small_cyclotomic(draw):
    n = draw(st.sampled_from([3, 4, 6]))
    a, b = draw(st.integers(-3, 3)), draw(st.integers(-3, 3))
    return a + b * zeta(n)


# ===== D_2 =====

def test_d2_at_i():
    assert abs(d2(1j) - CATALAN) < 1e-11
    assert abs(d2(-1j) + CATALAN) < 1e-11


def test_d2_boundary_and_real_line():
    assert d2_checked(0) == (0.0, True)
    assert d2_checked(1) == (0.0, True)
    assert abs(d2(0.3)) < 1e-15
    assert abs(d2(2.5)) < 1e-15
    with pytest.raises(DomainError):
        d2_relations(1)


@hsettings(max_examples=60, deadline=None)
@given(complex_points)
def test_d2_relations(z):
    assume(abs(z) > 1e-3 and abs(z - 1) > 1e-3)
    residuals = d2_relations(z)
    assert max(residuals.values()) < 1e-9


# ===== PRE-BLOCH GROUP =====

def test_brackets_in_normal_form():
    x = 2 + zeta(3)
    assert (PreBlochElement.bracket(x) + PreBlochElement.bracket(x.inverse())).is_zero()
    assert PreBlochElement.bracket(CyclotomicNumber.from_rational(-1)).is_zero()
    assert PreBlochElement.bracket(zeta(4, 3)) == -PreBlochElement.bracket(zeta(4))
    with pytest.raises(DomainError):
        PreBlochElement.bracket(CyclotomicNumber.from_rational(1))
    e = PreBlochElement.bracket(zeta(4), 3).scale(2)
    assert dict(e.items()) == {zeta(4): 6}
    assert len(e) == 1


def test_elements_combine_across_conductors():
    a = PreBlochElement.bracket(zeta(3))
    b = PreBlochElement.bracket(zeta(4))
    total = a + b
    assert total.conductor == 12
    assert abs(borel_value(total) - borel_value(a) - borel_value(b)) < 1e-12
    assert prebloch_combine(a, b, 2) == a + b.scale(2)
    assert prebloch_combine(a, a, -1).is_zero()


@hsettings(max_examples=40, deadline=None)
@given(small_cyclotomic(), small_cyclotomic())
def test_five_term_vanishes(x, y):
    for v in (x, y):
        assume(not v.is_zero() and not v.is_one())
    assume(x != y)
    e = five_term(x, y)
    for k in embeddings(e.conductor):
        assert abs(borel_value(e, k)) < 1e-9


@pytest.mark.parametrize("m", [2, 3, 4])
def test_distribution_relation(m):
    x = 2 * zeta(5)
    e = distribution_relation(x, m)
    assert regulator_vector(e).max_abs() < 1e-10


def test_distribution_relation_is_exact_for_i():
    assert distribution_relation(zeta(4), 2).is_zero()


def test_regulator_rank():
    for n in (5, 7):
        _, rank = regulator_matrix(n)
        assert rank == len(embeddings(n))


def test_lambda_data():
    e = PreBlochElement.bracket(zeta(4), 2)
    [(c, x, y)] = lambda_data(e)
    assert c == 2 and x == zeta(4) and y == 1 - zeta(4)


# ===== NODAL CURVE =====

def test_delta_bar_of_eta0():
    sym = eta0(zeta(4), 4, zeta(2), 2)
    assert all(value.is_one() for _, value in nodal_symbol_membership(sym))
    assert delta_bar(sym) == PreBlochElement.bracket(zeta(4), 16)
    assert abs(borel_value(delta_bar(sym)) - 16 * CATALAN) < 1e-9


def test_ab_bracket_reads_one_as_zero():
    one = CyclotomicNumber.from_rational(1)
    minus_one = CyclotomicNumber.from_rational(-1)
    assert ab_bracket(zeta(4), zeta(4)).is_zero()
    assert ab_bracket(one, zeta(4)).is_zero()
    assert ab_bracket(zeta(4), minus_one) == PreBlochElement.bracket(zeta(4), 2)


def test_eta0_rejects_degenerate_roots():
    with pytest.raises(DomainError):
        eta0(zeta(4), 4, zeta(4), 4)
    with pytest.raises(DomainError):
        eta0(zeta(4), 2, zeta(2), 2)


def test_bloch2cor():
    result = bloch2cor_check(zeta(4), 4, zeta(2), 2)
    print(f"bloch2cor: contour={result['contour']['values']} borel={result['borel']}")
    assert result["passed"]
    assert abs(abs(result["borel"]) - 14.655449506834) < 1e-6
    assert result["contour"]["path_spread"] < 2e-9


def test_ray_angles():
    assert choose_ray_angles([]) == [0.5, 1.5]
    angles = sorted(choose_ray_angles([1, -1]))
    assert abs(angles[0] - math.pi / 2) < 1e-12
    assert abs(angles[1] - 3 * math.pi / 2) < 1e-12


def test_ray_through_a_pole_is_rejected():
    f = ComplexFunction(1.0, 0, np.array([1 + 0j]), np.array([1.0]))
    g = ComplexFunction(1.0, 0, np.array([-1 + 0j]), np.array([1.0]))
    with pytest.raises(DomainError):
        contour_regulator(f, g, 0.0)


# ===== GALOIS ACTION =====

@pytest.mark.parametrize("l,m", [(3, 4), (7, 4), (3, 8)])
def test_galois_beta(l, m):
    report = galois_beta_check(l, m)
    assert report.passed
    assert report.tau_action == "square"
    assert report.max_residual < 1e-10


def test_galois_beta_needs_l_3_mod_4():
    with pytest.raises(DomainError):
        galois_beta_check(5, 4)
