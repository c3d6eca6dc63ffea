import math
from fractions import Fraction

import pytest

from worpitzky import build
from worpitzky.ehrhart import (
    check_period,
    check_structure,
    coprime_constituent,
    count,
    direct_count,
    ehrhart_quasi,
    verify_facet_removal,
    verify_reciprocity,
)
from worpitzky.errors import GuardExceeded
from worpitzky.polycalc import RationalPolynomial, T, quasi_negate_sign, quasi_reflect, quasi_shift


def test_b2_counts(b2):
    assert count(b2, 5) == 12
    assert count(b2, 0) == 1
    assert count(b2, 6, excluded={0}) == 12
    assert count(b2, 10, excluded={0, 1, 2}) == 16


def test_type_a_is_binomial():
    eq = ehrhart_quasi(build("A3"))
    assert eq.period == 1
    assert eq.constituent(1) == RationalPolynomial.from_roots([-1, -2, -3], Fraction(1, 6))


def test_b2_constituents(b2):
    eq = ehrhart_quasi(b2)
    assert eq.constituent(2) == (T + 2) ** 2 / 4
    assert eq.constituent(1) == (T + 1) * (T + 3) / 4


def test_e6_coprime_constituent():
    rs = build("E6")
    eq = ehrhart_quasi(rs)
    want = RationalPolynomial.from_roots([-1, -4, -5, -7, -8, -11], Fraction(1, 2**3 * 3 * math.factorial(6)))
    assert eq.constituent(1) == want == coprime_constituent(rs)
    assert eq.constituent(7) == want


@pytest.mark.parametrize("name", ["A1", "A4", "B3", "C3", "D4", "D5", "G2", "F4", "E6", "E7", "E8"])
def test_quasi_matches_knapsack_beyond_fit_window(name):
    rs = build(name)
    eq = ehrhart_quasi(rs)
    top = eq.period * (rs.rank + 4)
    for q in range(0, top):
        assert eq.evaluate_integer(q) == count(rs, q)


@pytest.mark.parametrize("name", ["A2", "B2", "C3", "G2", "B3", "D4", "F4"])
def test_knapsack_against_box_scan(name):
    rs = build(name)
    for q in range(0, 14):
        assert count(rs, q) == direct_count(rs, q)
        assert count(rs, q, interior=True) == direct_count(rs, q, interior=True)


def test_direct_count_guard():
    with pytest.raises(GuardExceeded):
        direct_count(build("A5"), 200, guard=1000)


@pytest.mark.parametrize("name", ["A3", "B2", "B4", "D4", "G2", "F4", "E6", "E7", "E8"])
def test_period_and_structure(name):
    rs = build(name)
    assert check_period(rs).passed
    assert check_structure(rs).passed
    assert ehrhart_quasi(rs).gcd_property


def test_facet_removal_and_reciprocity():
    for name in ["B2", "G2", "A3", "C3"]:
        rs = build(name)
        assert verify_facet_removal(rs, 2).passed
        assert verify_reciprocity(rs, range(1, 12)).passed


def test_g2_single_facet():
    rs = build("G2")
    eq = ehrhart_quasi(rs)
    assert direct_count(rs, 9, {1}) == eq.evaluate_integer(9 - rs.all_marks[1])


def test_reciprocity_small_cases(b2, a2):
    assert ehrhart_quasi(b2).evaluate_integer(-6) == 4 == direct_count(b2, 6, interior=True)
    assert ehrhart_quasi(a2).evaluate_integer(-3) == 1 == direct_count(a2, 3, interior=True)


def test_h_shift_reflection(b2):
    eq = ehrhart_quasi(b2)
    h = b2.coxeter_number
    assert quasi_shift(eq, h) == quasi_negate_sign(quasi_reflect(eq, 0), b2.rank)


@pytest.mark.parametrize("l", [4, 5, 6])
def test_d_even_constituent(l):
    # the even constituent carries a linear term 2(l-1)t in its quadratic factor
    rs = build(f"D{l}")
    c = RationalPolynomial.from_roots([-2 * i for i in range(1, l - 1)], Fraction(1, 2 ** (l - 3) * math.factorial(l)))
    quad = T * T + 2 * (l - 1) * T + Fraction(l * (l - 1), 2)
    assert ehrhart_quasi(rs).constituent(2) == quad * c
