import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from worpitzky import build
from worpitzky.analysis import (
    E6_WITNESS,
    check_congruence,
    check_functional_equation,
    check_shift_reduction,
    complex_roots,
    conjugate_residual,
    cyclotomic_shift_check,
    e6_witness,
    e6_witness_report,
    predicted_root_line,
    riemann_check,
    root_line_check,
    vieta_residual,
)
from worpitzky.charquasi import ArrangementSpec, linial_quasi
from worpitzky.polycalc import ONE, RationalPolynomial, T


def test_quadratic_roots():
    roots = complex_roots(T * T - 6 * T + 11)
    assert len(roots) == 2
    for z in roots:
        assert abs(z.real - 3) < 1e-9
        assert abs(abs(z.imag) - math.sqrt(2)) < 1e-9


def test_repeated_and_real_roots():
    assert complex_roots((T - 4) ** 2) == [4, 4]
    r = complex_roots(T * T - 1)
    assert [round(z.real, 12) for z in r] == [-1, 1]


def test_degree_zero_rejected():
    with pytest.raises(ValueError):
        complex_roots(ONE)


def _residual_on_original(p, roots):
    coeffs = [float(c) for c in p.coeffs]
    worst = 0.0
    for z in roots:
        val = sum(c * z**k for k, c in enumerate(coeffs))
        scale = sum(abs(c) * max(abs(z), 1.0) ** k for k, c in enumerate(coeffs))
        worst = max(worst, abs(val) / scale)
    return worst


@pytest.mark.parametrize(
    "name,n,k", [("A4", 4, 0), ("B3", 3, 0), ("C3", 2, 1), ("G2", 3, 0), ("F4", 5, 0), ("E6", 5, 0), ("E7", 5, 0), ("E8", 1, 1)]
)
def test_roots_against_numpy(name, n, k):
    p = linial_quasi(build(name), n, k).char_poly
    ours = complex_roots(p)
    theirs = np.roots([float(c) for c in reversed(p.coeffs)])
    assert len(ours) == len(theirs) == p.degree
    rest = list(theirs)
    for z in ours:
        j = int(np.argmin([abs(z - w) for w in rest]))
        assert abs(z - rest.pop(j)) < 1e-6
    assert vieta_residual(p, ours) < 1e-8
    assert conjugate_residual(ours) < 1e-8
    assert _residual_on_original(p, ours) < 1e-8


@given(st.lists(st.integers(-9, 9), min_size=1, max_size=6), st.lists(st.integers(0, 9), max_size=2))
@settings(max_examples=50, deadline=None)
def test_roots_of_products(reals, imags):
    p = RationalPolynomial.from_roots(reals)
    for b in imags:
        p = p * (T * T - 2 * T + 1 + b * b)  # 1 +- ib
    roots = complex_roots(p)
    assert len(roots) == p.degree
    assert vieta_residual(p, roots) < 1e-8
    assert conjugate_residual(roots) < 1e-8
    assert _residual_on_original(p, roots) < 1e-8


def test_e6_witness():
    p = e6_witness()
    assert p == E6_WITNESS
    assert p[0] == 29288834
    assert p[5] == -90
    rep = e6_witness_report()
    assert rep.passed and rep.predicted
    assert all(abs(z.real - 15) < 1e-6 for z in rep.roots)


@pytest.mark.parametrize("ell,m", [(1, 2), (2, 3), (6, 6)] + [(l, m) for l in range(1, 7) for m in range(2, 7)])
def test_congruence(ell, m):
    assert check_congruence(ell, m).passed


def test_congruence_rejects_bad_arguments():
    with pytest.raises(ValueError):
        check_congruence(0, 2)
    with pytest.raises(ValueError):
        check_congruence(2, 1)


def test_functional_equation_examples(b2):
    for iv in [(1, 2), (0, 1), (-1, 1), (0, 0), (-1, 3), (0, 3)]:
        rep = check_functional_equation(ArrangementSpec(b2, *iv))
        assert rep.passed, iv
    rep = check_functional_equation(ArrangementSpec(b2, -1, 1))
    assert rep.details == {"centre": 12, "level": "charPoly"}
    assert not check_functional_equation(ArrangementSpec(b2, 2, 3)).passed


@pytest.mark.parametrize("name", ["A3", "C3", "D4", "E6", "F4", "G2"])
def test_functional_equation_types(name):
    rs = build(name)
    for iv in [(1, 1), (1, 2), (0, 2), (-1, 2), (-1, 1), (0, 0)]:
        assert check_functional_equation(ArrangementSpec(rs, *iv)).passed


def test_shift_reduction(a2):
    rep = check_shift_reduction(a2, 2, 1)
    assert rep.passed
    assert rep.details["oracleQ"]
    assert linial_quasi(a2, 2, 1).quasi.evaluate_integer(11) == 27
    assert check_shift_reduction(build("B2"), 1, 1).passed
    assert check_shift_reduction(build("G2"), 2, 0).passed


def test_shift_reduction_skips_oracle_past_guard():
    rep = check_shift_reduction(build("E6"), 1, 1, oracle_guard=10)
    assert rep.passed and rep.details["oracleQ"] == []


@pytest.mark.parametrize(
    "name,n,k", [("A2", 2, 0), ("B2", 1, 0), ("A4", 3, 1), ("B3", 2, 0), ("C3", 3, 1), ("G2", 2, 0), ("E6", 5, 0), ("F4", 5, 0)]
)
def test_riemann_checks(name, n, k):
    rs = build(name)
    rep = riemann_check(rs, n, k)
    assert rep.passed
    assert rep.target_real_part == (n + 2 * k) * rs.coxeter_number / 2
    assert rep.predicted


def test_prediction_flags():
    assert not predicted_root_line(build("F4"), 1)
    assert predicted_root_line(build("F4"), 5)
    assert predicted_root_line(build("E8"), 29)
    assert not predicted_root_line(build("E8"), 5)
    assert predicted_root_line(build("D5"), 2)


def test_b2_shi_double_root():
    rep = riemann_check(build("B2"), 1, 0)
    assert rep.target_real_part == 2
    assert [round(z.real, 9) for z in rep.roots] == [2, 2]


def test_report_json():
    rep = riemann_check(build("A2"), 2)
    data = json.loads(json.dumps(rep.to_json()))
    assert {"poly", "roots", "target", "maxDeviation", "passed", "predictedByPaper"} <= set(data)
    assert data["target"] == "3"
    assert str(rep).startswith("PASS")


def test_root_line_failure_reported():
    rep = root_line_check((T - 1) * (T - 3), 2)
    assert not rep.passed
    assert rep.max_deviation == pytest.approx(1)


@pytest.mark.parametrize(
    "g",
    [
        1 + T,
        1 + T + T**2,
        (1 + T) * (1 + T**2),
        1 + T**2 + T**4,
        (1 + T + T**2) ** 2,
    ],
)
def test_unit_circle_shift_moves_root_line(g):
    f = T * T - 6 * T + 11  # roots on Re = 3
    rep = cyclotomic_shift_check(g, f, 3)
    assert rep.passed
    assert rep.target_real_part == 3 + g.degree / 2
