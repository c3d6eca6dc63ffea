import itertools

import pytest

from worpitzky import build
from worpitzky.charquasi import (
    ArrangementSpec,
    catalan_char_poly,
    catalan_quasi,
    char_quasi,
    classical_char_poly,
    compare_routes,
    coxeter_quasi,
    formula_quasi,
    linial_quasi,
    oracle_count,
    oracle_quasi,
    shi_quasi,
)
from worpitzky.errors import GuardExceeded
from worpitzky.polycalc import RationalPolynomial, T, quasi_shift


def naive_count(rs, a, b, q):
    # pure-python loop over the torus, independent of the vectorised oracle
    n = 0
    for t in itertools.product(range(q), repeat=rs.rank):
        if all(sum(m * x for m, x in zip(r, t)) % q not in {k % q for k in range(a, b + 1)} for r in rs.positive_roots):
            n += 1
    return n


def test_family_dispatch(b2):
    fam = {iv: ArrangementSpec(b2, *iv).family for iv in [(0, 0), (-1, 1), (0, 1), (-2, 3), (1, 1), (1, 2), (-1, 2), (-1, 3), (2, 3), (-2, 1)]}
    assert fam == {
        (0, 0): "coxeter",
        (-1, 1): "catalan",
        (0, 1): "shi",
        (-2, 3): "shi",
        (1, 1): "linial",
        (1, 2): "linial",
        (-1, 2): "shi",
        (-1, 3): "linial",
        (2, 3): "empirical",
        (-2, 1): "empirical",
    }
    assert ArrangementSpec(b2, -1, 3).shift_parameters == (1, 2)
    assert ArrangementSpec(b2, 0, 2).hyperplane_count == 12
    with pytest.raises(ValueError):
        ArrangementSpec(b2, 2, 1)


def test_oracle_examples(b2, a2):
    assert oracle_count(ArrangementSpec(b2, 0, 0), 5) == 8
    assert oracle_count(ArrangementSpec(b2, 0, 1), 7) == 9
    assert oracle_count(ArrangementSpec(a2, 1, 2), 7) == 18


@pytest.mark.parametrize("name", ["A1", "A2", "B2", "G2"])
@pytest.mark.parametrize("iv", [(0, 0), (-1, 1), (0, 1), (1, 2), (2, 3)])
def test_oracle_against_naive_loop(name, iv):
    rs = build(name)
    spec = ArrangementSpec(rs, *iv)
    for q in (1, 2, 3, 5, 8, 9):
        assert oracle_count(spec, q) == naive_count(rs, *iv, q)


def test_oracle_threads_and_guard(b2):
    spec = ArrangementSpec(build("A3"), 0, 1)
    assert oracle_count(spec, 110, threads=4) == oracle_count(spec, 110)
    with pytest.raises(GuardExceeded):
        oracle_count(spec, 1000, guard=10**6)


def test_shi():
    assert shi_quasi(build("B2"), 1).char_poly == (T - 4) ** 2
    assert shi_quasi(build("A2"), 1).char_poly == (T - 3) ** 2
    assert shi_quasi(build("G2"), 2).char_poly == (T - 12) ** 2
    for q in (5, 7, 9, 11):
        assert oracle_count(ArrangementSpec(build("B2"), 0, 1), q) == (q - 4) ** 2
    for q in range(5, 13):
        assert oracle_count(ArrangementSpec(build("A2"), 0, 1), q) == (q - 3) ** 2


@pytest.mark.parametrize("name", ["A4", "B3", "C3", "D4", "E6", "E8", "F4", "G2"])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_shi_identity_all_types(name, k):
    rs = build(name)
    assert shi_quasi(rs, k).char_poly == (T - k * rs.coxeter_number) ** rs.rank


def test_catalan():
    assert catalan_char_poly(build("B2"), 1) == (T - 5) * (T - 7)
    assert catalan_char_poly(build("G2"), 1) == (T - 7) * (T - 11)
    b3 = build("B3")
    assert catalan_char_poly(b3, 0) == RationalPolynomial.from_roots(b3.exponents)
    assert catalan_quasi(build("E6"), 1).char_poly == catalan_char_poly(build("E6"), 1)


def test_a2_linial():
    a2 = build("A2")
    assert linial_quasi(a2, 2).char_poly == T * T - 6 * T + 11
    b2 = build("B2")
    assert linial_quasi(b2, 1, 1).quasi == quasi_shift(linial_quasi(b2, 1, 0).quasi, 4)


def test_oracle_quasi_examples(b2, a2):
    cox = oracle_quasi(ArrangementSpec(b2, 0, 0)).quasi
    assert cox.period == 2
    assert cox.constituent(1) == (T - 1) * (T - 3)
    assert cox.constituent(2) == (T - 2) ** 2
    assert oracle_quasi(ArrangementSpec(a2, -1, 1)).quasi.constituents == ((T - 4) * (T - 5),)
    assert oracle_quasi(ArrangementSpec(b2, 0, 1)).quasi.constituents == ((T - 4) ** 2,)


MATRIX = list(itertools.product(["A1", "A2", "A3", "B2", "G2"], [(0, 0), (-1, 1), (0, 1), (1, 1), (1, 2), (0, 2), (-1, 2)]))


@pytest.mark.parametrize("name,iv", MATRIX)
def test_formula_matches_oracle(name, iv):
    rs = build(name)
    spec = ArrangementSpec(rs, *iv)
    f = formula_quasi(spec)
    for q in range(f.quasi.valid_from + 1, 31):
        assert oracle_count(spec, q) == f.quasi.evaluate_integer(q), q
    if rs.rank <= 2:
        assert oracle_quasi(spec).quasi.constituents == f.quasi.constituents


@pytest.mark.parametrize("name", ["A2", "B2", "C3", "D4", "G2"])
def test_coxeter_coprime_constituent(name):
    rs = build(name)
    assert coxeter_quasi(rs).char_poly == RationalPolynomial.from_roots(rs.exponents)


def test_compare_routes_reports(b2):
    res, rep = compare_routes(ArrangementSpec(b2, -1, 2), q_max=30)
    assert rep.passed and res.agreement is True and res.route == "both"
    res, rep = compare_routes(ArrangementSpec(b2, 1, 2))
    assert rep.passed
    res, rep = compare_routes(ArrangementSpec(b2, 2, 3))
    assert res.route == "empirical" and res.agreement is None


@pytest.mark.parametrize("name,iv", [("G2", (2, 3)), ("B2", (2, 2)), ("A2", (-2, 1)), ("G2", (2, 2))])
def test_empirical_intervals_fit_the_oracle(name, iv):
    rs = build(name)
    spec = ArrangementSpec(rs, *iv)
    res = char_quasi(spec)
    assert res.route == "empirical"
    assert res.quasi.gcd_property
    for q in range(res.quasi.valid_from + 1, res.quasi.valid_from + 15):
        assert res.quasi.evaluate_integer(q) == oracle_count(spec, q)


@pytest.mark.parametrize("name", ["A2", "A3", "A4", "B2", "B3", "B4", "C3", "D4", "D5"])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_classical_closed_forms(name, n):
    rs = build(name)
    assert classical_char_poly(rs, n) == linial_quasi(rs, n).char_poly


@pytest.mark.parametrize("name", ["B2", "B3", "C3", "D4"])
@pytest.mark.parametrize("n", [2, 4])
def test_even_n_sparse_factor_disagrees(name, n):
    # the stepped factor 1 + S^2 + ... + S^n does not reproduce the characteristic polynomial
    rs = build(name)
    assert classical_char_poly(rs, n, even_step=2) != linial_quasi(rs, n).char_poly


def test_classical_none_for_exceptional():
    assert classical_char_poly(build("G2"), 2) is None


def test_to_json_shape(b2):
    data = char_quasi(ArrangementSpec(b2, 0, 1)).to_json()
    assert data["constituents"] == ["(t-4)^2"]
    assert set(data) == {"type", "interval", "family", "period", "constituents", "charPoly", "validFrom", "route"}
