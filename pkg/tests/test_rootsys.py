import math
import random

import pytest

from worpitzky import build
from worpitzky.errors import CapExceeded, InvalidType
from worpitzky.rootsys import (
    RootSystemId,
    WeylElement,
    asc,
    asc_distribution,
    dsc,
    enumerate_weyl,
    longest_element,
    pairing,
    reflect_root,
    simple_coroot,
    validate,
)

# (h, f, |Phi+|, exponents) for each type, frozen by hand
KNOWN = {
    "A1": (2, 2, 1, (1,)),
    "A2": (3, 3, 3, (1, 2)),
    "A4": (5, 5, 10, (1, 2, 3, 4)),
    "B2": (4, 2, 4, (1, 3)),
    "B3": (6, 2, 9, (1, 3, 5)),
    "C3": (6, 2, 9, (1, 3, 5)),
    "D4": (6, 4, 12, (1, 3, 3, 5)),
    "E6": (12, 3, 36, (1, 4, 5, 7, 8, 11)),
    "E7": (18, 2, 63, (1, 5, 7, 9, 11, 13, 17)),
    "E8": (30, 1, 120, (1, 7, 11, 13, 17, 19, 23, 29)),
    "F4": (12, 1, 24, (1, 5, 7, 11)),
    "G2": (6, 1, 6, (1, 5)),
}


@pytest.mark.parametrize("name", sorted(KNOWN))
def test_invariants(name):
    rs = build(name)
    h, f, npos, exps = KNOWN[name]
    assert rs.coxeter_number == h
    assert rs.index_of_connection == f
    assert len(rs.positive_roots) == npos
    assert rs.exponents == exps
    assert sum(rs.all_marks) == h
    assert 2 * npos == rs.rank * h
    assert validate(rs, weyl_cap=60000) == []


def test_b2_data(b2):
    # row i holds the pairings with the i-th simple coroot; alpha_1 is long
    assert b2.cartan == ((2, -1), (-2, 2))
    assert b2.highest_root == (1, 2)
    assert b2.marks == (1, 2)
    assert b2.highest_coroot == (0, 1)
    assert b2.weyl_order == 8
    assert b2.alcove_count == 4


def test_weyl_orders():
    assert build("F4").weyl_order == 1152
    assert build("E6").weyl_order == 51840
    assert build("E8").weyl_order == 696729600
    assert build("G2").weyl_order == 12


def test_ehrhart_periods():
    assert build("E8").ehrhart_period == 60
    assert build("E8").ehrhart_period_radical == 30
    assert build("A3").ehrhart_period == 1
    assert build("E7").ehrhart_period_radical == 6


@pytest.mark.parametrize("bad", ["B1", "C1", "D2", "E5", "E9", "F3", "G3", "X2", "A0", ""])
def test_invalid_types(bad):
    with pytest.raises(InvalidType):
        build(bad)


def test_parse_roundtrip():
    assert str(RootSystemId.parse("e6")) == "E6"
    assert RootSystemId.parse("D5").rank == 5


def test_pairing_with_simple_coroots(b2):
    # <alpha_j, alpha_i^vee> read back from the coroot components
    for i in range(1, 3):
        cor = simple_coroot(b2, i)
        for j in range(2):
            e = tuple(int(k == j) for k in range(2))
            assert pairing(b2, e, cor) == b2.cartan[i - 1][j]


@pytest.mark.parametrize("name", ["A3", "B3", "G2", "F4"])
def test_simple_reflections_permute_roots(name):
    rs = build(name)
    roots = set(rs.roots)
    for i in range(rs.rank):
        image = {reflect_root(rs, i, r) for r in rs.roots}
        assert image == roots
    for i in range(1, rs.rank + 1):
        e = tuple(int(k == i - 1) for k in range(rs.rank))
        assert reflect_root(rs, i, e) == tuple(-x for x in e)
    top = rs.highest_root
    assert reflect_root(rs, 0, top) == tuple(-x for x in top)


def test_weyl_enumeration_sizes():
    for name in ["A3", "B3", "G2", "D4"]:
        rs = build(name)
        assert len(enumerate_weyl(rs)) == rs.weyl_order


def test_weyl_cap():
    with pytest.raises(CapExceeded):
        enumerate_weyl(build("E8"), cap=10**6)


def test_ascent_distributions():
    # f copies of the generalized Eulerian coefficients
    assert dict(asc_distribution(build("A3"))) == {1: 4, 2: 16, 3: 4}
    assert sorted(asc_distribution(build("B2")).elements()) == [1, 1, 2, 2, 2, 2, 3, 3]


def test_asc_dsc_longest():
    rs = build("B3")
    w0 = longest_element(rs)
    e = WeylElement.identity(rs.rank)
    h = rs.coxeter_number
    assert asc(rs, e) == h - 1
    assert asc(rs, w0) == 1
    assert asc(rs, e) + dsc(rs, e) == h


def test_asc_plus_dsc_is_h_on_short_words():
    rng = random.Random(3)
    for name in ["G2", "C3", "D4"]:
        rs = build(name)
        for _ in range(30):
            w = WeylElement.from_word(rs, [rng.randrange(1, rs.rank + 1) for _ in range(6)])
            assert asc(rs, w) + dsc(rs, w) == rs.coxeter_number
            assert 0 <= asc(rs, w) <= rs.coxeter_number


def test_from_word_matches_reflection_composition():
    rng = random.Random(7)
    for name in ["B3", "G2", "A4"]:
        rs = build(name)
        for _ in range(20):
            word = [rng.randrange(rs.rank + 1) for _ in range(rng.randrange(1, 9))]
            w = WeylElement.from_word(rs, word)
            for r in rs.positive_roots:
                img = r
                for s in reversed(word):  # rightmost letter acts first
                    img = reflect_root(rs, s, img)
                assert w.apply(r) == img
            assert {w.apply(r) for r in rs.roots} == set(rs.roots)


def test_reflections_are_involutions():
    rs = build("F4")
    for s in range(rs.rank + 1):
        w = WeylElement.from_word(rs, [s, s])
        assert w == WeylElement.identity(rs.rank)


def test_orders_of_products():
    # s1 s2 in B2 has order 4, in G2 order 6
    for name, m in [("B2", 4), ("G2", 6), ("A2", 3)]:
        rs = build(name)
        w = WeylElement.from_word(rs, [1, 2] * m)
        assert w == WeylElement.identity(2)
        assert WeylElement.from_word(rs, [1, 2] * (m - 1)) != WeylElement.identity(2)


def test_weyl_formula_matches_enumeration():
    rs = build("C3")
    assert rs.weyl_order == rs.index_of_connection * math.factorial(3) * math.prod(rs.marks)
