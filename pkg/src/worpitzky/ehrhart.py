"""Lattice points of the dilated fundamental alcove and its Ehrhart quasi-polynomial.

In coweight coordinates the closed alcove qĀ is ``{t >= 0 : sum c_i t_i <= q}``,
so counting its points is the coin problem with denominations c_1..c_l.
Facet F_i (i >= 1) is ``t_i = 0`` and F_0 is ``sum c_i t_i = q``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import GuardExceeded, OverdeterminationFailure
from .polycalc import QuasiPolynomial, RationalPolynomial, interpolate_quasi
from .report import Report
from .rootsys import RootSystem

DIRECT_COUNT_GUARD = 5 * 10**7


@dataclass(frozen=True)
class AlcoveCountQuery:
    rs: RootSystem
    q: int
    excluded_facets: frozenset[int] = frozenset()
    interior_only: bool = False

    def __post_init__(self):
        if self.interior_only and self.excluded_facets:
            raise ValueError("excluded_facets and interior_only are mutually exclusive")
        if self.q < 0:
            raise ValueError("dilation must be nonnegative")
        bad = [i for i in self.excluded_facets if not 0 <= i <= self.rs.rank]
        if bad:
            raise ValueError(f"facet indices {bad} out of range 0..{self.rs.rank}")

    @property
    def budget(self) -> int:
        """The bound on sum c_i t'_i after substituting t'_i = t_i - 1 for each removed facet."""
        facets = range(self.rs.rank + 1) if self.interior_only else self.excluded_facets
        return self.q - sum(self.rs.all_marks[i] for i in facets)


@lru_cache(maxsize=None)
def _cumulative_coin_counts(marks: tuple[int, ...], top: int) -> tuple[int, ...]:
    # ways[s] = #{t >= 0 : sum c_i t_i = s}; the answer is its prefix sum
    ways = [0] * (top + 1)
    ways[0] = 1
    for c in marks:
        for s in range(c, top + 1):
            ways[s] += ways[s - c]
    return tuple(itertools.accumulate(ways))


def alcove_counts(rs: RootSystem, top: int) -> tuple[int, ...]:
    """#(qĀ ∩ Z(Φ)) for q = 0..top, by one knapsack pass."""
    size = 1 << max(top, 1).bit_length()  # memoise on powers of two
    return _cumulative_coin_counts(rs.marks, size)[: top + 1]


def count_alcove_points(query: AlcoveCountQuery) -> int:
    b = query.budget
    return alcove_counts(query.rs, b)[b] if b >= 0 else 0


def count(rs: RootSystem, q: int, excluded: Iterable[int] = (), interior: bool = False) -> int:
    return count_alcove_points(AlcoveCountQuery(rs, q, frozenset(excluded), interior))


def direct_count(
    rs: RootSystem, q: int, excluded: Iterable[int] = (), interior: bool = False, guard: int = DIRECT_COUNT_GUARD
) -> int:
    """Scan the whole box of candidate points and test the facet inequalities one by one.

    Independent of the knapsack recurrence; used to cross-check it.
    """
    l = rs.rank
    excluded = set(range(l + 1)) if interior else set(excluded)
    marks = np.array(rs.marks, dtype=np.int64)
    axes = [np.arange(0, q // c + 1, dtype=np.int64) for c in rs.marks]
    size = math.prod(len(a) for a in axes)
    if size > guard:
        raise GuardExceeded(f"{rs} direct count at q={q}", size, guard)
    grids = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    ok = np.ones(len(pts), dtype=bool)
    for i in range(1, l + 1):
        ok &= pts[:, i - 1] >= (1 if i in excluded else 0)
    top = pts @ marks
    ok &= top <= (q - 1 if 0 in excluded else q)
    return int(ok.sum())


@lru_cache(maxsize=None)
def ehrhart_quasi(rs: RootSystem) -> QuasiPolynomial:
    """Ehr_Ā as a quasi-polynomial of period ñ, interpolated from exact counts on q = 1..(l+2)ñ."""
    n, l = rs.ehrhart_period, rs.rank
    top = (l + 2) * n
    counts = alcove_counts(rs, top)
    samples = {q: counts[q] for q in range(1, top + 1)}
    eq = interpolate_quasi(samples, n, l, valid_from=0)
    return QuasiPolynomial(eq.period, eq.constituents, -1, label=f"Ehr[{rs}]")


def coprime_constituent(rs: RootSystem) -> RationalPolynomial:
    """(f/|W|) prod (t + e_i), the constituent for residues prime to the period."""
    return RationalPolynomial.from_roots((-e for e in rs.exponents), Fraction(rs.index_of_connection, rs.weyl_order))


def check_period(rs: RootSystem, window: int | None = None) -> Report:
    """Counts are a degree-l quasi-polynomial of period ñ and of no proper divisor of ñ."""
    n, l = rs.ehrhart_period, rs.rank
    top = window or 3 * n * (l + 1)
    counts = alcove_counts(rs, top)
    samples = {q: counts[q] for q in range(1, top + 1)}
    rep = Report("ehrhart-period", str(rs), {"period": n, "window": [1, top]})
    try:
        interpolate_quasi(samples, n, l)
    except OverdeterminationFailure as exc:
        rep.fail(period=n, reason=str(exc))
    for d in range(1, n):
        if n % d:
            continue
        try:
            interpolate_quasi(samples, d, l)
        except OverdeterminationFailure:
            continue
        rep.fail(period=d, reason="proper divisor of the period fits the counts")
    return rep


def check_structure(rs: RootSystem) -> Report:
    """gcd-property, leading coefficients f/|W|, and the coprime constituent."""
    eq = ehrhart_quasi(rs)
    rep = Report("ehrhart-structure", str(rs))
    if not eq.gcd_property:
        rep.fail(property="gcd")
    lead = Fraction(rs.index_of_connection, rs.weyl_order)
    for r, p in enumerate(eq.constituents, 1):
        if p.degree != rs.rank or p.leading != lead:
            rep.fail(property="leading coefficient", residue=r, got=str(p.leading))
    g = coprime_constituent(rs)
    for r in range(1, eq.period + 1):
        if math.gcd(r, eq.period) == 1 and eq.constituents[r - 1] != g:
            rep.fail(property="coprime constituent", residue=r, got=str(eq.constituents[r - 1]))
    return rep


def verify_facet_removal(rs: RootSystem, subset_size_max: int, q_values: Sequence[int] | None = None) -> Report:
    """Removing facets F_i1..F_ik leaves Ehr_Ā(q - c_i1 - ... - c_ik) points."""
    eq = ehrhart_quasi(rs)
    marks = rs.all_marks
    rep = Report("facet-removal", str(rs), {"subsetSizeMax": subset_size_max})
    for k in range(subset_size_max + 1):
        for subset in itertools.combinations(range(rs.rank + 1), k):
            drop = sum(marks[i] for i in subset)
            qs = q_values or range(drop + 1, drop + 1 + 2 * rs.ehrhart_period + 2)
            for q in qs:
                if q <= drop:
                    continue
                got = direct_count(rs, q, subset)
                want = eq.evaluate_integer(q - drop)
                if got != want:
                    rep.fail(subset=list(subset), q=q, direct=got, ehrhart=want)
    return rep


def verify_reciprocity(rs: RootSystem, q_range: Iterable[int]) -> Report:
    """Ehr_Ā(-q) = (-1)^l #(qA° ∩ Z(Φ)) and Ehr_Ā(q - h) = (-1)^l Ehr_Ā(-q)."""
    eq = ehrhart_quasi(rs)
    sign = -1 if rs.rank % 2 else 1
    h = rs.coxeter_number
    qs = list(q_range)
    rep = Report("reciprocity", str(rs), {"q": [min(qs), max(qs)]})
    for q in qs:
        neg = eq.evaluate_integer(-q)
        interior = direct_count(rs, q, interior=True)
        if neg != sign * interior:
            rep.fail(q=q, ehrNegative=neg, interior=interior)
        if eq.evaluate_integer(q - h) != sign * neg:
            rep.fail(q=q, identity="Ehr(q-h) = (-1)^l Ehr(-q)")
    return rep
