"""Characteristic quasi-polynomials of truncated affine Weyl arrangements.

The arrangement for an interval [a, b] consists of the hyperplanes
(α, x) = k with α positive and a <= k <= b.  Two independent routes are
offered: shift-operator formulas applied to the alcove Ehrhart
quasi-polynomial, and a brute-force count of (Z/q)^l avoiding every
congruence.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .alcoves import generalized_eulerian
from .ehrhart import ehrhart_quasi
from .errors import GuardExceeded, OverdeterminationFailure
from .polycalc import (
    ONE,
    QuasiPolynomial,
    RationalPolynomial,
    apply_shift,
    apply_shift_poly,
    interpolate_quasi,
)
from .report import Report
from .rootsys import RootSystem

DEFAULT_ORACLE_GUARD = 10**8
_CHUNK = 1 << 20


@dataclass(frozen=True)
class ArrangementSpec:
    rs: RootSystem
    a: int
    b: int

    def __post_init__(self):
        if self.a > self.b:
            raise ValueError(f"empty interval [{self.a}, {self.b}]")

    @property
    def width(self) -> int:
        return self.b - self.a + 1

    @property
    def hyperplane_count(self) -> int:
        return len(self.rs.positive_roots) * self.width

    @property
    def family(self) -> str:
        """Which closed formula covers the interval, or ``empirical``."""
        a, b = self.a, self.b
        if a == b == 0:
            return "coxeter"
        if a == -b:
            return "catalan"
        if a <= 1 <= b and a + b == 1:
            return "shi"
        if a <= 1 and a + b >= 2:
            return "linial"
        return "empirical"

    @property
    def shift_parameters(self) -> tuple[int, int] | None:
        """(n, k) with [a, b] = [1 - k, n + k], for intervals containing 1 with a + b >= 1."""
        if self.a <= 1 <= self.b and self.a + self.b >= 1:
            return self.a + self.b - 1, 1 - self.a
        return None

    def __str__(self) -> str:
        return f"{self.rs.id}[{self.a},{self.b}]"


@dataclass
class CharQuasi:
    spec: ArrangementSpec
    quasi: QuasiPolynomial
    route: str
    agreement: bool | None = None
    notes: dict = field(default_factory=dict)

    @property
    def char_poly(self) -> RationalPolynomial:
        # residue 1 is coprime to every period
        return self.quasi.constituent(1)

    def to_json(self) -> dict:
        out = {
            "type": str(self.spec.rs.id),
            "interval": [self.spec.a, self.spec.b],
            "family": self.spec.family,
            "period": self.quasi.period,
            "constituents": [p.factored() for p in self.quasi.constituents],
            "charPoly": self.char_poly.to_string(),
            "validFrom": self.quasi.valid_from,
            "route": self.route,
        }
        if self.agreement is not None:
            out["agreement"] = self.agreement
        if self.notes:
            out["notes"] = self.notes
        return out


def _forbidden_residues(spec: ArrangementSpec, q: int) -> np.ndarray:
    bad = np.zeros(q, dtype=bool)
    if spec.width >= q:
        bad[:] = True
    else:
        bad[np.arange(spec.a, spec.b + 1) % q] = True
    return bad


def _count_range(roots: np.ndarray, bad: np.ndarray, q: int, start: int, stop: int) -> int:
    l = roots.shape[1]
    digits = np.stack(np.unravel_index(np.arange(start, stop, dtype=np.int64), (q,) * l), axis=1)
    values = (digits @ roots.T) % q
    return int((~bad[values].any(axis=1)).sum())


def oracle_count(spec: ArrangementSpec, q: int, guard: int = DEFAULT_ORACLE_GUARD, threads: int = 1) -> int:
    """#{t in (Z/q)^l : (α, t) is not congruent to any k in [a, b] for every positive α}."""
    if q < 1:
        raise ValueError("q must be positive")
    l = spec.rs.rank
    size = q**l
    if size > guard:
        raise GuardExceeded(f"oracle count {spec} at q={q}", size, guard)
    roots = np.array(spec.rs.positive_roots, dtype=np.int64)
    bad = _forbidden_residues(spec, q)
    bounds = [(s, min(s + _CHUNK, size)) for s in range(0, size, _CHUNK)]
    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return sum(pool.map(lambda se: _count_range(roots, bad, q, *se), bounds))
    return sum(_count_range(roots, bad, q, s, e) for s, e in bounds)


def oracle_valid_from(spec: ArrangementSpec) -> int:
    """Threshold above which oracle counts are fitted: h times the length of [a, b] joined with 0.

    For intervals meeting [0, 1] this is at least (b - a + 1) h; intervals
    far from the origin need the larger hull (e.g. G2 on [2, 3]).
    """
    lo, hi = min(spec.a, 0), max(spec.b, 0)
    return max(spec.width, hi - lo + 1) * spec.rs.coxeter_number


def oracle_quasi(spec: ArrangementSpec, guard: int = DEFAULT_ORACLE_GUARD, threads: int = 1) -> CharQuasi:
    """Interpolate oracle counts above :func:`oracle_valid_from` with period ñ, then lcm(ñ, b - a + 1)."""
    rs = spec.rs
    start = oracle_valid_from(spec)
    periods = [rs.ehrhart_period]
    wider = math.lcm(rs.ehrhart_period, spec.width)
    if wider != periods[0]:
        periods.append(wider)
    samples: dict[int, int] = {}
    failure = None
    for n in periods:
        top = start + (rs.rank + 2) * n
        for q in range(start + 1, top + 1):
            if q not in samples:
                samples[q] = oracle_count(spec, q, guard, threads)
        try:
            quasi = interpolate_quasi(samples, n, rs.rank, start)
        except OverdeterminationFailure as exc:
            failure = exc
            continue
        quasi = quasi.minimal()
        if not quasi.gcd_property:
            raise ArithmeticError(f"{spec}: interpolated counts violate the gcd property")
        notes = {"empiricalPeriod": True} if n != rs.ehrhart_period else {}
        return CharQuasi(spec, QuasiPolynomial(quasi.period, quasi.constituents, start, f"oracle {spec}"), "oracle", notes=notes)
    raise failure


def shift_operator(rs: RootSystem, n: int, k: int) -> RationalPolynomial:
    """S^{kh} R_Φ(S^{n+1}) as a polynomial in S."""
    return RationalPolynomial.monomial(k * rs.coxeter_number) * generalized_eulerian(rs).substitute_power(n + 1)


def _formula_quasi(rs: RootSystem, n: int, k: int) -> QuasiPolynomial:
    quasi = apply_shift(shift_operator(rs, n, k), ehrhart_quasi(rs)).minimal()
    return QuasiPolynomial(quasi.period, quasi.constituents, (n + 2 * k) * rs.coxeter_number, f"[{1 - k},{n + k}]")


def shi_quasi(rs: RootSystem, k: int) -> CharQuasi:
    """(t - kh)^l for the interval [1 - k, k], checked against the operator identity."""
    if k < 1:
        raise ValueError("k must be at least 1")
    quasi = _formula_quasi(rs, 0, k)
    want = RationalPolynomial([-k * rs.coxeter_number, 1]) ** rs.rank
    if any(p != want for p in quasi.constituents):
        raise AssertionError(f"{rs}: S^(kh) R(S) Ehr is not (t - {k * rs.coxeter_number})^{rs.rank}")
    return CharQuasi(ArrangementSpec(rs, 1 - k, k), QuasiPolynomial.polynomial(want, quasi.valid_from), "formula")


def linial_quasi(rs: RootSystem, n: int, k: int = 0) -> CharQuasi:
    """χ_quasi for [1 - k, n + k] as S^{kh} R_Φ(S^{n+1}) applied to Ehr_Ā."""
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    return CharQuasi(ArrangementSpec(rs, 1 - k, n + k), _formula_quasi(rs, n, k), "formula")


def catalan_char_poly(rs: RootSystem, k: int) -> RationalPolynomial:
    """prod (t - e_i - kh)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return RationalPolynomial.from_roots(e + k * rs.coxeter_number for e in rs.exponents)


def catalan_quasi(rs: RootSystem, k: int) -> CharQuasi:
    """(|W|/f) Ehr_Ā(q - (k+1)h) for [-k, k]; k = 0 is the Coxeter arrangement.

    Points of the torus off every hyperplane lie in free W-orbits, one
    representative per point of qĀ at distance more than k from each facet.
    """
    h = rs.coxeter_number
    quasi = apply_shift(RationalPolynomial.monomial((k + 1) * h), ehrhart_quasi(rs)).scale(rs.alcove_count).minimal()
    quasi = QuasiPolynomial(quasi.period, quasi.constituents, k * h, f"[{-k},{k}]")
    if quasi.constituent(1) != catalan_char_poly(rs, k):
        raise AssertionError(f"{rs}: coprime constituent differs from prod (t - e_i - {k}h)")
    return CharQuasi(ArrangementSpec(rs, -k, k), quasi, "formula")


def coxeter_quasi(rs: RootSystem) -> CharQuasi:
    """(|W|/f) (-1)^l Ehr_Ā(-q), the Coxeter arrangement."""
    sign = -1 if rs.rank % 2 else 1
    eq = ehrhart_quasi(rs)
    n = eq.period
    reflected = QuasiPolynomial(n, tuple(eq.constituent(-r).reflect(0) for r in range(1, n + 1)))
    quasi = reflected.scale(sign * rs.alcove_count).minimal()
    return CharQuasi(ArrangementSpec(rs, 0, 0), QuasiPolynomial(quasi.period, quasi.constituents, 0, "[0,0]"), "formula")


def formula_quasi(spec: ArrangementSpec) -> CharQuasi | None:
    """The closed-formula route, or None for intervals no formula covers."""
    rs = spec.rs
    family = spec.family
    if family == "coxeter":
        return coxeter_quasi(rs)
    if family == "catalan":
        return catalan_quasi(rs, spec.b)
    if family == "shi":
        return shi_quasi(rs, spec.b)
    if family == "linial":
        n, k = spec.shift_parameters
        return linial_quasi(rs, n, k)
    return None


def char_quasi(spec: ArrangementSpec, oracle: bool = False, guard: int = DEFAULT_ORACLE_GUARD, threads: int = 1) -> CharQuasi:
    """The formula route when one applies (unless ``oracle``), the oracle route otherwise."""
    if not oracle:
        res = formula_quasi(spec)
        if res is not None:
            return res
    res = oracle_quasi(spec, guard, threads)
    if spec.family == "empirical":
        res.route = "empirical"
    return res


def compare_routes(
    spec: ArrangementSpec, q_max: int | None = None, guard: int = DEFAULT_ORACLE_GUARD, threads: int = 1
) -> tuple[CharQuasi, Report]:
    """Check the formula route against oracle counts at every q above the formula's threshold.

    Without ``q_max`` the oracle quasi-polynomial is interpolated and compared
    constituent by constituent as well.
    """
    rep = Report("charquasi-routes", str(spec.rs.id), {"interval": [spec.a, spec.b]})
    formula = formula_quasi(spec)
    if formula is None:
        res = char_quasi(spec, oracle=True, guard=guard, threads=threads)
        res.agreement = None
        rep.details["route"] = res.route
        return res, rep
    start = formula.quasi.valid_from
    top = q_max if q_max is not None else start + (spec.rs.rank + 2) * formula.quasi.period
    checked = []
    for q in range(start + 1, top + 1):
        got = oracle_count(spec, q, guard, threads)
        want = formula.quasi.evaluate_integer(q)
        checked.append(q)
        if got != want:
            rep.fail(q=q, oracle=got, formula=want)
    if q_max is None:
        oracle = oracle_quasi(spec, guard, threads)
        if oracle.quasi != formula.quasi:
            rep.fail(reason="constituents differ", oracle=oracle.quasi.to_json(), formula=formula.quasi.to_json())
    rep.details["q"] = [checked[0], checked[-1]] if checked else []
    formula.route = "both"
    formula.agreement = rep.passed
    return formula, rep


def _stepped_sum(top: int, step: int) -> RationalPolynomial:
    """1 + S^step + S^(2 step) + ... + S^top."""
    return RationalPolynomial([1 if j % step == 0 else 0 for j in range(top + 1)])


def classical_char_poly(rs: RootSystem, n: int, even_step: int = 1) -> RationalPolynomial | None:
    """Shift-operator closed forms of χ for [1, n] in types A, B, C, D applied to t^l; None elsewhere.

    For even n in types B, C, D the squared (resp. fourth-power) factor is
    1 + S + ... + S^n; ``even_step=2`` uses 1 + S^2 + ... + S^n instead,
    which is not even monic.
    """
    l, fam = rs.rank, rs.id.family
    S = RationalPolynomial.monomial(1)
    scale = Fraction(1, (1 + n) ** (l + 1))
    if fam == "A":
        op = _stepped_sum(n, 1) ** (l + 1)
    elif fam in "BCD":
        full = _stepped_sum(2 * n, 2)
        if n % 2:
            part = _stepped_sum(n - 1, 2)
        else:
            part = _stepped_sum(n, even_step)
        if fam in "BC":
            op = full ** (l - 1) * part**2
            if n % 2:
                op = op * S * 4
        else:
            op = full ** (l - 3) * part**4
            if n % 2:
                op = op * S * (ONE + S * S) * 8
    else:
        return None
    return apply_shift_poly(op * scale, RationalPolynomial.monomial(l))
