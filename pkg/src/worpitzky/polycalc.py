"""Exact univariate polynomials, quasi-polynomials and the shift operator.

Polynomials are dense tuples of :class:`fractions.Fraction`, lowest degree
first.  The same class serves for polynomials in ``t`` and for operator
polynomials in the shift symbol ``S``, where ``(S f)(t) = f(t - 1)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import OverdeterminationFailure

Number = int | Fraction


def _trim(coeffs: Iterable) -> tuple[Fraction, ...]:
    c = [Fraction(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class RationalPolynomial:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        object.__setattr__(self, "coeffs", _trim(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("RationalPolynomial is immutable")

    # construction
    @classmethod
    def constant(cls, c: Number) -> RationalPolynomial:
        return cls([c])

    @classmethod
    def monomial(cls, degree: int, c: Number = 1) -> RationalPolynomial:
        return cls([0] * degree + [c])

    @classmethod
    def from_roots(cls, roots: Iterable[Number], lead: Number = 1) -> RationalPolynomial:
        p = cls([lead])
        for r in roots:
            p = p * cls([-Fraction(r), 1])
        return p

    # basic queries
    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.leading == 1

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == _trim([other])
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    # ring operations
    def __add__(self, other) -> RationalPolynomial:
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return RationalPolynomial(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> RationalPolynomial:
        return RationalPolynomial(-c for c in self.coeffs)

    def __sub__(self, other) -> RationalPolynomial:
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> RationalPolynomial:
        return _as_poly(other) - self

    def __mul__(self, other) -> RationalPolynomial:
        if isinstance(other, (int, Fraction)):
            return RationalPolynomial(c * other for c in self.coeffs)
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return RationalPolynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RationalPolynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, c: Number) -> RationalPolynomial:
        return RationalPolynomial(x / Fraction(c) for x in self.coeffs)

    def __pow__(self, n: int) -> RationalPolynomial:
        out = RationalPolynomial([1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other: RationalPolynomial) -> tuple[RationalPolynomial, RationalPolynomial]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        d = other.degree
        quot = [Fraction(0)] * max(len(rem) - d, 0)
        for k in range(len(rem) - 1, d - 1, -1):
            c = rem[k] / other.leading
            if c:
                quot[k - d] = c
                for j, b in enumerate(other.coeffs):
                    rem[k - d + j] -= c * b
        return RationalPolynomial(quot), RationalPolynomial(rem[:d] if d > 0 else [])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    # evaluation and composition
    def __call__(self, x):
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    evaluate = __call__

    def evaluate_integer(self, q: int) -> int:
        """Evaluate at an integer and insist the value is an integer."""
        v = self(Fraction(q))
        if v.denominator != 1:
            raise ValueError(f"value {v} at {q} is not an integer")
        return v.numerator

    def compose(self, inner: RationalPolynomial) -> RationalPolynomial:
        out = RationalPolynomial()
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out

    def shift(self, c: Number) -> RationalPolynomial:
        """p(t + c)."""
        c = Fraction(c)
        if c == 0 or self.degree < 1:
            return self
        out = [Fraction(0)] * len(self.coeffs)
        for i, a in enumerate(self.coeffs):
            if a:
                for j in range(i + 1):
                    out[j] += a * math.comb(i, j) * c ** (i - j)
        return RationalPolynomial(out)

    def reflect(self, c: Number) -> RationalPolynomial:
        """p(c - t)."""
        return RationalPolynomial(a * (-1) ** i for i, a in enumerate(self.coeffs)).shift(-Fraction(c))

    def substitute_power(self, m: int) -> RationalPolynomial:
        """p(t^m)."""
        out = [Fraction(0)] * (m * self.degree + 1) if self.coeffs else []
        for i, a in enumerate(self.coeffs):
            out[m * i] = a
        return RationalPolynomial(out)

    def reciprocal(self, n: int) -> RationalPolynomial:
        """t^n p(1/t); requires n >= degree."""
        if n < self.degree:
            raise ValueError("reciprocal degree below polynomial degree")
        return RationalPolynomial(self[n - k] for k in range(n + 1))

    def derivative(self) -> RationalPolynomial:
        return RationalPolynomial(k * c for k, c in enumerate(self.coeffs) if k)

    def monic(self) -> RationalPolynomial:
        return self / self.leading

    def gcd(self, other: RationalPolynomial) -> RationalPolynomial:
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def squarefree_factors(self) -> list[tuple[RationalPolynomial, int]]:
        """Yun's algorithm: [(g, k)] with self = lc * prod g^k, each g monic and squarefree."""
        f = self.monic()
        df = f.derivative()
        a = f.gcd(df)
        b = f // a
        d = df // a - b.derivative()
        out, k = [], 1
        while b.degree > 0:
            g = b.gcd(d)
            b = b // g
            d = d // g - b.derivative()
            if g.degree > 0:
                out.append((g, k))
            k += 1
        return out

    # output
    def to_string(self, var: str = "t", ascending: bool = False) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        order = range(len(self.coeffs)) if ascending else range(len(self.coeffs) - 1, -1, -1)
        for k in order:
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            if not mono:
                body = _fmt_coeff(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{_fmt_coeff(mag)}*{mono}"
            terms.append(("-" if c < 0 else "+", body))
        sign, body = terms[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"RationalPolynomial({self.to_string()!r})"

    def to_json(self) -> dict:
        return {"num": [c.numerator for c in self.coeffs], "den": [c.denominator for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: Mapping) -> RationalPolynomial:
        return cls(Fraction(n, d) for n, d in zip(data["num"], data["den"]))

    def factored(self, var: str = "t") -> str:
        """Display form with integer linear factors pulled out, e.g. ``(t-5)*(t-7)``.

        Float roots only propose candidates; every factor is confirmed by
        exact division.
        """
        if self.degree < 1:
            return self.to_string(var)
        rest = self.monic()
        found: dict[int, int] = {}
        candidates = sorted({int(round(z.real)) for z in np.roots([float(c) for c in reversed(rest.coeffs)])})
        for r in candidates:
            lin = RationalPolynomial([-r, 1])
            while rest.degree >= 1 and rest(Fraction(r)) == 0:
                rest = rest // lin
                found[r] = found.get(r, 0) + 1
        parts = []
        for r, mult in sorted(found.items()):
            base = var if r == 0 else f"({var}{'-' if r > 0 else '+'}{abs(r)})"
            parts.append(base if mult == 1 else f"{base}^{mult}")
        if rest.degree >= 1:
            parts.append(f"({rest.to_string(var)})")
        lead = self.leading
        text = "*".join(parts)
        if lead != 1:
            text = ("-" if lead == -1 else f"{_fmt_coeff(lead)}*") + text
        return text


def _as_poly(x) -> RationalPolynomial:
    if isinstance(x, RationalPolynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return RationalPolynomial([x])
    raise TypeError(f"cannot treat {type(x).__name__} as a polynomial")


T = RationalPolynomial([0, 1])
ONE = RationalPolynomial([1])
ZERO = RationalPolynomial()


def interpolate(xs: Sequence[Number], ys: Sequence[Number]) -> RationalPolynomial:
    """Exact Lagrange interpolation through (x_i, y_i) via Newton divided differences."""
    xs = [Fraction(x) for x in xs]
    dd = [Fraction(y) for y in ys]
    n = len(xs)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j])
    p = RationalPolynomial([dd[-1]])
    for i in range(n - 2, -1, -1):
        p = p * RationalPolynomial([-xs[i], 1]) + dd[i]
    return p


def qbracket(c: int) -> RationalPolynomial:
    """[c]_t = 1 + t + ... + t^(c-1)."""
    if c < 1:
        raise ValueError("q-bracket needs c >= 1")
    return RationalPolynomial([1] * c)


@lru_cache(maxsize=None)
def eulerian_numbers(n: int) -> tuple[int, ...]:
    """A(n, 1..n) from A(n, k) = k A(n-1, k) + (n-k+1) A(n-1, k-1)."""
    if n < 1:
        raise ValueError("Eulerian numbers need n >= 1")
    row = [1]
    for m in range(2, n + 1):
        prev = [0] + row + [0]
        row = [k * prev[k] + (m - k + 1) * prev[k - 1] for k in range(1, m + 1)]
    return tuple(row)


def eulerian_polynomial(n: int) -> RationalPolynomial:
    """E_n(t) = sum_k A(n, k) t^k."""
    return RationalPolynomial([0, *eulerian_numbers(n)])


def alcove_polynomial_type_a(n: int) -> RationalPolynomial:
    """(t + 1)(t + 2)...(t + n) / n!."""
    return RationalPolynomial.from_roots(range(-1, -n - 1, -1), Fraction(1, math.factorial(n)))


@dataclass(frozen=True)
class QuasiPolynomial:
    """A function on the integers given by one polynomial per residue class.

    ``constituents[r - 1]`` is used for arguments congruent to ``r`` modulo
    ``period`` (so the residue-0 constituent sits last).  The
    quasi-polynomial is claimed to describe its counting function only for
    arguments greater than ``valid_from``; identities are checked on
    constituents, independent of that threshold.
    """

    period: int
    constituents: tuple[RationalPolynomial, ...]
    valid_from: int = 0
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if self.period < 1 or len(self.constituents) != self.period:
            raise ValueError("need exactly one constituent per residue")
        object.__setattr__(self, "constituents", tuple(self.constituents))

    @classmethod
    def polynomial(cls, p: RationalPolynomial, valid_from: int = 0) -> QuasiPolynomial:
        return cls(1, (p,), valid_from)

    def constituent(self, q: int) -> RationalPolynomial:
        return self.constituents[(q - 1) % self.period]

    def __call__(self, q: int) -> Fraction:
        return self.constituent(q)(Fraction(q))

    def evaluate_integer(self, q: int) -> int:
        return self.constituent(q).evaluate_integer(q)

    @property
    def degree(self) -> int:
        return max(p.degree for p in self.constituents)

    @property
    def gcd_property(self) -> bool:
        n = self.period
        by_gcd: dict[int, RationalPolynomial] = {}
        for r in range(1, n + 1):
            g = math.gcd(r, n)
            if by_gcd.setdefault(g, self.constituents[r - 1]) != self.constituents[r - 1]:
                return False
        return True

    def lift(self, period: int) -> QuasiPolynomial:
        if period % self.period:
            raise ValueError(f"cannot lift period {self.period} to {period}")
        return QuasiPolynomial(
            period, tuple(self.constituent(r) for r in range(1, period + 1)), self.valid_from, self.label
        )

    def minimal(self) -> QuasiPolynomial:
        """The same function presented with its smallest constituent period."""
        for d in sorted(k for k in range(1, self.period + 1) if self.period % k == 0):
            if all(self.constituents[r] == self.constituents[r % d] for r in range(self.period)):
                return QuasiPolynomial(d, self.constituents[:d], self.valid_from, self.label)
        return self

    def distinct_constituents(self) -> int:
        return len(set(self.constituents))

    def __eq__(self, other) -> bool:
        return quasi_equal(self, other) if isinstance(other, QuasiPolynomial) else NotImplemented

    def __hash__(self):
        m = self.minimal()
        return hash((m.period, m.constituents))

    def __add__(self, other: QuasiPolynomial) -> QuasiPolynomial:
        n = math.lcm(self.period, other.period)
        a, b = self.lift(n), other.lift(n)
        return QuasiPolynomial(
            n, tuple(x + y for x, y in zip(a.constituents, b.constituents)), max(self.valid_from, other.valid_from)
        )

    def scale(self, c: Number) -> QuasiPolynomial:
        return QuasiPolynomial(self.period, tuple(p * Fraction(c) for p in self.constituents), self.valid_from)

    def to_json(self, var: str = "t") -> dict:
        return {
            "period": self.period,
            "constituents": [p.to_string(var) for p in self.constituents],
            "validFrom": self.valid_from,
        }


def quasi_equal(f: QuasiPolynomial, g: QuasiPolynomial) -> bool:
    n = math.lcm(f.period, g.period)
    return f.lift(n).constituents == g.lift(n).constituents


def quasi_reflect(f: QuasiPolynomial, c: int) -> QuasiPolynomial:
    """q -> f(c - q)."""
    n = f.period
    return QuasiPolynomial(
        n, tuple(f.constituent(c - r).reflect(c) for r in range(1, n + 1)), f.valid_from, f.label
    )


def quasi_negate_sign(f: QuasiPolynomial, ell: int) -> QuasiPolynomial:
    """q -> (-1)^ell f(q)."""
    return f.scale(-1 if ell % 2 else 1)


def quasi_shift(f: QuasiPolynomial, k: int) -> QuasiPolynomial:
    """q -> f(q - k)."""
    return apply_shift(RationalPolynomial.monomial(k), f)


def apply_shift(p: RationalPolynomial, f: QuasiPolynomial) -> QuasiPolynomial:
    """(p(S) f)(q) = sum_k a_k f(q - k), constituent by constituent."""
    n = f.period
    out = []
    shifted: dict[tuple[int, int], RationalPolynomial] = {}
    for r in range(1, n + 1):
        acc = ZERO
        for k, a in enumerate(p.coeffs):
            if not a:
                continue
            key = ((r - k - 1) % n, k)
            g = shifted.get(key)
            if g is None:
                g = shifted[key] = f.constituents[key[0]].shift(-k)
            acc = acc + g * a
        out.append(acc)
    return QuasiPolynomial(n, tuple(out), f.valid_from + max(p.degree, 0), f.label)


def apply_shift_poly(p: RationalPolynomial, f: RationalPolynomial) -> RationalPolynomial:
    return apply_shift(p, QuasiPolynomial.polynomial(f)).constituents[0]


def is_annihilated(g: RationalPolynomial, f: RationalPolynomial) -> bool:
    """True iff (g(S) f)(t) is the zero polynomial."""
    return apply_shift_poly(g, f).is_zero()


def interpolate_quasi(
    samples: Mapping[int, Number], period: int, degree: int, valid_from: int = 0
) -> QuasiPolynomial:
    """Fit one degree-``degree`` polynomial per residue, demanding one spare sample per residue.

    Raises :class:`OverdeterminationFailure` at the first sample a fit does
    not reproduce.
    """
    constituents = []
    for r in range(1, period + 1):
        qs = sorted(q for q in samples if q > valid_from and (q - r) % period == 0)
        if len(qs) < degree + 2:
            raise ValueError(
                f"residue {r} mod {period}: {len(qs)} samples above {valid_from}, need {degree + 2}"
            )
        fit_at = qs[: degree + 1]
        p = interpolate(fit_at, [samples[q] for q in fit_at])
        for q in qs[degree + 1 :]:
            v = p(Fraction(q))
            if v != samples[q]:
                raise OverdeterminationFailure(r, q, v, samples[q])
        constituents.append(p)
    return QuasiPolynomial(period, tuple(constituents), valid_from)
