"""Alcove geometry: locating perturbed points, asc of alcoves, and the Worpitzky partition.

A point of the fundamental parallelepiped Π lies in the half-open alcove
A_ξ^♦ exactly when ``x - ε ρ`` lies in the open alcove A_ξ for small ε > 0.
The perturbation is carried symbolically: every root functional is a pair
``(value, slope)`` compared lexicographically, never a float.
"""
from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from .errors import CapExceeded, GuardExceeded, NonTermination
from .polycalc import RationalPolynomial, eulerian_polynomial, qbracket
from .rootsys import (
    DEFAULT_WEYL_CAP,
    RootSystem,
    WeylElement,
    asc,
    asc_distribution,
)

DEFAULT_SCAN_GUARD = 10**7
DEFAULT_HALF_OPEN_GUARD = 10**8


@dataclass(frozen=True)
class PerturbedPoint:
    """``base + ε·direction`` for an infinitesimal ε > 0, in coweight coordinates."""

    base: tuple[Fraction, ...]
    direction: tuple[Fraction, ...]

    @classmethod
    def generic(cls, base: Sequence) -> PerturbedPoint:
        """``base - ε ρ`` with ρ = sum of fundamental coweights."""
        return cls(tuple(Fraction(x) for x in base), tuple(Fraction(-1) for _ in base))

    def value(self, root: Sequence[int]) -> tuple[Fraction, Fraction]:
        return (
            sum((m * b for m, b in zip(root, self.base)), Fraction(0)),
            sum((m * d for m, d in zip(root, self.direction)), Fraction(0)),
        )


def perturbed_floor(value: Fraction, slope: Fraction) -> int:
    """The integer k with k < value + ε·slope < k + 1."""
    if value.denominator != 1:
        return math.floor(value)
    if slope == 0:
        raise ValueError("perturbation direction lies in a wall")
    return int(value) - 1 if slope < 0 else int(value)


@dataclass(frozen=True, order=True)
class AlcoveKey:
    """floors[j] = k with k < (α_j, x) < k + 1 on the alcove, α_j = j-th positive root."""

    floors: tuple[int, ...]

    def to_json(self) -> dict:
        return {str(j): k for j, k in enumerate(self.floors)}


def alcove_key_of(rs: RootSystem, p: PerturbedPoint) -> AlcoveKey:
    return AlcoveKey(tuple(perturbed_floor(*p.value(r)) for r in rs.positive_roots))


@dataclass(frozen=True)
class AffineElement:
    """The affine map obtained by applying the reflections of ``word`` left to right.

    Index 0 is the affine reflection in H_{α̃,1}; i >= 1 is the linear s_i.
    """

    rs: RootSystem
    word: tuple[int, ...]

    @cached_property
    def _matrix_and_translation(self):
        l = self.rs.rank
        M = [[Fraction(int(i == j)) for j in range(l)] for i in range(l)]
        tr = [Fraction(0)] * l
        for s in self.word:
            a, phi, shift = _reflection_data(self.rs, s)
            # x -> x - (phi·x - shift) a
            rows = [sum(phi[k] * M[k][j] for k in range(l)) for j in range(l)]
            val = sum(phi[k] * tr[k] for k in range(l)) - shift
            M = [[M[i][j] - a[i] * rows[j] for j in range(l)] for i in range(l)]
            tr = [tr[i] - a[i] * val for i in range(l)]
        return tuple(map(tuple, M)), tuple(tr)

    @property
    def linear_matrix(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._matrix_and_translation[0]

    @property
    def translation(self) -> tuple[Fraction, ...]:
        return self._matrix_and_translation[1]

    def __call__(self, p: PerturbedPoint) -> PerturbedPoint:
        M, tr = self._matrix_and_translation
        l = self.rs.rank
        base = tuple(sum(M[i][j] * p.base[j] for j in range(l)) + tr[i] for i in range(l))
        d = tuple(sum(M[i][j] * p.direction[j] for j in range(l)) for i in range(l))
        return PerturbedPoint(base, d)

    def inverse_linear_part(self) -> WeylElement:
        """Images of the simple roots under the linear part of the inverse map."""
        return WeylElement.from_word(self.rs, self.word)


def _reflection_data(rs: RootSystem, s: int):
    """(coroot a, functional phi, offset) with reflection x -> x - (phi·x - offset) a."""
    l = rs.rank
    if s == 0:
        return rs.highest_coroot, rs.marks, 1
    return rs.cartan[s - 1], tuple(int(j == s - 1) for j in range(l)), 0


def _step_bound(rs: RootSystem, x: Sequence[int], den: int) -> int:
    big = -(-max((abs(v) for v in x), default=0) // den)
    spec_bound = 10 * rs.coxeter_number * (big + 1)
    # the walk crosses each separating hyperplane once
    separating = sum(abs(sum(m * v for m, v in zip(r, x))) for r in rs.positive_roots)
    return max(spec_bound, 2 * (-(-separating // den) + len(rs.positive_roots)) + 2)


def _reduction_word(rs: RootSystem, x: list[int], d: list[int], den: int) -> tuple[int, ...]:
    """Exact reduction of the point ``x/den + ε d`` in integer arithmetic."""
    l = rs.rank
    marks, top_coroot, cartan = rs.marks, rs.highest_coroot, rs.cartan
    word = []
    bound = _step_bound(rs, x, den)
    while True:
        if len(word) > bound:
            raise NonTermination(f"{rs}: reduction exceeded {bound} steps")
        for i in range(l):
            if (x[i], d[i]) < (0, 0):
                a = cartan[i]
                xi, di = x[i], d[i]
                x = [x[j] - xi * a[j] for j in range(l)]
                d = [d[j] - di * a[j] for j in range(l)]
                word.append(i + 1)
                break
        else:
            v = sum(c * t for c, t in zip(marks, x))
            dv = sum(c * t for c, t in zip(marks, d))
            if (v, dv) > (den, 0):
                x = [x[j] - (v - den) * top_coroot[j] for j in range(l)]
                d = [d[j] - dv * top_coroot[j] for j in range(l)]
                word.append(0)
            else:
                if (v, dv) == (den, 0) or any((x[i], d[i]) == (0, 0) for i in range(l)):
                    raise ValueError("point lies on a wall; perturbation is not generic")
                return tuple(word)


def reduce_to_fundamental(rs: RootSystem, p: PerturbedPoint) -> AffineElement:
    """Fold ``p`` into the open fundamental alcove by simple and affine reflections.

    Works on integer coordinates scaled by the common denominator, so the
    whole walk is exact integer arithmetic.
    """
    den = math.lcm(*(x.denominator for x in p.base + p.direction))
    x = [int(v * den) for v in p.base]
    d = [int(v * den) for v in p.direction]
    return AffineElement(rs, _reduction_word(rs, x, d, den))


def asc_of_alcove(rs: RootSystem, p: PerturbedPoint | Sequence) -> int:
    """asc(w) where the alcove containing ``p`` is w(A°) + γ."""
    if not isinstance(p, PerturbedPoint):
        p = PerturbedPoint.generic(p)
    return asc(rs, reduce_to_fundamental(rs, p).inverse_linear_part())


def _scan_chunks(rs: RootSystem, q: int, guard: int, what: str):
    l = rs.rank
    size = q**l
    if size > guard:
        raise GuardExceeded(what, size, guard)
    inner = l - 1
    rest = (
        np.stack(np.meshgrid(*[np.arange(1, q + 1)] * inner, indexing="ij"), axis=-1).reshape(-1, inner)
        if inner
        else np.zeros((1, 0), dtype=np.int64)
    ).astype(np.int64)
    for first in range(1, q + 1):
        yield np.concatenate([np.full((len(rest), 1), first, dtype=np.int64), rest], axis=1)


_HASH_WEIGHTS = np.random.default_rng(20241014).integers(1, 2**62, size=512, dtype=np.int64)


def _keys_in_chunk(roots: np.ndarray, pts: np.ndarray, q: int):
    floors = ((pts @ roots.T) - 1) // q
    # group rows by a wrapped-integer hash, then confirm every row equals its group's representative
    with np.errstate(over="ignore"):
        hashes = floors @ _HASH_WEIGHTS[: floors.shape[1]]
    _, first, inverse, counts = np.unique(hashes, return_index=True, return_inverse=True, return_counts=True)
    if not (floors == floors[first][inverse]).all():
        raise ArithmeticError("alcove key hash collision")
    return [(tuple(int(v) for v in floors[i]), pts[i], int(c)) for i, c in zip(first, counts)]


def partition_counts(
    rs: RootSystem, q: int, guard: int = DEFAULT_HALF_OPEN_GUARD, threads: int = 1
) -> dict[AlcoveKey, tuple[int, tuple[int, ...]]]:
    """Scan qΠ ∩ Z(Φ) = {1..q}^l and group points by the half-open alcove containing them.

    Returns key -> (number of points, one representative lattice point).
    """
    roots = np.array(rs.positive_roots, dtype=np.int64)
    chunks = _scan_chunks(rs, q, guard, f"{rs} scan of {q}Π")
    with ThreadPoolExecutor(max_workers=max(threads, 1)) as pool:
        parts = list(pool.map(lambda c: _keys_in_chunk(roots, c, q), chunks))
    out: dict[AlcoveKey, list] = {}
    for part in parts:
        for floors, pt, c in part:
            slot = out.setdefault(AlcoveKey(floors), [0, tuple(int(v) for v in pt)])
            slot[0] += c
    return {k: (v[0], v[1]) for k, v in sorted(out.items())}


def worpitzky_partition(rs: RootSystem, guard: int = DEFAULT_SCAN_GUARD, threads: int = 1) -> dict[AlcoveKey, int]:
    """Every half-open alcove of Π, keyed by floors and mapped to its asc.

    Scans the dilation h + 1, at which every half-open alcove receives
    at least Ehr_Ā(1) > 0 lattice points.
    """
    q = rs.coxeter_number + 1
    groups = partition_counts(rs, q, guard, threads)
    minus_rho = [-1] * rs.rank
    return {
        key: asc(rs, WeylElement.from_word(rs, _reduction_word(rs, list(pt), minus_rho, q)))
        for key, (_, pt) in groups.items()
    }


def half_open_alcove_count(rs: RootSystem, key: AlcoveKey, q: int, guard: int = DEFAULT_HALF_OPEN_GUARD) -> int:
    """#(q A_ξ^♦ ∩ Z(Φ)) by direct scan of {1..q}^l."""
    roots = np.array(rs.positive_roots, dtype=np.int64)
    want = np.array(key.floors, dtype=np.int64)
    total = 0
    for pts in _scan_chunks(rs, q, guard, f"{rs} half-open count at q={q}"):
        floors = ((pts @ roots.T) - 1) // q
        total += int((floors == want).all(axis=1).sum())
    return total


def partition_to_json(rs: RootSystem, partition: dict[AlcoveKey, int]) -> list[dict]:
    return [{"floors": key.to_json(), "asc": a} for key, a in partition.items()]


@lru_cache(maxsize=None)
def _product_formula(rs: RootSystem) -> RationalPolynomial:
    p = eulerian_polynomial(rs.rank)
    for c in rs.marks:
        p = p * qbracket(c)
    return p


def eulerian_by_route(
    rs: RootSystem,
    route: str = "product",
    weyl_cap: int = DEFAULT_WEYL_CAP,
    scan_guard: int = DEFAULT_SCAN_GUARD,
    threads: int = 1,
) -> RationalPolynomial:
    """R_Φ(t) by one route, raising when that route is out of reach.

    ``product``: [c_1]_t ... [c_l]_t E_l(t).
    ``weyl``: (1/f) sum over W of t^asc(w); raises CapExceeded for large W.
    ``scan``: sum over half-open alcoves of Π of t^asc; raises GuardExceeded.
    """
    if route == "product":
        return _product_formula(rs)
    if route == "weyl":
        dist = asc_distribution(rs, weyl_cap)
        f = rs.index_of_connection
        coeffs = [0] * (max(dist) + 1)
        for a, n in dist.items():
            if n % f:
                raise ArithmeticError(f"{rs}: {n} elements with asc {a} is not divisible by f = {f}")
            coeffs[a] = n // f
        return RationalPolynomial(coeffs)
    if route == "scan":
        dist = Counter(worpitzky_partition(rs, scan_guard, threads).values())
        coeffs = [0] * (max(dist) + 1)
        for a, n in dist.items():
            coeffs[a] = n
        return RationalPolynomial(coeffs)
    raise ValueError(f"unknown route {route!r}")


def generalized_eulerian(rs: RootSystem, route: str = "product", **limits) -> RationalPolynomial:
    """R_Φ(t) by ``route``, falling back to the product formula past a cap or guard."""
    return generalized_eulerian_with_route(rs, route, **limits)[0]


def generalized_eulerian_with_route(rs: RootSystem, route: str = "product", **limits) -> tuple[RationalPolynomial, str]:
    try:
        return eulerian_by_route(rs, route, **limits), route
    except (CapExceeded, GuardExceeded):
        return _product_formula(rs), "product"
