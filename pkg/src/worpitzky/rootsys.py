"""Irreducible crystallographic root systems.

Roots are integer vectors in simple-root coordinates, points of V are
rational vectors in the coweight basis dual to the simple roots, so that
pairing a root with a point is a plain dot product.  Simple roots are
labelled as in Bourbaki.
"""
from __future__ import annotations

import math
import re
from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

from .errors import CapExceeded, InvalidType

DEFAULT_WEYL_CAP = 10**6

# Ehrhart period of the closed fundamental alcove and its radical.  These are
# reference constants, not derived here; ``ehrhart.check_period`` confirms
# them empirically.
_EHRHART_PERIOD = {"A": 1, "B": 2, "C": 2, "D": 2, "E6": 6, "E7": 12, "E8": 60, "F4": 12, "G2": 6}


def _radical(n: int) -> int:
    r, p = 1, 2
    while n > 1:
        if n % p == 0:
            r *= p
            while n % p == 0:
                n //= p
        p += 1
    return r


@dataclass(frozen=True, order=True)
class RootSystemId:
    family: str
    rank: int

    def __post_init__(self):
        fam, l = self.family, self.rank
        ok = (
            (fam == "A" and l >= 1)
            or (fam in "BC" and l >= 2)
            or (fam == "D" and l >= 3)
            or (fam == "E" and l in (6, 7, 8))
            or (fam == "F" and l == 4)
            or (fam == "G" and l == 2)
        )
        if len(fam) != 1 or not ok:
            raise InvalidType(f"no irreducible root system of type {fam}{l}")

    @classmethod
    def parse(cls, text: str) -> RootSystemId:
        m = re.fullmatch(r"\s*([A-Ga-g])\s*(\d+)\s*", text)
        if not m:
            raise InvalidType(f"cannot parse root system identifier {text!r}")
        return cls(m.group(1).upper(), int(m.group(2)))

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"


def _gram_matrix(rid: RootSystemId) -> list[list[Fraction]]:
    """Inner products of simple roots, long roots of squared length 2."""
    fam, l = rid.family, rid.rank
    B = [[Fraction(0)] * l for _ in range(l)]

    def bond(i, j, value):
        B[i][j] = B[j][i] = Fraction(value)

    if fam == "A":
        norms = [2] * l
        edges = [(i, i + 1, -1) for i in range(l - 1)]
    elif fam == "B":
        norms = [2] * (l - 1) + [1]
        edges = [(i, i + 1, -1) for i in range(l - 1)]
    elif fam == "C":
        norms = [1] * (l - 1) + [2]
        edges = [(i, i + 1, Fraction(-1, 2)) for i in range(l - 2)] + [(l - 2, l - 1, -1)]
    elif fam == "D":
        norms = [2] * l
        edges = [(i, i + 1, -1) for i in range(l - 2)] + [(l - 3, l - 1, -1)]
    elif fam == "E":
        norms = [2] * l
        edges = [(0, 2, -1), (1, 3, -1)] + [(i, i + 1, -1) for i in range(2, l - 1)]
    elif fam == "F":
        norms = [2, 2, 1, 1]
        edges = [(0, 1, -1), (1, 2, -1), (2, 3, Fraction(-1, 2))]
    else:  # G2, first simple root short
        norms = [Fraction(2, 3), 2]
        edges = [(0, 1, -1)]
    for i, n in enumerate(norms):
        B[i][i] = Fraction(n)
    for i, j, v in edges:
        bond(i, j, v)
    return B


@dataclass(frozen=True, eq=False)
class RootSystem:
    id: RootSystemId
    cartan: tuple[tuple[int, ...], ...]  # cartan[i][j] = <alpha_j, alpha_i^vee>
    gram: tuple[tuple[Fraction, ...], ...]
    positive_roots: tuple[tuple[int, ...], ...]
    highest_root: tuple[int, ...]
    marks: tuple[int, ...]  # c_1..c_l; c_0 = 1 is implicit
    coxeter_number: int
    exponents: tuple[int, ...]
    index_of_connection: int
    ehrhart_period: int
    ehrhart_period_radical: int

    @property
    def rank(self) -> int:
        return self.id.rank

    @property
    def root_norms(self) -> tuple[Fraction, ...]:
        return tuple(self.gram[i][i] for i in range(self.rank))

    @property
    def all_marks(self) -> tuple[int, ...]:
        """Marks c_0, c_1, ..., c_l with c_0 = 1."""
        return (1,) + self.marks

    @property
    def weyl_order(self) -> int:
        """|W| = f * l! * c_1 ... c_l."""
        return self.index_of_connection * math.factorial(self.rank) * math.prod(self.marks)

    @property
    def alcove_count(self) -> int:
        """Number of alcoves in the fundamental parallelepiped, |W|/f."""
        return math.factorial(self.rank) * math.prod(self.marks)

    @cached_property
    def highest_coroot(self) -> tuple[int, ...]:
        """The coroot of the highest root in coweight coordinates (integer Cartan numbers)."""
        v = coroot(self, self.highest_root)
        assert all(x.denominator == 1 for x in v)
        return tuple(int(x) for x in v)

    @property
    def roots(self) -> list[tuple[int, ...]]:
        return list(self.positive_roots) + [tuple(-m for m in r) for r in self.positive_roots]

    def __str__(self) -> str:
        return str(self.id)

    def __repr__(self) -> str:
        return f"RootSystem({self.id})"

    def to_dict(self) -> dict:
        return {
            "type": str(self.id),
            "rank": self.rank,
            "cartan": [list(r) for r in self.cartan],
            "rootNorms": [str(n) for n in self.root_norms],
            "positiveRoots": [list(r) for r in self.positive_roots],
            "highestRoot": list(self.highest_root),
            "marks": list(self.marks),
            "coxeterNumber": self.coxeter_number,
            "exponents": list(self.exponents),
            "indexOfConnection": self.index_of_connection,
            "weylOrder": self.weyl_order,
            "ehrhartPeriod": self.ehrhart_period,
            "ehrhartPeriodRadical": self.ehrhart_period_radical,
        }


def _det(matrix: Sequence[Sequence[int]]) -> int:
    n = len(matrix)
    M = [[Fraction(x) for x in row] for row in matrix]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            if f:
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    assert det.denominator == 1
    return int(det)


def _simple_reflection(cartan, i: int, root: Sequence[int]) -> tuple[int, ...]:
    k = sum(m * cartan[i][j] for j, m in enumerate(root))
    out = list(root)
    out[i] -= k
    return tuple(out)


def _positive_roots(cartan) -> list[tuple[int, ...]]:
    l = len(cartan)
    simple = [tuple(int(i == j) for j in range(l)) for i in range(l)]
    seen = set(simple)
    queue = deque(simple)
    while queue:
        beta = queue.popleft()
        for i in range(l):
            gamma = _simple_reflection(cartan, i, beta)
            if all(m >= 0 for m in gamma) and gamma not in seen:
                seen.add(gamma)
                queue.append(gamma)
    return sorted(seen, key=lambda r: (sum(r), r))


def exponents_from_heights(positive_roots) -> tuple[int, ...]:
    """Exponents as the partition conjugate to the height distribution of the positive roots."""
    counts = Counter(sum(r) for r in positive_roots)
    top = max(counts)
    n = [counts.get(k, 0) for k in range(1, top + 2)]
    exps = []
    for k in range(1, top + 1):
        exps += [k] * (n[k - 1] - n[k])
    return tuple(sorted(exps))


def build(rid: RootSystemId | str) -> RootSystem:
    if isinstance(rid, str):
        rid = RootSystemId.parse(rid)
    return _build(rid)


@lru_cache(maxsize=None)
def _build(rid: RootSystemId) -> RootSystem:
    gram = _gram_matrix(rid)
    l = rid.rank
    cartan = tuple(tuple(int(2 * gram[i][j] / gram[i][i]) for j in range(l)) for i in range(l))
    pos = _positive_roots(cartan)
    highest = pos[-1]
    h = sum(highest) + 1
    f = abs(_det(cartan))
    key = rid.family if rid.family in "ABCD" else str(rid)
    period = _EHRHART_PERIOD[key]
    if rid.family == "D" and l == 3:
        period = 1  # D3 = A3
    return RootSystem(
        id=rid,
        cartan=cartan,
        gram=tuple(tuple(r) for r in gram),
        positive_roots=tuple(pos),
        highest_root=highest,
        marks=tuple(highest),
        coxeter_number=h,
        exponents=exponents_from_heights(pos),
        index_of_connection=f,
        ehrhart_period=period,
        ehrhart_period_radical=_radical(period),
    )


def pairing(rs: RootSystem, root: Sequence[int], point: Sequence) -> Fraction:
    """(alpha, x) for a root in simple-root coordinates and a point in coweight coordinates."""
    return sum((Fraction(m) * t for m, t in zip(root, point)), Fraction(0))


def inner(rs: RootSystem, u: Sequence, v: Sequence) -> Fraction:
    """Euclidean inner product of two vectors given in simple-root coordinates."""
    return sum(
        (Fraction(a) * rs.gram[i][j] * b for i, a in enumerate(u) if a for j, b in enumerate(v) if b),
        Fraction(0),
    )


def coroot(rs: RootSystem, root: Sequence[int]) -> tuple[Fraction, ...]:
    """alpha^vee = 2 alpha / (alpha, alpha) in coweight coordinates."""
    norm = inner(rs, root, root)
    l = rs.rank
    return tuple(
        2 * inner(rs, [int(i == j) for i in range(l)], root) / norm for j in range(l)
    )


def simple_coroot(rs: RootSystem, i: int) -> tuple[int, ...]:
    """alpha_i^vee in coweight coordinates (1-based index); row i of the Cartan matrix."""
    if not 1 <= i <= rs.rank:
        raise IndexError(f"simple root index {i} out of range 1..{rs.rank}")
    return rs.cartan[i - 1]


def reflect_root(rs: RootSystem, i: int, root: Sequence[int]) -> tuple[int, ...]:
    """Apply s_i (0 <= i <= l; i = 0 is the linear reflection in the highest root)."""
    if i == 0:
        k = sum(m * a for m, a in zip(root, rs.highest_coroot))
        return tuple(m - k * g for m, g in zip(root, rs.highest_root))
    return _simple_reflection(rs.cartan, i - 1, root)


def is_positive(root: Sequence[int]) -> bool:
    return any(m > 0 for m in root)


@dataclass(frozen=True)
class WeylElement:
    """A Weyl group element, recorded by the images of the simple roots."""

    root_action: tuple[tuple[int, ...], ...]

    @classmethod
    def identity(cls, rank: int) -> WeylElement:
        return cls(tuple(tuple(int(i == j) for j in range(rank)) for i in range(rank)))

    def apply(self, root: Sequence[int]) -> tuple[int, ...]:
        l = len(self.root_action)
        return tuple(
            sum(m * self.root_action[i][j] for i, m in enumerate(root)) for j in range(l)
        )

    def __mul__(self, other: WeylElement) -> WeylElement:
        return WeylElement(tuple(self.apply(img) for img in other.root_action))

    @classmethod
    def from_word(cls, rs: RootSystem, word: Sequence[int]) -> WeylElement:
        """The product s_{w0} s_{w1} ... (rightmost factor acts first); indices 0..l."""
        M = np.eye(rs.rank, dtype=np.int64)  # column j holds the image of alpha_j
        roots, pairings = _reflection_vectors(rs)
        for s in word:
            M -= (M @ roots[s])[:, None] * pairings[s]
        return cls(tuple(tuple(int(v) for v in M[:, j]) for j in range(rs.rank)))


@lru_cache(maxsize=None)
def _reflection_vectors(rs: RootSystem) -> tuple[list[np.ndarray], list[np.ndarray]]:
    # s_i(beta) = beta - <beta, a_i^vee> a_i, with a_0 the highest root
    roots = [np.array(rs.highest_root, dtype=np.int64)]
    pairings = [np.array(rs.highest_coroot, dtype=np.int64)]
    for i in range(rs.rank):
        roots.append(np.array([int(i == j) for j in range(rs.rank)], dtype=np.int64))
        pairings.append(np.array(rs.cartan[i], dtype=np.int64))
    return roots, pairings


def _ascent_descent(rs: RootSystem, images: Sequence[Sequence[int]]) -> tuple[int, int]:
    asc = dsc = 0
    for c, img in zip(rs.marks, images):
        if is_positive(img):
            asc += c
        else:
            dsc += c
    # w(alpha_0) = -w(highest root)
    w_top = [sum(c * img[j] for c, img in zip(rs.marks, images)) for j in range(rs.rank)]
    if is_positive(w_top):
        dsc += 1
    else:
        asc += 1
    return asc, dsc


def asc(rs: RootSystem, w: WeylElement) -> int:
    """Sum of c_i over 0 <= i <= l with w(alpha_i) > 0."""
    return _ascent_descent(rs, w.root_action)[0]


def dsc(rs: RootSystem, w: WeylElement) -> int:
    return _ascent_descent(rs, w.root_action)[1]


def longest_element(rs: RootSystem) -> WeylElement:
    """w_0, found by descending to the unique element sending every simple root negative."""
    w = WeylElement.identity(rs.rank)
    while True:
        for i in range(1, rs.rank + 1):
            if is_positive(w.apply(tuple(int(j == i - 1) for j in range(rs.rank)))):
                w = w * WeylElement.from_word(rs, [i])
                break
        else:
            return w


def _weyl_matrices(rs: RootSystem, cap: int) -> list[np.ndarray]:
    if rs.weyl_order > cap:
        raise CapExceeded(rs.weyl_order, cap)
    l = rs.rank
    # column i of a matrix holds w(alpha_i); right multiplication by s_j
    gens = []
    for j in range(l):
        S = np.eye(l, dtype=np.int64)
        S[j, :] -= np.array(rs.cartan[j], dtype=np.int64)
        gens.append(S)
    ident = np.eye(l, dtype=np.int64)
    seen = {ident.tobytes()}
    out = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for M in frontier:
            for S in gens:
                P = M @ S
                k = P.tobytes()
                if k not in seen:
                    seen.add(k)
                    if len(seen) > cap:
                        raise CapExceeded(rs.weyl_order, cap)
                    out.append(P)
                    nxt.append(P)
        frontier = nxt
    return out


def enumerate_weyl(rs: RootSystem, cap: int = DEFAULT_WEYL_CAP) -> list[WeylElement]:
    """All of W by breadth-first closure under right multiplication by simple reflections."""
    return [
        WeylElement(tuple(tuple(int(x) for x in M[:, i]) for i in range(rs.rank)))
        for M in _weyl_matrices(rs, cap)
    ]


def asc_distribution(rs: RootSystem, cap: int = DEFAULT_WEYL_CAP) -> Counter:
    """Counter of asc(w) over all w in W (vectorised over the enumerated group)."""
    mats = np.stack(_weyl_matrices(rs, cap))  # (|W|, l, l), columns are images
    marks = np.array(rs.marks, dtype=np.int64)
    simple_pos = (mats > 0).any(axis=1)  # (|W|, l)
    top = mats @ marks  # w(highest root)
    alpha0_pos = ~(top > 0).any(axis=1)
    values = simple_pos.astype(np.int64) @ marks + alpha0_pos.astype(np.int64)
    return Counter(int(v) for v in values)


def validate(rs: RootSystem, weyl_cap: int = DEFAULT_WEYL_CAP) -> list[str]:
    """Return the list of violated structural invariants (empty when all hold)."""
    problems = []
    l, h = rs.rank, rs.coxeter_number
    if tuple(rs.highest_root) != tuple(rs.marks):
        problems.append("highest root is not sum c_i alpha_i")
    if 1 + sum(rs.marks) != h:
        problems.append("c_0 + ... + c_l != h")
    if 2 * len(rs.positive_roots) != l * h:
        problems.append("|Phi+| != l h / 2")
    if abs(_det(rs.cartan)) != rs.index_of_connection:
        problems.append("f != |det C|")
    e = rs.exponents
    if len(e) != l or any(e[i] + e[l - 1 - i] != h for i in range(l)):
        problems.append("exponents fail e_i + e_{l-i+1} = h")
    if h % rs.ehrhart_period_radical:
        problems.append("rad(period) does not divide h")
    roots = set(rs.roots)
    for i in range(l + 1):
        if any(reflect_root(rs, i, r) not in roots for r in roots):
            problems.append(f"s_{i} does not permute Phi")
    for i in range(1, l + 1):
        a_i = tuple(int(j == i - 1) for j in range(l))
        for r in rs.positive_roots:
            if r != a_i and not is_positive(reflect_root(rs, i, r)):
                problems.append(f"s_{i} sends a positive root other than alpha_{i} negative")
                break
    if rs.weyl_order <= weyl_cap:
        n = len(_weyl_matrices(rs, weyl_cap))
        if n != rs.weyl_order:
            problems.append(f"enumerated |W| = {n} != f l! prod c_i = {rs.weyl_order}")
    return problems
