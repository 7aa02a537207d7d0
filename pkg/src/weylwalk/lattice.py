"""Classical root systems realized in the standard basis eps_1..eps_D.

Weights are exact: every coordinate is a :class:`fractions.Fraction`.  All
objects here are immutable, so results may be cached and shared freely.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction as Q
from functools import cached_property, lru_cache
from math import factorial
from typing import Iterator, Sequence

from .errors import GroupCapExceeded, NotInRootSpan, OrbitCapExceeded, UnsupportedType

ORBIT_CAP = 10**6
GROUP_CAP = 10**6

Matrix = tuple[tuple[Q, ...], ...]


class Weight(tuple):
    """Point of the weight lattice as a tuple of exact rational coordinates.

    Arithmetic is vector arithmetic (``+`` does not concatenate).  Equality,
    hashing and ordering are those of the underlying tuple, so weights are
    usable as dict keys and sort lexicographically.
    """

    __slots__ = ()

    def __new__(cls, coords: Sequence) -> "Weight":
        return super().__new__(cls, (c if isinstance(c, Q) else Q(c) for c in coords))

    @classmethod
    def zero(cls, dim: int) -> "Weight":
        return cls((0,) * dim)

    def __add__(self, other):  # type: ignore[override]
        return Weight(a + b for a, b in zip(self, other, strict=True))

    def __sub__(self, other):
        return Weight(a - b for a, b in zip(self, other, strict=True))

    def __neg__(self):
        return Weight(-a for a in self)

    def __mul__(self, k):  # type: ignore[override]
        return Weight(a * k for a in self)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self)

    def __repr__(self) -> str:
        return f"Weight({format_weight(self)})"


def format_weight(v: Sequence[Q]) -> str:
    """Serialize as comma separated reduced rationals, e.g. ``1/2,1/2,-1/2``."""
    return ",".join(str(c) for c in v)


def parse_weight(text: str) -> Weight:
    return Weight(Q(t.strip()) for t in text.split(",") if t.strip())


def dot(x: Sequence[Q], y: Sequence[Q]) -> Q:
    if len(x) != len(y):
        raise ValueError("dimension mismatch")
    return sum((a * b for a, b in zip(x, y)), Q(0))


def _unit(i: int, dim: int, k=1) -> Weight:
    v = [Q(0)] * dim
    v[i] = Q(k)
    return Weight(v)


def solve_rational(a: Sequence[Sequence[Q]], b: Sequence[Q]) -> list[Q]:
    """Solve the square system ``a x = b`` exactly by Gauss-Jordan elimination."""
    n = len(a)
    m = [[Q(v) for v in row] + [Q(rhs)] for row, rhs in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [v / p for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [u - f * w for u, w in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def invert_rational(a: Sequence[Sequence[Q]]) -> list[list[Q]]:
    n = len(a)
    cols = [solve_rational(a, [Q(int(i == j)) for i in range(n)]) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def _reflect(v: Weight, alpha: Weight, alpha_sq: Q) -> Weight:
    c = 2 * dot(v, alpha) / alpha_sq
    if c == 0:
        return v
    return v - alpha * c


# ---------------------------------------------------------------------------
# realizations

def _classical_simple_roots(family: str, d: int) -> tuple[int, list[Weight]]:
    if family == "A":
        dim = d + 1
        return dim, [_unit(i, dim) - _unit(i + 1, dim) for i in range(d)]
    dim = d
    chain = [_unit(i, dim) - _unit(i + 1, dim) for i in range(d - 1)]
    if family == "B":
        last = _unit(d - 1, dim)
    elif family == "C":
        last = _unit(d - 1, dim, 2)
    else:  # D
        last = _unit(d - 2, dim) + _unit(d - 1, dim)
    return dim, chain + [last]


def _e_simple_roots(d: int) -> tuple[int, list[Weight]]:
    # Bourbaki E8 base; E6 and E7 keep the first 6 and 7 roots.
    h = Q(1, 2)
    e = lambda i: _unit(i - 1, 8)  # noqa: E731
    roots = [
        Weight([h, -h, -h, -h, -h, -h, -h, h]),
        e(1) + e(2),
        e(2) - e(1),
        e(3) - e(2),
        e(4) - e(3),
        e(5) - e(4),
        e(6) - e(5),
        e(7) - e(6),
    ]
    return 8, roots[:d]


_RANK_MIN = {"A": 1, "B": 2, "C": 2, "D": 3}


def weyl_group_order(family: str, rank: int) -> int:
    if family == "A":
        return factorial(rank + 1)
    if family in ("B", "C"):
        return 2**rank * factorial(rank)
    if family == "D":
        return 2 ** (rank - 1) * factorial(rank)
    return {"E6": 51840, "E7": 2903040}[family]


def positive_root_count(family: str, rank: int) -> int:
    if family == "A":
        return rank * (rank + 1) // 2
    if family in ("B", "C"):
        return rank * rank
    if family == "D":
        return rank * (rank - 1)
    return {"E6": 36, "E7": 63}[family]


def normalize_family(family: str, rank: int | None = None) -> tuple[str, int]:
    """Accept ``("B", 3)``, ``("B3", None)`` or ``("E", 6)`` style labels."""
    fam = family.strip().upper()
    if len(fam) > 1 and fam[1:].isdigit():
        r = int(fam[1:])
        if rank is not None and rank != r:
            raise UnsupportedType(f"rank mismatch: {family} vs {rank}")
        fam, rank = fam[0], r
    if rank is None:
        raise UnsupportedType(f"missing rank for family {family!r}")
    if fam == "E":
        fam = f"E{rank}"
    return fam, int(rank)


@dataclass(frozen=True, eq=False)
class RootSystem:
    family: str
    rank: int
    ambient_dim: int
    simple_roots: tuple[Weight, ...]
    positive_roots: tuple[Weight, ...]
    fundamental_weights: tuple[Weight, ...]
    cartan_data: tuple[tuple[Q, ...], ...] = field(repr=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RootSystem):
            return NotImplemented
        return (self.family, self.rank) == (other.family, other.rank)

    def __hash__(self) -> int:
        return hash((self.family, self.rank))

    @property
    def label(self) -> str:
        return self.family if self.family.startswith("E") else f"{self.family}{self.rank}"

    @cached_property
    def _norms(self) -> tuple[Q, ...]:
        return tuple(dot(a, a) for a in self.simple_roots)

    @cached_property
    def gram(self) -> tuple[tuple[Q, ...], ...]:
        S = self.simple_roots
        return tuple(tuple(dot(a, b) for b in S) for a in S)

    @cached_property
    def gram_inverse(self) -> tuple[tuple[Q, ...], ...]:
        return tuple(tuple(r) for r in invert_rational(self.gram))

    @cached_property
    def cartan_matrix(self) -> tuple[tuple[int, ...], ...]:
        """Entry ``[i][j]`` is the coroot pairing of alpha_j against alpha_i."""
        S = self.simple_roots
        return tuple(
            tuple(int(2 * dot(S[j], S[i]) / self._norms[i]) for j in range(self.rank))
            for i in range(self.rank)
        )

    @cached_property
    def rho(self) -> Weight:
        return sum(self.positive_roots, Weight.zero(self.ambient_dim)) * Q(1, 2)

    @cached_property
    def weyl_order(self) -> int:
        return weyl_group_order(self.family, self.rank)

    def coroot_pairing(self, v: Sequence[Q], i: int) -> Q:
        return 2 * dot(v, self.simple_roots[i]) / self._norms[i]

    def labels(self, v: Sequence[Q]) -> tuple[int, ...]:
        """Coroot pairings <v, alpha_i^vee> (Dynkin labels); integers on P."""
        out = []
        for i in range(self.rank):
            c = self.coroot_pairing(v, i)
            if c.denominator != 1:
                raise ValueError(f"{format_weight(v)} is not in the weight lattice")
            out.append(int(c))
        return tuple(out)

    def central_part(self, v: Sequence[Q]) -> Q:
        """Coordinate sum; the only data lost by :meth:`labels` in type A."""
        return sum(v, Q(0))

    def from_labels(self, labels: Sequence[int], central: Q | int | None = None) -> Weight:
        v = Weight.zero(self.ambient_dim)
        for c, w in zip(labels, self.fundamental_weights):
            if c:
                v = v + w * c
        if self.family == "A" and central is not None:
            shift = (Q(central) - sum(v, Q(0))) / self.ambient_dim
            v = v + Weight([shift] * self.ambient_dim)
        return v

    def reflection_matrix(self, i: int) -> Matrix:
        a = self.simple_roots[i]
        n = self._norms[i]
        D = self.ambient_dim
        return tuple(
            tuple(Q(int(r == c)) - 2 * a[r] * a[c] / n for c in range(D)) for r in range(D)
        )


def _dominant_regular(family: str, dim: int, omegas: Sequence[Weight]) -> Weight:
    return sum(omegas, Weight.zero(dim))


@lru_cache(maxsize=None)
def build_root_system(family: str, rank: int | None = None) -> RootSystem:
    """Standard realization of a simple type admitting a minuscule weight.

    Type A uses the gl_{d+1} lattice Z^{d+1} with omega_i = eps_1 + ... + eps_i.
    """
    fam, d = normalize_family(family, rank)
    if fam in ("E8", "F", "G", "F4", "G2") or fam[0] in "FG":
        raise UnsupportedType(f"type {fam}{'' if fam.startswith('E') else d} has no minuscule weight")
    if fam in _RANK_MIN:
        if d < _RANK_MIN[fam]:
            raise UnsupportedType(f"rank {d} invalid for family {fam}")
        dim, simple = _classical_simple_roots(fam, d)
    elif fam in ("E6", "E7"):
        dim, simple = _e_simple_roots(d)
    else:
        raise UnsupportedType(f"unsupported family {family!r}")

    norms = [dot(a, a) for a in simple]
    gram = [[dot(a, b) for b in simple] for a in simple]
    if fam == "A":
        omegas = [sum((_unit(j, dim) for j in range(i + 1)), Weight.zero(dim)) for i in range(d)]
    else:
        # omega_i lies in span(S) with 2<omega_i, alpha_j>/<alpha_j, alpha_j> = delta_ij
        omegas = []
        for i in range(d):
            rhs = [norms[j] / 2 if j == i else Q(0) for j in range(d)]
            coeff = solve_rational(gram, rhs)
            omegas.append(sum((a * c for a, c in zip(simple, coeff)), Weight.zero(dim)))
    cartan = tuple(
        tuple(2 * dot(omegas[i], simple[j]) / norms[j] for j in range(d)) for i in range(d)
    )

    # positive roots: W-orbits of the simple roots, kept when in the nonnegative cone
    roots: set[Weight] = set()
    for a in simple:
        roots |= _orbit(a, simple, norms, cap=ORBIT_CAP)
    gram_inv = invert_rational(gram)
    positive = []
    for r in roots:
        c = _decompose(r, simple, gram_inv)
        if all(x >= 0 for x in c):
            positive.append(r)
    positive.sort(reverse=True)
    rs = RootSystem(fam, d, dim, tuple(simple), tuple(positive), tuple(omegas), cartan)
    if len(positive) != positive_root_count(fam, d):
        raise AssertionError(f"positive root count mismatch for {rs.label}")
    return rs


def _orbit(v: Weight, simple, norms, cap: int) -> set[Weight]:
    seen = {v}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        for a, n in zip(simple, norms):
            w = _reflect(u, a, n)
            if w not in seen:
                seen.add(w)
                if len(seen) > cap:
                    raise OrbitCapExceeded(f"orbit exceeds cap {cap}")
                queue.append(w)
    return seen


def _decompose(v: Sequence[Q], simple, gram_inv) -> list[Q]:
    rhs = [dot(a, v) for a in simple]
    return [sum((g * r for g, r in zip(row, rhs)), Q(0)) for row in gram_inv]


# ---------------------------------------------------------------------------
# operations

def is_dominant(rs: RootSystem, v: Sequence[Q]) -> bool:
    return all(dot(v, a) >= 0 for a in rs.simple_roots)


def simple_reflection(rs: RootSystem, i: int, v: Weight) -> Weight:
    """Reflect ``v`` through the wall of the simple root alpha_i (1-based ``i``)."""
    if not 1 <= i <= rs.rank:
        raise IndexError(f"simple root index {i} out of range 1..{rs.rank}")
    return _reflect(Weight(v), rs.simple_roots[i - 1], rs._norms[i - 1])


def weyl_orbit(rs: RootSystem, v: Sequence[Q], cap: int = ORBIT_CAP) -> frozenset[Weight]:
    return frozenset(_orbit(Weight(v), rs.simple_roots, rs._norms, cap))


def _matvec(m: Matrix, v: Sequence[Q]) -> Weight:
    return Weight(dot(row, v) for row in m)


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(dot(row, col) for col in cols) for row in a)


def enumerate_weyl(rs: RootSystem, cap: int = GROUP_CAP) -> Iterator[tuple[Matrix, int]]:
    """Yield every Weyl group element once as ``(matrix, sign)``.

    Elements are discovered by breadth-first search on words in the simple
    reflections; duplicates are detected through the image of a regular
    dominant vector.  BFS depth is the length, so ``sign = (-1)**depth``.
    """
    if rs.weyl_order > cap:
        raise GroupCapExceeded(f"|W({rs.label})| = {rs.weyl_order} exceeds cap {cap}")
    D = rs.ambient_dim
    g = _dominant_regular(rs.family, D, rs.fundamental_weights)
    ident: Matrix = tuple(tuple(Q(int(r == c)) for c in range(D)) for r in range(D))
    refl = [rs.reflection_matrix(i) for i in range(rs.rank)]
    seen = {g}
    frontier = [ident]
    sign = 1
    while frontier:
        nxt = []
        for m in frontier:
            yield m, sign
            for s in refl:
                w = _matmul(s, m)
                key = _matvec(w, g)
                if key not in seen:
                    seen.add(key)
                    nxt.append(w)
        frontier = nxt
        sign = -sign


def apply(m: Matrix, v: Sequence[Q]) -> Weight:
    return _matvec(m, v)


def decompose_in_simple_roots(rs: RootSystem, v: Sequence[Q]) -> tuple[Q, ...]:
    """Exact coefficients c with sum c_i alpha_i = v."""
    c = _decompose(v, rs.simple_roots, rs.gram_inverse)
    back = sum((a * x for a, x in zip(rs.simple_roots, c)), Weight.zero(rs.ambient_dim))
    if back != Weight(v):
        raise NotInRootSpan(f"{format_weight(v)} is not in the span of the simple roots")
    return tuple(c)
