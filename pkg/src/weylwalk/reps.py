"""Minuscule representations, characters and dimensions.

Characters are evaluated with the Weyl character formula.  The denominator
uses its product form, and the numerator switches to mpmath whenever the
alternating sum would cancel more than a few decimal digits (points close to
a reflection wall, e.g. theta near 1).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction as Q
from functools import cached_property, lru_cache
from typing import Sequence

import mpmath
import numpy as np

from .errors import NotDominant, NotMinuscule, SingularPoint
from .lattice import RootSystem, Weight, dot, is_dominant, weyl_orbit

WALL_TOL = 1e-9
# log10 of tolerated cancellation before the float path is abandoned
FLOAT_DIGITS_BUDGET = 3.0
# size of the generic displacement used to evaluate a character on a wall
WALL_EPS_DIGITS = 40

_MINUSCULE = {
    "A": lambda d: list(range(1, d + 1)),
    "B": lambda d: [d],
    "C": lambda d: [1],
    "D": lambda d: [1, d - 1, d],
    "E6": lambda d: [1, 6],
    "E7": lambda d: [7],
}


def minuscule_weights(rs: RootSystem) -> list[int]:
    """1-based indices of the minuscule fundamental weights."""
    return _MINUSCULE[rs.family](rs.rank)


@dataclass(frozen=True, eq=False)
class MinusculeRep:
    rs: RootSystem
    index: int
    delta: Weight
    steps: tuple[Weight, ...]
    step_index: dict[Weight, int] = field(repr=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MinusculeRep):
            return NotImplemented
        return (self.rs, self.index) == (other.rs, other.index)

    def __hash__(self) -> int:
        return hash((self.rs, self.index))

    @property
    def dim(self) -> int:
        return len(self.steps)

    @cached_property
    def step_labels(self) -> np.ndarray:
        """Steps as Dynkin-label integer vectors, in ``steps`` order."""
        return np.array([self.rs.labels(s) for s in self.steps], dtype=np.int64)

    @cached_property
    def step_level(self) -> Q:
        """Coordinate sum shared by every step (nonzero only in type A)."""
        return sum(self.delta, Q(0))


@lru_cache(maxsize=None)
def build_minuscule(rs: RootSystem, index: int) -> MinusculeRep:
    if index not in minuscule_weights(rs):
        raise NotMinuscule(f"omega_{index} is not minuscule in type {rs.label}")
    delta = rs.fundamental_weights[index - 1]
    # delta first, then the rest in descending lexicographic order
    steps = (delta,) + tuple(sorted(weyl_orbit(rs, delta) - {delta}, reverse=True))
    rep = MinusculeRep(rs, index, delta, steps, {s: k for k, s in enumerate(steps)})
    assert steps[0] == delta and sum(is_dominant(rs, s) for s in steps) == 1
    return rep


# ---------------------------------------------------------------------------
# dimensions

def dim_irrep(rs: RootSystem, lam: Sequence[Q]) -> int:
    """Weyl dimension formula in exact arithmetic."""
    if not is_dominant(rs, lam):
        raise NotDominant(f"{lam} is not dominant")
    lr = Weight(lam) + rs.rho
    num = Q(1)
    for a in rs.positive_roots:
        num *= dot(lr, a) / dot(rs.rho, a)
    assert num.denominator == 1
    return int(num)


# ---------------------------------------------------------------------------
# characters

@lru_cache(maxsize=4096)
def _signed_orbit(rs: RootSystem, mu: Weight) -> tuple[tuple[tuple[Q, ...], ...], np.ndarray, np.ndarray]:
    """W-orbit of a regular dominant weight with the sign of each element.

    For regular ``mu`` the orbit is in bijection with W and every BFS path
    to ``w mu`` has the parity of the length of ``w``.
    """
    seen = {mu: 1}
    queue = deque([mu])
    norms = [dot(a, a) for a in rs.simple_roots]
    while queue:
        v = queue.popleft()
        for a, n in zip(rs.simple_roots, norms):
            c = 2 * dot(v, a) / n
            w = v - a * c
            if w not in seen:
                seen[w] = -seen[v]
                queue.append(w)
    if len(seen) != rs.weyl_order:
        raise ValueError("weight is not regular")
    pts = tuple(seen)
    return pts, np.array([[float(c) for c in p] for p in pts]), np.array([seen[p] for p in pts], float)


def _dominant_conjugate(rs: RootSystem, v: np.ndarray) -> np.ndarray:
    roots = [np.array([float(c) for c in a]) for a in rs.simple_roots]
    v = v.copy()
    for _ in range(10 * len(rs.positive_roots) + 10):
        for a in roots:
            p = v @ a
            if p < 0:
                v -= 2 * p / (a @ a) * a
                break
        else:
            return v
    return v


def _float_vec(v: Sequence[Q]) -> np.ndarray:
    return np.array([float(c) for c in v])


def char_eval(
    rs: RootSystem,
    lam: Sequence[Q],
    x: Sequence[float],
    *,
    allow_walls: bool = False,
    wall_tol: float = WALL_TOL,
) -> float:
    """Evaluate the irreducible character s_lam at a positive point ``x``.

    Raises SingularPoint when ``x`` lies within ``wall_tol`` (in log scale) of
    a reflection wall, unless ``allow_walls`` is set, in which case the value
    is taken as the limit along a generic direction.
    """
    lam = Weight(lam)
    if not is_dominant(rs, lam):
        raise NotDominant(f"{lam} is not dominant")
    x = np.asarray(x, dtype=float)
    if x.shape != (rs.ambient_dim,) or np.any(x <= 0):
        raise ValueError("x must be a strictly positive vector of the ambient dimension")
    if lam.is_zero():
        return 1.0
    logx = np.log(x)
    if allow_walls and not logx.any():
        return float(dim_irrep(rs, lam))
    pos = np.array([_float_vec(a) for a in rs.positive_roots])
    wall = np.abs(pos @ logx)
    on_wall = wall.min() < wall_tol
    if on_wall and not allow_walls:
        raise SingularPoint("x is too close to a reflection wall; use dim_irrep or allow_walls")

    mu = lam + rs.rho
    pts, fpts, signs = _signed_orbit(rs, mu)
    expo = fpts @ logx
    top = expo.max()
    sh = pos @ logx / 2
    off = wall >= wall_tol
    den_log = np.sum(np.log(2 * np.abs(np.sinh(sh[off]))))
    floor = _dominant_conjugate(rs, logx) @ _float_vec(lam)
    lost = (top + math.log(len(pts)) - den_log - floor) / math.log(10)
    if not on_wall and lost < FLOAT_DIGITS_BUDGET:
        num = np.sum(signs * np.exp(expo - top))
        return float(num / np.prod(np.sign(sh)) * math.exp(top - den_log))
    n_wall = int(np.sum(~off))
    return _char_mp(rs, pts, signs, x, lost, n_wall)


def _char_mp(rs, pts, signs, x, lost, n_wall):
    eps_digits = WALL_EPS_DIGITS if n_wall else 0
    dps = int(30 + max(lost, 0.0) + eps_digits * (n_wall + 1))
    with mpmath.workdps(dps):
        lx = [mpmath.log(mpmath.mpf(float(v))) for v in x]
        if n_wall:
            # displace along rho, which pairs positively with every root
            eps = mpmath.mpf(10) ** (-eps_digits)
            lx = [a + eps * mpmath.mpf(c.numerator) / c.denominator for a, c in zip(lx, rs.rho)]

        def pair(v):
            return mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator * t for c, t in zip(v, lx) if c)

        num = mpmath.fsum(int(s) * mpmath.exp(pair(p)) for p, s in zip(pts, signs))
        den = mpmath.fprod(2 * mpmath.sinh(pair(a) / 2) for a in rs.positive_roots)
        return float(num / den)


def orbit_sum(rep: MinusculeRep, x: Sequence[float]) -> float:
    """s_delta(x) as the plain sum of monomials over the minuscule orbit."""
    logx = np.log(np.asarray(x, dtype=float))
    return float(np.sum(np.exp(np.array([_float_vec(s) for s in rep.steps]) @ logx)))


# ---------------------------------------------------------------------------
# tensoring with the minuscule representation

def successors(rs: RootSystem, rep: MinusculeRep, lam: Sequence[Q]) -> list[Weight]:
    """Dominant Lambda with Lambda - lam in P(delta), lexicographically descending."""
    lam = Weight(lam)
    if not is_dominant(rs, lam):
        raise NotDominant(f"{lam} is not dominant")
    return sorted((lam + s for s in rep.steps if is_dominant(rs, lam + s)), reverse=True)


def pieri_residual(rs: RootSystem, rep: MinusculeRep, lam: Sequence[Q], x: Sequence[float], **kw) -> float:
    """s_lam(x) s_delta(x) - sum over successors Lambda of s_Lambda(x)."""
    lhs = char_eval(rs, lam, x, **kw) * char_eval(rs, rep.delta, x, **kw)
    rhs = math.fsum(char_eval(rs, L, x, **kw) for L in successors(rs, rep, lam))
    return lhs - rhs
