"""Step distributions on a minuscule orbit and the conditioned kernels.

Probabilities, the normalizer and the drift are exact rationals whenever
theta is; the point ``x`` and all characters are floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction as Q
from functools import lru_cache
from typing import Callable, Mapping, Sequence, Union

import numpy as np

from .errors import DriftNotInterior, NonPositiveH, SolveFailed
from .lattice import RootSystem, Weight, decompose_in_simple_roots, format_weight, is_dominant
from .reps import MinusculeRep, char_eval, dim_irrep, successors

Number = Union[Q, float]


def as_theta(theta: Sequence) -> tuple:
    """Normalize a parameter vector: ints, Fractions and ``"p/q"`` strings
    become Fractions; floats stay floats (float-only mode)."""
    out = []
    for t in theta:
        if isinstance(t, str):
            t = Q(t.strip())
        elif isinstance(t, int):
            t = Q(t)
        if not t > 0:
            raise ValueError(f"theta entries must be positive, got {t}")
        out.append(t)
    return tuple(out)


def _is_exact(theta) -> bool:
    return all(isinstance(t, Q) for t in theta)


@dataclass(frozen=True)
class KernelRow:
    source: Weight
    entries: tuple[tuple[Weight, Number], ...]
    exact: bool

    def total(self) -> Number:
        if self.exact:
            return sum((p for _, p in self.entries), Q(0))
        return math.fsum(float(p) for _, p in self.entries)

    def as_dict(self) -> dict[Weight, Number]:
        return dict(self.entries)

    @property
    def targets(self) -> list[Weight]:
        return [t for t, _ in self.entries]

    def tv_distance(self, other: "KernelRow") -> float:
        a, b = self.as_dict(), other.as_dict()
        return 0.5 * math.fsum(abs(float(a.get(k, 0)) - float(b.get(k, 0))) for k in set(a) | set(b))

    def __str__(self) -> str:
        body = ", ".join(f"{format_weight(t)}: {p}" for t, p in self.entries)
        return f"KernelRow({format_weight(self.source)} -> {{{body}}})"


@dataclass(frozen=True, eq=False)
class StepDistribution:
    rep: MinusculeRep
    theta: tuple
    exponents: Mapping[Weight, tuple[int, ...]]
    weights: Mapping[Weight, Number]
    sigma: Number
    probs: Mapping[Weight, Number]
    x: np.ndarray
    drift: Weight | np.ndarray

    @property
    def exact(self) -> bool:
        return _is_exact(self.theta)

    @property
    def rs(self) -> RootSystem:
        return self.rep.rs

    def prob_vector(self) -> np.ndarray:
        """Float probabilities in ``rep.steps`` order."""
        return np.array([float(self.probs[s]) for s in self.rep.steps])


def _theta_power(theta, m: Sequence[int]) -> Number:
    out = Q(1) if _is_exact(theta) else 1.0
    for t, k in zip(theta, m):
        if k:
            out *= t**k
    return out


@lru_cache(maxsize=None)
def step_exponents(rep: MinusculeRep) -> dict[Weight, tuple[int, ...]]:
    """Simple-root coordinates of delta - s for every step s."""
    out = {}
    for s in rep.steps:
        c = decompose_in_simple_roots(rep.rs, rep.delta - s)
        assert all(v.denominator == 1 and v >= 0 for v in c)
        out[s] = tuple(int(v) for v in c)
    return out


def step_distribution(rep: MinusculeRep, theta: Sequence) -> StepDistribution:
    theta = as_theta(theta)
    if len(theta) != rep.rs.rank:
        raise ValueError(f"theta must have {rep.rs.rank} entries")
    exps = step_exponents(rep)
    weights = {s: _theta_power(theta, exps[s]) for s in rep.steps}
    sigma = sum(weights.values(), Q(0) if _is_exact(theta) else 0.0)
    probs = {s: w / sigma for s, w in weights.items()}
    x = solve_x(rep.rs, theta)
    if _is_exact(theta):
        d = Weight.zero(rep.rs.ambient_dim)
        for s, p in probs.items():
            d = d + s * p
    else:
        d = sum(np.array([float(c) for c in s]) * p for s, p in probs.items())
    return StepDistribution(rep, theta, exps, weights, sigma, probs, x, d)


@lru_cache(maxsize=None)
def _log_solver(rs: RootSystem) -> np.ndarray:
    # minimum-norm solution of <log x, alpha_i> = b_i is A^T G^{-1} b
    ginv = rs.gram_inverse
    A = rs.simple_roots
    M = [[sum((A[k][j] * ginv[k][i] for k in range(rs.rank)), Q(0)) for i in range(rs.rank)]
         for j in range(rs.ambient_dim)]
    return np.array([[float(v) for v in row] for row in M])


def solve_x(rs: RootSystem, theta: Sequence, tol: float = 1e-12) -> np.ndarray:
    """Positive x with x^{alpha_i} = 1/theta_i; the minimum-norm log solution."""
    theta = as_theta(theta)
    b = -np.log(np.array([float(t) for t in theta]))
    logx = _log_solver(rs) @ b
    A = np.array([[float(c) for c in a] for a in rs.simple_roots])
    if np.max(np.abs(A @ logx - b), initial=0.0) > tol * max(1.0, np.max(np.abs(b), initial=0.0)):
        raise SolveFailed("log system residual above tolerance")
    return np.exp(logx)


def drift(sd: StepDistribution):
    return sd.drift


# ---------------------------------------------------------------------------
# infinite-horizon kernels

def _require_interior(theta) -> None:
    if any(not (0 < float(t) < 1) for t in theta):
        raise DriftNotInterior("theta must lie in (0,1)^d for a drift in the open chamber")


def h_drifted(rs: RootSystem, rep: MinusculeRep, theta: Sequence, lam: Sequence) -> float:
    """P_lam[walk stays dominant forever] = x^{-lam} s_lam(x) prod_{a>0}(1 - x^{-a})."""
    theta = as_theta(theta)
    _require_interior(theta)
    lam = Weight(lam)
    x = solve_x(rs, theta)
    prod = 1.0
    for a in rs.positive_roots:
        m = decompose_in_simple_roots(rs, a)
        # x^{-a} = prod theta_i^{m_i} < 1
        prod *= -math.expm1(sum(int(k) * math.log(float(t)) for k, t in zip(m, theta)))
    lx = np.log(x)
    shifted = math.exp(-float(np.dot([float(c) for c in lam], lx))) * char_eval(rs, lam, x)
    return shifted * prod


def character_row(rs: RootSystem, rep: MinusculeRep, x: np.ndarray, lam: Sequence, *, allow_walls=False) -> KernelRow:
    """Row lam -> Lambda with weights s_Lambda(x) / (s_delta(x) s_lam(x))."""
    lam = Weight(lam)
    targets = successors(rs, rep, lam)
    sd_x = char_eval(rs, rep.delta, x, allow_walls=allow_walls)
    sl = char_eval(rs, lam, x, allow_walls=allow_walls)
    entries = tuple((t, char_eval(rs, t, x, allow_walls=allow_walls) / (sd_x * sl)) for t in targets)
    return KernelRow(lam, entries, exact=False)


def kernel_drifted(rs: RootSystem, rep: MinusculeRep, theta: Sequence, lam: Sequence) -> KernelRow:
    theta = as_theta(theta)
    _require_interior(theta)
    return character_row(rs, rep, solve_x(rs, theta), lam)


def kernel_zero_drift(rs: RootSystem, rep: MinusculeRep, lam: Sequence) -> KernelRow:
    """Exact row dim V(Lambda) / (dim V(delta) dim V(lam))."""
    lam = Weight(lam)
    denom = rep.dim * dim_irrep(rs, lam)
    entries = tuple((t, Q(dim_irrep(rs, t), denom)) for t in successors(rs, rep, lam))
    return KernelRow(lam, entries, exact=True)


def dominant_restriction(sd: StepDistribution, lam: Sequence) -> KernelRow:
    """Unconditioned transition row from ``lam`` restricted to dominant targets
    (substochastic in general)."""
    lam = Weight(lam)
    rs = sd.rs
    entries = tuple(sorted(((lam + s, sd.probs[s]) for s in sd.rep.steps if is_dominant(rs, lam + s)), reverse=True))
    return KernelRow(lam, entries, exact=sd.exact)


def doob_transform(row: KernelRow, h: Callable[[Weight], Number] | Mapping[Weight, Number]) -> KernelRow:
    """Rescale each entry by h(target)/h(source)."""
    hf = h.__getitem__ if isinstance(h, Mapping) else h
    h0 = hf(row.source)
    if not h0 > 0:
        raise NonPositiveH(f"h({format_weight(row.source)}) = {h0}")
    out = []
    exact = row.exact
    for t, p in row.entries:
        ht = hf(t)
        if not ht > 0:
            raise NonPositiveH(f"h({format_weight(t)}) = {ht}")
        exact = exact and isinstance(ht, (int, Q)) and isinstance(h0, (int, Q))
        out.append((t, p * ht / h0 if exact else float(p) * float(ht) / float(h0)))
    return KernelRow(row.source, tuple(out), exact=exact)
