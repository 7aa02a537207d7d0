"""Seeded simulation of unconditioned and conditioned walks.

Randomness comes from counter-based Philox streams keyed by
``(seed, block)``.  Trajectories are processed in fixed-size blocks, so any
batch gives identical results whatever order or thread runs the blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction as Q
from typing import Callable, Sequence

import numpy as np

from .errors import NonStochasticRow
from .lattice import Weight
from .walk import KernelRow, StepDistribution

BLOCK = 1 << 16
ROW_SUM_TOL = 1e-9


@dataclass(frozen=True)
class Trajectory:
    start: Weight
    points: tuple[Weight, ...]
    exited_at: int | None = None


def stream(seed: int, block: int = 0) -> np.random.Generator:
    """Independent generator for one block of trajectories."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(block,))))


def _cdf(p: Sequence[float]) -> np.ndarray:
    c = np.cumsum(np.asarray(p, dtype=float))
    c[-1] = max(c[-1], 1.0)
    return c


def _draw(cdf: np.ndarray, u: np.ndarray) -> np.ndarray:
    return np.minimum(np.searchsorted(cdf, u, side="right"), len(cdf) - 1)


def simulate_walk(sd: StepDistribution, start: Sequence, n: int, seed: int) -> Trajectory:
    rs = sd.rs
    start = Weight(start)
    idx = _draw(_cdf(sd.prob_vector()), stream(seed).random(n))
    steps = sd.rep.steps
    den = math.lcm(*(c.denominator for s in steps for c in s), *(c.denominator for c in start))
    num = np.array([[int(c * den) for c in s] for s in steps], dtype=np.int64)
    pos = np.vstack([[int(c * den) for c in start], num[idx]]).cumsum(axis=0)
    frac: dict[int, Q] = {}
    for c in np.unique(pos).tolist():
        frac[c] = Q(c, den)
    points = tuple(Weight([frac[c] for c in row]) for row in pos.tolist())
    labels = np.vstack([rs.labels(start), sd.rep.step_labels[idx]]).cumsum(axis=0)
    bad = np.flatnonzero((labels < 0).any(axis=1))
    return Trajectory(start, points, int(bad[0]) if len(bad) else None)


def estimate_survival(sd: StepDistribution, lam: Sequence, n: int, trials: int, seed: int,
                      block: int = BLOCK) -> tuple[float, float]:
    """Fraction of walks from ``lam`` still dominant after ``n`` steps, with its
    binomial standard error."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rs = sd.rs
    lab0 = np.array(rs.labels(Weight(lam)), dtype=np.int64)
    steps = sd.rep.step_labels
    cdf = _cdf(sd.prob_vector())
    alive = 0
    for b, lo in enumerate(range(0, trials, block)):
        size = min(block, trials - lo)
        u = stream(seed, b).random((n, size))
        pos = np.broadcast_to(lab0, (size, len(lab0))).copy()
        ok = np.full(size, bool((lab0 >= 0).all()))
        for k in range(n):
            pos += steps[_draw(cdf, u[k])]
            ok &= (pos >= 0).all(axis=1)
        alive += int(ok.sum())
    est = alive / trials
    return est, math.sqrt(est * (1 - est) / trials)


RowProvider = Callable[[Weight], KernelRow]


def _checked(row: KernelRow) -> tuple[list[Weight], np.ndarray]:
    if abs(float(row.total()) - 1.0) > ROW_SUM_TOL or any(float(p) < 0 for _, p in row.entries):
        raise NonStochasticRow(f"row at {row.source} sums to {float(row.total())}")
    return row.targets, _cdf([float(p) for _, p in row.entries])


def simulate_conditioned(row_provider: RowProvider, start: Sequence, n: int, seed: int) -> Trajectory:
    """One trajectory of the chain with the given transition rows."""
    cache: dict[Weight, tuple[list[Weight], np.ndarray]] = {}
    u = stream(seed).random(n)
    cur = Weight(start)
    points = [cur]
    for k in range(n):
        if cur not in cache:
            cache[cur] = _checked(row_provider(cur))
        targets, cdf = cache[cur]
        cur = targets[int(_draw(cdf, u[k:k + 1])[0])]
        points.append(cur)
    return Trajectory(Weight(start), tuple(points), None)


def simulate_conditioned_batch(row_provider: RowProvider, start: Sequence, n: int, trials: int, seed: int,
                               block: int = BLOCK) -> dict[tuple[Weight, Weight], int]:
    """Run ``trials`` conditioned trajectories of length ``n``; count every
    observed transition ``(from, to)``."""
    cache: dict[Weight, tuple[list[Weight], np.ndarray]] = {}
    ids: dict[Weight, int] = {}
    names: list[Weight] = []

    def ident(w: Weight) -> int:
        if w not in ids:
            ids[w] = len(names)
            names.append(w)
        return ids[w]

    counts: dict[tuple[int, int], int] = {}
    s0 = ident(Weight(start))
    for b, lo in enumerate(range(0, trials, block)):
        size = min(block, trials - lo)
        u = stream(seed, b).random((n, size))
        state = np.full(size, s0, dtype=np.int64)
        for k in range(n):
            nxt = np.empty_like(state)
            for sid in np.unique(state):
                w = names[sid]
                if w not in cache:
                    cache[w] = _checked(row_provider(w))
                targets, cdf = cache[w]
                mask = state == sid
                tid = np.array([ident(t) for t in targets])
                picks = tid[_draw(cdf, u[k, mask])]
                nxt[mask] = picks
                vals, cnt = np.unique(picks, return_counts=True)
                for v, c in zip(vals, cnt):
                    key = (int(sid), int(v))
                    counts[key] = counts.get(key, 0) + int(c)
            state = nxt
    return {(names[a], names[b]): c for (a, b), c in sorted(counts.items())}


def successor_frequencies(transitions: dict[tuple[Weight, Weight], int], source: Weight) -> dict[Weight, tuple[int, int]]:
    """``target -> (count, total visits)`` for transitions out of ``source``."""
    out = {t: c for (s, t), c in transitions.items() if s == source}
    total = sum(out.values())
    return {t: (c, total) for t, c in out.items()}
