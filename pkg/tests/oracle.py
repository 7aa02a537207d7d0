"""Brute-force reference implementations used by the tests.

Nothing here imports the package: chambers are written as explicit
coordinate inequalities, minuscule weights as explicit vectors, and walks
are enumerated step sequence by step sequence.  Coordinates are doubled so
that half-integer weights become integers.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction as Q

import numpy as np


def ambient(family: str, rank: int) -> int:
    return rank + 1 if family == "A" else rank


def dominant2(family: str, rank: int, pts: np.ndarray) -> np.ndarray:
    """Row mask: which doubled-coordinate points lie in the closed chamber."""
    pts = np.atleast_2d(pts)
    dec = (pts[:, :-1] >= pts[:, 1:]).all(axis=1) if pts.shape[1] > 1 else np.ones(len(pts), bool)
    if family == "A":
        return dec
    if family in ("B", "C"):
        return dec & (pts[:, -1] >= 0)
    if family == "D":
        return (pts[:, :-2] >= pts[:, 1:-1]).all(axis=1) & (pts[:, -2] >= np.abs(pts[:, -1]))
    raise ValueError(family)


def minuscule_steps2(family: str, rank: int, index: int) -> list[tuple[int, ...]]:
    """Doubled coordinates of the weights of the minuscule module."""
    D = ambient(family, rank)
    if family == "A":
        return sorted({tuple(2 * int(i in c) for i in range(D)) for c in itertools.combinations(range(D), index)})
    if family == "B" and index == rank:
        return sorted(itertools.product((1, -1), repeat=D))
    if family == "C" and index == 1 or family == "D" and index == 1:
        out = []
        for i in range(D):
            for sgn in (2, -2):
                v = [0] * D
                v[i] = sgn
                out.append(tuple(v))
        return sorted(out)
    if family == "D" and index in (rank - 1, rank):
        want_odd = index == rank - 1
        return sorted(v for v in itertools.product((1, -1), repeat=D) if (v.count(-1) % 2 == 1) == want_odd)
    raise ValueError("not minuscule")


def to_weight(v2) -> tuple[Q, ...]:
    return tuple(Q(int(c), 2) for c in v2)


def to2(w) -> tuple[int, ...]:
    return tuple(int(2 * Q(c)) for c in w)


def all_sequences(n_steps: int, n: int) -> np.ndarray:
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(itertools.product(range(n_steps), repeat=n)), dtype=np.int64)


def surviving_paths(family, rank, steps2, start2, n):
    """(sequences, endpoints) of every length-n step sequence whose path from
    start stays in the closed chamber."""
    steps = np.array(steps2, dtype=np.int64)
    seqs = all_sequences(len(steps), n)
    pos = np.tile(np.array(start2, dtype=np.int64), (len(seqs), 1))
    ok = dominant2(family, rank, pos)
    for k in range(n):
        pos = pos + steps[seqs[:, k]]
        ok &= dominant2(family, rank, pos)
    return seqs[ok], pos[ok]


def brute_counts(family, rank, steps2, start2, n) -> dict[tuple[int, ...], int]:
    _, ends = surviving_paths(family, rank, steps2, start2, n)
    out: dict[tuple[int, ...], int] = {}
    for e in map(tuple, ends.tolist()):
        out[e] = out.get(e, 0) + 1
    return out


def _sequence_mass(seqs: np.ndarray, probs: list) -> Q:
    """Exact sum over sequences of the product of step probabilities."""
    if seqs.shape[1] == 0:
        return Q(len(seqs))
    hist = np.stack([(seqs == j).sum(axis=1) for j in range(len(probs))], axis=1)
    rows, mult = np.unique(hist, axis=0, return_counts=True)
    total = Q(0)
    for r, m in zip(rows.tolist(), mult.tolist()):
        term = Q(m)
        for p, e in zip(probs, r):
            if e:
                term *= p**e
        total += term
    return total


def brute_survival(family, rank, steps2, probs, start2, n) -> Q:
    seqs, _ = surviving_paths(family, rank, steps2, start2, n)
    return _sequence_mass(seqs, probs)


def brute_row(family, rank, steps2, probs, start2, n) -> dict[tuple[int, ...], Q]:
    """P(first step lands on each target | stay dominant up to n)."""
    seqs, _ = surviving_paths(family, rank, steps2, start2, n)
    den = _sequence_mass(seqs, probs)
    out = {}
    for j, s in enumerate(steps2):
        sub = seqs[seqs[:, 0] == j]
        if len(sub):
            target = tuple(a + b for a, b in zip(start2, s))
            out[target] = _sequence_mass(sub, probs) / den
    return out


def a1_survival(n: int) -> Q:
    """Simple symmetric walk on the line, staying >= 0 for n steps."""
    return Q(math.comb(n, n // 2), 2**n)


# ---------------------------------------------------------------------------
# Schur polynomials of gl_N by semistandard tableaux

def ssyt(shape: tuple[int, ...], N: int):
    """All semistandard tableaux of the given shape with entries 1..N, as
    maps from (row, column) to entry."""
    cells = [(r, c) for r, length in enumerate(shape) for c in range(length)]
    filling: dict[tuple[int, int], int] = {}

    def rec(k):
        if k == len(cells):
            yield dict(filling)
            return
        r, c = cells[k]
        lo = 1
        if c > 0:
            lo = max(lo, filling[(r, c - 1)])
        if r > 0:
            lo = max(lo, filling[(r - 1, c)] + 1)
        for v in range(lo, N + 1):
            filling[(r, c)] = v
            yield from rec(k + 1)
        filling.pop((r, c), None)

    yield from rec(0)


def schur(shape: tuple[int, ...], x: list[float]) -> float:
    shape = tuple(p for p in shape if p > 0)
    total = 0.0
    for t in ssyt(shape, len(x)):
        term = 1.0
        for v in t.values():
            term *= x[v - 1]
        total += term
    return total


def schur_dim(shape: tuple[int, ...], N: int) -> int:
    shape = tuple(p for p in shape if p > 0)
    return sum(1 for _ in ssyt(shape, N))
