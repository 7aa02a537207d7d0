"""Finite-horizon conditioning by exact path counting.

Dominant weights are handled through their Dynkin labels (coroot pairings),
which turn the dominant cone into the nonnegative orthant and every step
into a fixed integer vector.  In type A the labels forget the coordinate
sum; it is recovered from the number of steps taken.

Two engines live here:

* :func:`survival` runs the forward layered count of dominant paths and
  keeps the per-layer tables (small and moderate horizons).
* :class:`SurvivalField` runs the backward recursion
  ``psi_m(l) = sum_s p_s psi_{m-1}(l + s)`` over every dominant state
  within reach of a set of targets.  One pass yields ``psi_m`` at the
  targets for all ``m <= n_max``.  It runs on exact integers
  (object arrays) or float64.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction as Q
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateWindow, StateCapExceeded
from .lattice import RootSystem, Weight, invert_rational, is_dominant
from .reps import MinusculeRep, successors
from .walk import KernelRow, StepDistribution, _is_exact, as_theta, step_distribution

STATE_CAP = 2 * 10**7
DENSE_GRID_CAP = 2**28
# horizons above this switch the default backward engine to float64
EXACT_HORIZON = 200


def state_cap() -> int:
    env = os.environ.get("WEYLWALK_STATE_CAP")
    return int(float(env)) if env else STATE_CAP


Labels = tuple[int, ...]


def _labels(rs: RootSystem, v: Sequence[Q]) -> Labels:
    return rs.labels(v)


@lru_cache(maxsize=None)
def _cartan_inverse(rs: RootSystem) -> tuple[tuple[Q, ...], ...]:
    return tuple(tuple(r) for r in invert_rational([[Q(v) for v in row] for row in rs.cartan_matrix]))


def _root_coords_from_labels(rs: RootSystem, labels: Sequence[int]) -> tuple[int, ...]:
    """Simple-root coordinates of the root-span element with these labels."""
    inv = _cartan_inverse(rs)
    out = []
    for row in inv:
        v = sum((a * b for a, b in zip(row, labels)), Q(0))
        assert v.denominator == 1
        out.append(int(v))
    return tuple(out)


def _step_tuples(rep: MinusculeRep) -> list[Labels]:
    return [tuple(int(c) for c in row) for row in rep.step_labels]


# ---------------------------------------------------------------------------
# forward tables

@dataclass
class SurvivalTable:
    rep: MinusculeRep
    theta: tuple
    horizon: int
    start: Weight
    layers: list[dict[Weight, int]]
    psi: list
    label_layers: list[dict[Labels, int]] = field(repr=False, default_factory=list)

    def weight_factor(self, k: int, target: Weight):
        """x^{target - start} / s_delta(x)^k, the probability of any one path."""
        return _path_probability(step_distribution(self.rep, self.theta), k, self.start, target)


def _path_probability(sd: StepDistribution, k: int, start: Weight, end: Weight):
    rs = sd.rep.rs
    lab = tuple(k * a - (b - c) for a, b, c in zip(rs.labels(sd.rep.delta), rs.labels(end), rs.labels(start)))
    m = _root_coords_from_labels(rs, lab)
    num = Q(1) if sd.exact else 1.0
    for t, e in zip(sd.theta, m):
        num *= t**e
    return num / sd.sigma**k


def forward_counts(rep: MinusculeRep, lam: Sequence, n: int, cap: int | None = None) -> list[dict[Labels, int]]:
    """Layered counts of dominant paths from ``lam``, keyed by Dynkin labels."""
    rs = rep.rs
    cap = state_cap() if cap is None else cap
    lam = Weight(lam)
    if not is_dominant(rs, lam):
        raise ValueError("start must be dominant")
    steps = _step_tuples(rep)
    layer = {_labels(rs, lam): 1}
    layers = [layer]
    total = 1
    for _ in range(n):
        nxt: dict[Labels, int] = {}
        get = nxt.get
        for c, f in layer.items():
            for s in steps:
                q = tuple(a + b for a, b in zip(c, s))
                if min(q) >= 0:
                    nxt[q] = get(q, 0) + f
        layer = nxt
        total += len(layer)
        if total > cap:
            raise StateCapExceeded(f"forward table exceeds {cap} states")
        layers.append(layer)
    return layers


def _label_to_weight(rep: MinusculeRep, start: Weight, k: int):
    rs = rep.rs
    central = rs.central_part(start) + k * rep.step_level
    return lambda c: rs.from_labels(c, central)


def count_paths(rep: MinusculeRep, lam: Sequence, Lam: Sequence, n: int) -> int:
    """Number of length-n paths lam -> Lam with steps in P(delta) staying dominant."""
    rs = rep.rs
    lam, Lam = Weight(lam), Weight(Lam)
    if rs.family == "A" and rs.central_part(Lam) != rs.central_part(lam) + n * rep.step_level:
        return 0
    return forward_counts(rep, lam, n)[n].get(_labels(rs, Lam), 0)


def survival(rep: MinusculeRep, theta: Sequence, lam: Sequence, n: int) -> SurvivalTable:
    """Forward table of path counts f^k and survival probabilities psi_k(lam)."""
    theta = as_theta(theta)
    sd = step_distribution(rep, theta)
    lam = Weight(lam)
    label_layers = forward_counts(rep, lam, n)
    layers = []
    psi = []
    for k, layer in enumerate(label_layers):
        to_w = _label_to_weight(rep, lam, k)
        wl = {to_w(c): f for c, f in layer.items()}
        layers.append(dict(sorted(wl.items(), reverse=True)))
        if _is_exact(theta):
            psi.append(sum((f * _path_probability(sd, k, lam, w) for w, f in wl.items()), Q(0)))
        else:
            psi.append(math.fsum(f * _path_probability(sd, k, lam, w) for w, f in wl.items()))
    return SurvivalTable(rep, theta, n, lam, layers, psi, label_layers)


# ---------------------------------------------------------------------------
# backward engine

def _reachable_states(steps: np.ndarray, targets: np.ndarray, n: int, cap: int):
    """Dominant label vectors within n steps of the targets, in BFS order.

    Returns the states and the cumulative count of states with reach <= r.
    """
    d = steps.shape[1]
    smax = np.maximum(steps.max(axis=0), 0)
    bounds = targets.max(axis=0) + n * smax + 1
    strides = np.ones(d, dtype=np.int64)
    for i in range(d - 2, -1, -1):
        strides[i] = strides[i + 1] * int(bounds[i + 1])
    volume = int(np.prod(bounds.astype(object)))
    dense = volume <= DENSE_GRID_CAP
    if dense:
        visited = np.zeros(volume, dtype=bool)
    else:
        seen = np.empty(0, dtype=np.int64)

    frontier = np.unique(targets, axis=0)
    keys = frontier @ strides
    if dense:
        visited[keys] = True
    else:
        seen = np.sort(keys)
    chunks = [frontier]
    counts = [len(frontier)]
    total = len(frontier)
    for _ in range(n):
        cand = (frontier[:, None, :] + steps[None, :, :]).reshape(-1, d)
        cand = cand[(cand >= 0).all(axis=1)]
        k = cand @ strides
        k, idx = np.unique(k, return_index=True)
        if dense:
            new = ~visited[k]
            visited[k[new]] = True
        else:
            new = ~np.isin(k, seen, assume_unique=True)
            seen = np.union1d(seen, k[new])
        frontier = cand[idx[new]]
        chunks.append(frontier)
        total += len(frontier)
        counts.append(total)
        if total > cap:
            raise StateCapExceeded(f"survival region exceeds {cap} states")
    states = np.concatenate(chunks)
    return states, np.array(counts), strides


class SurvivalField:
    """psi_m at a set of dominant targets for every m <= n_max.

    ``exact=True`` keeps integer numerators ``G_m`` with
    ``psi_m = G_m / total_weight**m``; otherwise everything is float64.
    """

    def __init__(self, rep: MinusculeRep, theta: Sequence, targets: Iterable[Sequence], n_max: int,
                 exact: bool | None = None, cap: int | None = None):
        self.rep = rep
        self.theta = as_theta(theta)
        self.sd: StepDistribution = step_distribution(rep, self.theta)
        self.targets = [Weight(t) for t in targets]
        self.n_max = int(n_max)
        if exact is None:
            exact = self.sd.exact and self.n_max <= EXACT_HORIZON
        if exact and not self.sd.exact:
            raise ValueError("exact mode needs a rational theta")
        self.exact = exact
        rs = rep.rs
        for t in self.targets:
            if not is_dominant(rs, t):
                raise ValueError(f"target {t} is not dominant")
        self._index = {t: i for i, t in enumerate(self.targets)}
        self._run(state_cap() if cap is None else cap)

    def _run(self, cap: int) -> None:
        rep, rs = self.rep, self.rep.rs
        steps = rep.step_labels
        tl = np.array([rs.labels(t) for t in self.targets], dtype=np.int64)
        states, counts, strides = _reachable_states(steps, tl, self.n_max, cap)
        N = len(states)
        keys = states @ strides
        order = np.argsort(keys, kind="stable")
        sorted_keys = keys[order]
        nbr = np.empty((len(steps), N), dtype=np.int64 if N >= 2**31 - 1 else np.int32)
        for j, s in enumerate(steps):
            q = states + s
            ok = (q >= 0).all(axis=1)
            kq = np.where(ok, q @ strides, -1)
            pos = np.minimum(np.searchsorted(sorted_keys, kq), N - 1)
            found = ok & (sorted_keys[pos] == kq)
            nbr[j] = np.where(found, order[pos], N)
        tkeys = tl @ strides
        tpos = order[np.searchsorted(sorted_keys, tkeys)]
        self.n_states = N

        n = self.n_max
        if self.exact:
            # integer weights proportional to p_s
            ws = [self.sd.weights[s] for s in rep.steps]
            den = math.lcm(*(w.denominator for w in ws))
            iw = [int(w * den) for w in ws]
            self.total_weight = sum(iw)
            unit = all(w == iw[0] for w in iw)
            psi = np.ones(N + 1, dtype=object)
            psi[N] = 0
            series = np.empty((n + 1, len(self.targets)), dtype=object)
            series[0] = psi[tpos]
            for m in range(1, n + 1):
                L = counts[n - m]
                acc = psi[nbr[0, :L]] if unit else psi[nbr[0, :L]] * iw[0]
                for j in range(1, len(iw)):
                    term = psi[nbr[j, :L]]
                    acc = acc + (term if unit else term * iw[j])
                if unit and iw[0] != 1:
                    acc = acc * iw[0]
                new = np.zeros(N + 1, dtype=object)
                new[:L] = acc
                psi = new
                series[m] = psi[tpos]
            self._numer = series
        else:
            p = self.sd.prob_vector()
            psi = np.ones(N + 1)
            psi[N] = 0.0
            series = np.empty((n + 1, len(self.targets)))
            series[0] = psi[tpos]
            for m in range(1, n + 1):
                L = counts[n - m]
                acc = p[0] * psi[nbr[0, :L]]
                for j in range(1, len(p)):
                    acc += p[j] * psi[nbr[j, :L]]
                psi = np.zeros(N + 1)
                psi[:L] = acc
                series[m] = psi[tpos]
            self._float = series

    def psi(self, target: Sequence, m: int):
        i = self._index[Weight(target)]
        if self.exact:
            return Q(int(self._numer[m, i]), self.total_weight**m)
        return float(self._float[m, i])

    def numerator(self, target: Sequence, m: int) -> int:
        """Weighted count of surviving paths (exact mode only)."""
        return int(self._numer[m, self._index[Weight(target)]])

    def series(self, target: Sequence) -> list:
        return [self.psi(target, m) for m in range(self.n_max + 1)]


# ---------------------------------------------------------------------------
# derived quantities

def _row_targets(rep: MinusculeRep, lam: Weight) -> list[Weight]:
    return successors(rep.rs, rep, lam)


def finite_horizon_row_from_field(fld: SurvivalField, lam: Sequence, n: int) -> KernelRow:
    lam = Weight(lam)
    sd = fld.sd
    rep = fld.rep
    if n < 1:
        raise ValueError("horizon must be >= 1")
    entries = []
    if fld.exact:
        # p_s psi_{n-1}(L) / psi_n(lam) = w_s G_{n-1}(L) / G_n(lam) in integers
        den = fld.numerator(lam, n)
        scale = math.lcm(*(w.denominator for w in sd.weights.values()))
        for t in _row_targets(rep, lam):
            w = int(sd.weights[t - lam] * scale)
            entries.append((t, Q(w * fld.numerator(t, n - 1), den)))
        return KernelRow(lam, tuple(entries), exact=True)
    pn = fld.psi(lam, n)
    for t in _row_targets(rep, lam):
        entries.append((t, float(sd.probs[t - lam]) * fld.psi(t, n - 1) / pn))
    return KernelRow(lam, tuple(entries), exact=False)


def _field_for_rows(rep, theta, lam, n_max, exact):
    lam = Weight(lam)
    return SurvivalField(rep, theta, [lam] + _row_targets(rep, lam), n_max, exact=exact)


def finite_horizon_row(rep: MinusculeRep, theta: Sequence, lam: Sequence, n: int, exact: bool | None = None) -> KernelRow:
    """Transition row at time 0 of the walk conditioned to stay dominant up to time n."""
    if n < 2:
        raise ValueError("finite horizon row needs n >= 2")
    return finite_horizon_row_from_field(_field_for_rows(rep, theta, lam, n, exact), lam, n)


def finite_horizon_rows(rep: MinusculeRep, theta: Sequence, lam: Sequence, ns: Sequence[int],
                        exact: bool | None = None) -> dict[int, KernelRow]:
    fld = _field_for_rows(rep, theta, lam, max(ns), exact)
    return {n: finite_horizon_row_from_field(fld, lam, n) for n in ns}


def h_n(rep: MinusculeRep, theta: Sequence, lam: Sequence, n: int, exact: bool | None = None):
    """psi_n(lam) / psi_n(0)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    lam = Weight(lam)
    zero = Weight.zero(rep.rs.ambient_dim)
    fld = SurvivalField(rep, theta, [lam, zero] if lam != zero else [zero], n, exact=exact)
    return fld.psi(lam, n) / fld.psi(zero, n)


def h_n_series(fld: SurvivalField, lam: Sequence) -> list:
    """h_m(lam) for m = 1..n_max from a field that contains lam and 0."""
    zero = Weight.zero(fld.rep.rs.ambient_dim)
    return [fld.psi(lam, m) / fld.psi(zero, m) for m in range(1, fld.n_max + 1)]


def convergence_series(rep: MinusculeRep, theta: Sequence, lam: Sequence, ns: Sequence[int] | int,
                       reference: KernelRow, exact: bool | None = None) -> list[tuple[int, float]]:
    """Total-variation distance between finite-horizon rows and ``reference``."""
    if isinstance(ns, int):
        ns = list(range(2, ns + 1))
    rows = finite_horizon_rows(rep, theta, lam, ns, exact=exact)
    return [(n, rows[n].tv_distance(reference)) for n in ns]


def aitken(a0: float, a1: float, a2: float) -> float:
    """Aitken delta-squared extrapolation of three consecutive terms."""
    den = a2 - 2 * a1 + a0
    if den == 0:
        return a2
    return a2 - (a2 - a1) ** 2 / den


def aitken_row(rows: Sequence[KernelRow]) -> KernelRow:
    """Entrywise Aitken extrapolation of three rows over the same targets."""
    r0, r1, r2 = (r.as_dict() for r in rows)
    entries = tuple((t, aitken(float(r0[t]), float(r1[t]), float(r2[t]))) for t in rows[2].targets)
    return KernelRow(rows[2].source, entries, exact=False)


# ---------------------------------------------------------------------------
# tail exponent

@dataclass(frozen=True)
class TailFit:
    slope: float
    intercept: float
    max_residual: float
    n_points: int
    window: tuple[int, int]


def tail_fit(psi_series: Sequence[tuple[int, float]], window: tuple[int, int]) -> TailFit:
    """Least-squares slope of log psi against log n over ``lo <= n <= hi``."""
    lo, hi = window
    pts = [(n, float(p)) for n, p in psi_series if lo <= n <= hi]
    if len(pts) < 2 or lo <= 0 or len({n for n, _ in pts}) < 2:
        raise DegenerateWindow(f"window {window} holds fewer than two usable points")
    if any(p <= 0 for _, p in pts):
        raise DegenerateWindow("survival values must be positive")
    ln = np.log([n for n, _ in pts])
    lp = np.log([p for _, p in pts])
    slope, intercept = np.polyfit(ln, lp, 1)
    resid = lp - (slope * ln + intercept)
    return TailFit(float(slope), float(intercept), float(np.max(np.abs(resid))), len(pts), (lo, hi))
