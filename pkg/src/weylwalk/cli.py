"""Command line front end: ``weylwalk <command> [flags]``.

Every command writes one table (CSV with a header row, or JSON holding the
same rows) to ``--out`` or stdout.  Exit codes: 0 success, 2 invalid
configuration, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction as Q
from pathlib import Path
from typing import Any, Sequence

from . import conditioning as cond
from .errors import CapExceeded, ConfigError, WeylWalkError
from .lattice import RootSystem, Weight, build_root_system, format_weight, is_dominant
from .montecarlo import estimate_survival, simulate_conditioned, simulate_conditioned_batch, simulate_walk
from .reps import MinusculeRep, build_minuscule, minuscule_weights
from .walk import (KernelRow, as_theta, character_row, kernel_drifted, kernel_zero_drift, solve_x,
                   step_distribution)

COMMANDS = ("describe", "steps", "kernel", "convergence", "theta-sweep", "tail-fit", "boundary-sweep", "simulate")

DEFAULTS: dict[str, Any] = {
    "family": "B",
    "rank": 3,
    "minuscule": None,
    "theta": None,
    "start": None,
    "n": None,
    "n_max": None,
    "trials": 100000,
    "seed": 0,
    "mode": None,
    "format": "csv",
    "out": None,
    "k_max": 10,
    "windows": None,
    "ns": None,
    "synthetic": None,
}


class Table:
    def __init__(self, columns: Sequence[str]):
        self.columns = list(columns)
        self.rows: list[dict[str, Any]] = []

    def add(self, **row: Any) -> None:
        self.rows.append({c: row.get(c, "") for c in self.columns})

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps({"columns": self.columns, "rows": self.rows}, indent=2) + "\n"
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=self.columns, lineterminator="\n")
        w.writeheader()
        w.writerows(self.rows)
        return buf.getvalue()


def _dec(p) -> str:
    return format(float(p), ".17g")


def _exact(p) -> str:
    return str(p) if isinstance(p, Q) else ""


# ---------------------------------------------------------------------------
# configuration

def _read_config_file(path: str) -> dict[str, str]:
    out = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"bad config line: {raw!r}")
        k, v = line.split("=", 1)
        out[k.strip().replace("-", "_")] = v.strip()
    return out


class Config:
    """Validated experiment configuration."""

    def __init__(self, values: dict[str, Any]):
        v = {**DEFAULTS, **{k: x for k, x in values.items() if x is not None}}
        try:
            self.rs: RootSystem = build_root_system(str(v["family"]), int(v["rank"]))
            idx = v["minuscule"]
            self.index = int(idx) if idx is not None else minuscule_weights(self.rs)[-1]
            self.rep: MinusculeRep = build_minuscule(self.rs, self.index)
            self.theta = self._theta(v["theta"])
            self.start = self._start(v["start"])
            self.n = int(v["n"]) if v["n"] is not None else None
            self.n_max = int(v["n_max"]) if v["n_max"] is not None else None
            self.trials = int(v["trials"])
            self.seed = int(v["seed"])
            self.k_max = int(v["k_max"])
        except WeylWalkError:
            raise
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise ConfigError(str(exc)) from exc
        self.mode = v["mode"]
        self.format = v["format"]
        if self.format not in ("csv", "json"):
            raise ConfigError(f"unknown format {self.format!r}")
        self.out = v["out"]
        self.windows = v["windows"]
        self.ns = v["ns"]
        self.synthetic = v["synthetic"]
        if self.trials < 1 or (self.n is not None and self.n < 0) or (self.n_max is not None and self.n_max < 0):
            raise ConfigError("trials must be positive and horizons nonnegative")

    def _theta(self, text) -> tuple:
        if text is None:
            return tuple(Q(1) for _ in range(self.rs.rank))
        parts = [Q(t.strip()) for t in str(text).split(",") if t.strip()]
        if len(parts) == 1 and self.rs.rank > 1:
            parts = parts * self.rs.rank
        if len(parts) != self.rs.rank:
            raise ConfigError(f"theta needs {self.rs.rank} entries")
        return as_theta(parts)

    def _start(self, text) -> Weight:
        if text is None or str(text).strip() in ("", "0"):
            return Weight.zero(self.rs.ambient_dim)
        t = str(text).strip()
        if t.lower().startswith("w") and t[1:].isdigit():
            w = self.rs.fundamental_weights[int(t[1:]) - 1]
        else:
            w = Weight(Q(c.strip()) for c in t.split(","))
        if len(w) != self.rs.ambient_dim:
            raise ConfigError(f"start weight needs {self.rs.ambient_dim} coordinates")
        if not is_dominant(self.rs, w):
            raise ConfigError(f"start weight {format_weight(w)} is not dominant")
        return w

    @property
    def uniform(self) -> bool:
        return all(t == 1 for t in self.theta)

    @property
    def interior(self) -> bool:
        return all(0 < t < 1 for t in self.theta)


# ---------------------------------------------------------------------------
# commands

def cmd_describe(cfg: Config) -> Table:
    rs = cfg.rs
    t = Table(["item", "index", "value"])
    t.add(item="type", index="", value=rs.label)
    t.add(item="rank", index="", value=rs.rank)
    t.add(item="ambient_dim", index="", value=rs.ambient_dim)
    for i, a in enumerate(rs.simple_roots, 1):
        t.add(item="simple_root", index=i, value=format_weight(a))
    for i, a in enumerate(rs.positive_roots, 1):
        t.add(item="positive_root", index=i, value=format_weight(a))
    for i, w in enumerate(rs.fundamental_weights, 1):
        t.add(item="fundamental_weight", index=i, value=format_weight(w))
    t.add(item="positive_root_count", index="", value=len(rs.positive_roots))
    t.add(item="weyl_group_order", index="", value=rs.weyl_order)
    for i in minuscule_weights(rs):
        t.add(item="minuscule_index", index=i, value=len(build_minuscule(rs, i).steps))
    return t


def cmd_steps(cfg: Config) -> Table:
    sd = step_distribution(cfg.rep, cfg.theta)
    t = Table(["step", "exponents", "p_exact", "p_decimal"])
    for s in cfg.rep.steps:
        p = sd.probs[s]
        t.add(step=format_weight(s), exponents=";".join(str(m) for m in sd.exponents[s]),
              p_exact=_exact(p), p_decimal=_dec(p))
    return t


def _row_table(row: KernelRow, extra: dict | None = None) -> Table:
    t = Table(["source", "target", "p_exact", "p_decimal", "row_sum"])
    total = row.total()
    for target, p in row.entries:
        t.add(source=format_weight(row.source), target=format_weight(target), p_exact=_exact(p),
              p_decimal=_dec(p), row_sum=_dec(total))
    return t


def _kernel_row(cfg: Config, mode: str, n: int | None) -> KernelRow:
    if mode == "zero":
        return kernel_zero_drift(cfg.rs, cfg.rep, cfg.start)
    if mode == "drifted":
        return kernel_drifted(cfg.rs, cfg.rep, cfg.theta, cfg.start)
    if mode == "finite":
        if n is None or n < 2:
            raise ConfigError("finite mode needs --n >= 2")
        return cond.finite_horizon_row(cfg.rep, cfg.theta, cfg.start, n)
    raise ConfigError(f"unknown kernel mode {mode!r}")


def cmd_kernel(cfg: Config) -> Table:
    mode = cfg.mode or ("zero" if cfg.uniform else "drifted")
    return _row_table(_kernel_row(cfg, mode, cfg.n))


def _grid(cfg: Config, default_lo: int, default_hi: int) -> list[int]:
    if cfg.ns:
        ns = sorted({int(x) for x in str(cfg.ns).split(",") if x.strip()})
    else:
        lo = cfg.n if cfg.n is not None else default_lo
        hi = cfg.n_max if cfg.n_max is not None else default_hi
        ns = []
        k = lo
        while k <= hi:
            ns.append(k)
            k *= 2
    if not ns or ns[0] < 2:
        raise ConfigError("horizons must be >= 2")
    return ns


def _reference(cfg: Config) -> KernelRow:
    if cfg.uniform:
        return kernel_zero_drift(cfg.rs, cfg.rep, cfg.start)
    if cfg.interior:
        return kernel_drifted(cfg.rs, cfg.rep, cfg.theta, cfg.start)
    return character_row(cfg.rs, cfg.rep, solve_x(cfg.rs, cfg.theta), cfg.start, allow_walls=True)


def cmd_convergence(cfg: Config) -> Table:
    ns = _grid(cfg, 25, 400)
    if not (cfg.uniform or cfg.interior):
        raise ConfigError("convergence needs theta = 1 or theta in (0,1)^d; use boundary-sweep otherwise")
    ref = _reference(cfg)
    rows = cond.finite_horizon_rows(cfg.rep, cfg.theta, cfg.start, ns)
    t = Table(["n", "tv_raw", "tv_aitken"])
    for k, n in enumerate(ns):
        extr = ""
        if k >= 2:
            extr = _dec(cond.aitken_row([rows[m] for m in ns[k - 2:k + 1]]).tv_distance(ref))
        t.add(n=n, tv_raw=_dec(rows[n].tv_distance(ref)), tv_aitken=extr)
    return t


def cmd_theta_sweep(cfg: Config) -> Table:
    base = cfg.theta if not cfg.uniform else tuple(Q(1, 2) for _ in cfg.theta)
    if any(not 0 < b < 1 for b in base):
        raise ConfigError("theta-sweep needs a base theta in (0,1)^d")
    zero = kernel_zero_drift(cfg.rs, cfg.rep, cfg.start)
    t = Table(["k", "theta", "tv_distance"])
    for k in range(1, cfg.k_max + 1):
        th = tuple(1 - (1 - b) / 2 ** (k - 1) for b in base)
        row = kernel_drifted(cfg.rs, cfg.rep, th, cfg.start)
        t.add(k=k, theta=",".join(str(x) for x in th), tv_distance=_dec(row.tv_distance(zero)))
    return t


def _windows(cfg: Config, n_max: int) -> list[tuple[int, int]]:
    if cfg.windows:
        out = []
        for part in str(cfg.windows).split(","):
            lo, hi = part.split("-")
            out.append((int(lo), int(hi)))
        return out
    return [(n_max // 4, n_max // 2), (n_max // 2, n_max)]


def cmd_tail_fit(cfg: Config) -> Table:
    n_max = cfg.n_max if cfg.n_max is not None else 400
    if cfg.synthetic is not None:
        e = float(cfg.synthetic)
        series = [(n, float(n) ** (-e)) for n in range(1, n_max + 1)]
    else:
        fld = cond.SurvivalField(cfg.rep, cfg.theta, [cfg.start], n_max, exact=False)
        series = [(m, fld.psi(cfg.start, m)) for m in range(1, n_max + 1)]
    t = Table(["window_lo", "window_hi", "slope", "intercept", "max_residual", "n_points"])
    for w in _windows(cfg, n_max):
        fit = cond.tail_fit(series, w)
        t.add(window_lo=w[0], window_hi=w[1], slope=_dec(fit.slope), intercept=_dec(fit.intercept),
              max_residual=_dec(fit.max_residual), n_points=fit.n_points)
    return t


def cmd_boundary_sweep(cfg: Config) -> Table:
    if any(not 0 < t <= 1 for t in cfg.theta) or not any(t == 1 for t in cfg.theta):
        raise ConfigError("boundary-sweep needs theta in (0,1]^d with at least one entry equal to 1")
    ns = _grid(cfg, 25, 400)
    conj = _reference(cfg)
    rows = cond.finite_horizon_rows(cfg.rep, cfg.theta, cfg.start, ns)
    cd = conj.as_dict()
    t = Table(["n", "target", "p_finite", "p_conjectured", "tv_distance"])
    for n in ns:
        tv = _dec(rows[n].tv_distance(conj))
        for target, p in rows[n].entries:
            t.add(n=n, target=format_weight(target), p_finite=_dec(p), p_conjectured=_dec(cd[target]),
                  tv_distance=tv)
    return t


def cmd_simulate(cfg: Config) -> tuple[Table, Table]:
    """Trajectory table plus an empirical-versus-exact comparison table."""
    n = cfg.n if cfg.n is not None else 20
    mode = cfg.mode or "walk"
    traj = Table(["step", "weight", "dominant"])
    report = Table(["quantity", "target", "empirical", "exact", "std_error"])
    if mode == "walk":
        sd = step_distribution(cfg.rep, cfg.theta)
        tr = simulate_walk(sd, cfg.start, n, cfg.seed)
        for k, w in enumerate(tr.points):
            traj.add(step=k, weight=format_weight(w), dominant=int(is_dominant(cfg.rs, w)))
        est, se = estimate_survival(sd, cfg.start, n, cfg.trials, cfg.seed)
        fld = cond.SurvivalField(cfg.rep, cfg.theta, [cfg.start], n)
        report.add(quantity=f"survival_{n}", target=format_weight(cfg.start), empirical=_dec(est),
                   exact=_dec(fld.psi(cfg.start, n)), std_error=_dec(se))
        return traj, report

    rows: dict[Weight, KernelRow] = {}

    def provider(w: Weight) -> KernelRow:
        if w not in rows:
            rows[w] = _kernel_row_at(cfg, mode, w)
        return rows[w]

    tr = simulate_conditioned(provider, cfg.start, n, cfg.seed)
    for k, w in enumerate(tr.points):
        traj.add(step=k, weight=format_weight(w), dominant=1)
    counts = simulate_conditioned_batch(provider, cfg.start, 1, cfg.trials, cfg.seed)
    row = provider(cfg.start)
    for target, p in row.entries:
        c = counts.get((cfg.start, target), 0)
        f = c / cfg.trials
        report.add(quantity="successor_frequency", target=format_weight(target), empirical=_dec(f),
                   exact=_dec(p), std_error=_dec((float(p) * (1 - float(p)) / cfg.trials) ** 0.5))
    return traj, report


def _kernel_row_at(cfg: Config, mode: str, w: Weight) -> KernelRow:
    if mode == "zero":
        return kernel_zero_drift(cfg.rs, cfg.rep, w)
    if mode == "drifted":
        return kernel_drifted(cfg.rs, cfg.rep, cfg.theta, w)
    raise ConfigError(f"unknown simulate mode {mode!r}")


HANDLERS = {
    "describe": cmd_describe,
    "steps": cmd_steps,
    "kernel": cmd_kernel,
    "convergence": cmd_convergence,
    "theta-sweep": cmd_theta_sweep,
    "tail-fit": cmd_tail_fit,
    "boundary-sweep": cmd_boundary_sweep,
    "simulate": cmd_simulate,
}


# ---------------------------------------------------------------------------
# entry point

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="weylwalk", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="key=value file; flags override it")
    p.add_argument("--family")
    p.add_argument("--rank", type=int)
    p.add_argument("--minuscule", type=int, help="index of the minuscule fundamental weight")
    p.add_argument("--theta", help='comma separated rationals, e.g. "1/2,1/3,1/5"')
    p.add_argument("--start", help='dominant start weight in eps coordinates, or wN')
    p.add_argument("--n", type=int)
    p.add_argument("--n-max", dest="n_max", type=int)
    p.add_argument("--ns", help="explicit comma separated horizons")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--mode")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--out")
    p.add_argument("--k-max", dest="k_max", type=int)
    p.add_argument("--windows", help='tail-fit windows, e.g. "100-200,200-400"')
    p.add_argument("--synthetic", type=float, help="tail-fit self-test on n^-EXP")
    return p


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    values: dict[str, Any] = {}
    try:
        if args.config:
            values.update(_read_config_file(args.config))
        values.update({k: v for k, v in vars(args).items() if v is not None and k not in ("command", "config")})
        cfg = Config(values)
        result = HANDLERS[args.command](cfg)
        if isinstance(result, tuple):
            traj, report = result
            _emit(traj.render(cfg.format), cfg.out)
            if cfg.out:
                stem = Path(cfg.out)
                _emit(report.render(cfg.format), str(stem.with_name(stem.stem + ".report" + stem.suffix)))
            else:
                _emit(report.render(cfg.format), None)
        else:
            _emit(result.render(cfg.format), cfg.out)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run())
