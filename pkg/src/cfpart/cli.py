"""
Command-line front end.

    cfpart transform KIND --dist SPEC [--grid MIN:MAX:COUNT] ...
    cfpart walk {lindley,barrier} --dist SPEC --n N ...
    cfpart spitzer --dist SPEC --s 0.7 --t 0.4 --z-re 0.5 ...
    cfpart validate

``--dist`` takes a YAML/JSON file or an inline YAML mapping such as
``"{type: normal, mu: 0, sigma: 1}"``.  ``--config`` names a YAML file whose
keys mirror the long flag names (``distribution``, ``grid``, ``a``,
``strike``, ``z_re``, ``quadrature: {outer_cutoff: ..}``, ...); explicit
flags win over file values.

Exit status: 0 success, 1 usage error, 2 numerical non-convergence,
3 failed comparison or validation.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from typing import Any, Callable

import numpy as np
import yaml

from .cf_core import AnalyticCf, DistributionSpec, GridDomainError, real_gcd, spec_from_dict, spec_to_dict
from .oracles import (
    dp_clamped_walk,
    dp_lattice_max,
    dp_phi_provider,
    lattice_law_from_spec,
    law_to_cf,
    mc_phi_provider,
)
from .pv_engine import JResult, QuadratureConfig, j_linear
from .spitzer_walk import (
    SpitzerParams,
    WalkRecurrenceConfig,
    barrier_cf_recurrence,
    lindley_cf_recurrence,
    spitzer_classic,
    spitzer_lhs,
    spitzer_rhs,
)
from .transforms import cf_abs, cf_clamped, cf_joint, cf_positive_part, option_joint_cf

EXIT_OK, EXIT_USAGE, EXIT_NONCONVERGED, EXIT_FAILED = 0, 1, 2, 3
CSV_COLUMNS = ("t", "re", "im", "err", "converged")
TRANSFORM_KINDS = ("positive-part", "abs", "clamp", "joint", "option", "signed-tail", "j")
SPITZER_TOL = 1e-4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# --------------------------------------------------------------------------- #
# Configuration
# --------------------------------------------------------------------------- #

_PI_RE = re.compile(r"^\s*([+-]?)\s*(\d*\.?\d*(?:[eE][+-]?\d+)?)\s*\*?\s*pi\s*(?:/\s*(\d*\.?\d+))?\s*$")


def parse_real(text) -> float:
    """Float, also accepting multiples of pi: ``pi``, ``-2pi``, ``pi/64``, ``0.5*pi``."""
    if isinstance(text, (int, float)):
        return float(text)
    s = str(text).strip().lower()
    try:
        return float(s)
    except ValueError:
        pass
    m = _PI_RE.match(s)
    if not m:
        raise UsageError(f"cannot parse number {text!r}")
    sign, mult, div = m.groups()
    v = (float(mult) if mult else 1.0) * math.pi / (float(div) if div else 1.0)
    return -v if sign == "-" else v


def parse_list(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [parse_real(x) for x in text]
    if isinstance(text, (int, float)):
        return [float(text)]
    return [parse_real(x) for x in str(text).split(",") if x.strip()]


def parse_grid(text) -> np.ndarray:
    """``min:max:count`` (or a mapping with those keys) to an evenly spaced grid."""
    if isinstance(text, dict):
        lo, hi, n = text.get("min"), text.get("max"), text.get("count")
    else:
        parts = str(text).split(":")
        if len(parts) != 3:
            raise UsageError(f"grid must be min:max:count, got {text!r}")
        lo, hi, n = parts
    lo, hi = parse_real(lo), parse_real(hi)
    try:
        n = int(n)
    except (TypeError, ValueError):
        raise UsageError(f"grid count must be an integer, got {n!r}") from None
    if n < 1:
        raise UsageError("grid count must be at least 1")
    if n == 1:
        if lo != hi:
            raise UsageError("a one-point grid needs min == max")
        return np.array([lo])
    return np.linspace(lo, hi, n)


def load_distribution(text) -> DistributionSpec:
    if isinstance(text, dict):
        data = text
    elif isinstance(text, str) and os.path.isfile(text):
        with open(text) as fh:
            data = yaml.safe_load(fh)
        if isinstance(data, dict) and "distribution" in data:
            data = data["distribution"]
    else:
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise UsageError(f"--dist is neither a file nor valid inline YAML: {exc}") from None
    try:
        return spec_from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad distribution: {exc}") from None


@dataclass
class RunConfig:
    """Parsed and validated parameters of one CLI run."""

    distribution: DistributionSpec
    grid: np.ndarray | None = None
    a: float | None = None
    b: float | None = None
    x: float = 0.0
    strike: float | None = None
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0
    z: list[complex] = field(default_factory=lambda: [0.5 + 0j])
    s: list[float] = field(default_factory=lambda: [0.0])
    t: list[float] = field(default_factory=lambda: [0.0])
    n: int = 5
    N: int = 40
    T: float | None = None
    delta: float | None = None
    interpolation: str = "auto"
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    fmt: str = "csv"
    seed: int = 12345
    paths: int = 200_000
    workers: int = 1
    out: str | None = None


_FLAG_KEYS = ("grid", "a", "b", "x", "strike", "alpha", "beta", "gamma", "z_re", "z_im", "s", "t",
              "n", "N", "T", "delta", "interpolation", "cutoff_A", "tol", "seed", "format", "out",
              "workers", "paths")


def build_config(args: argparse.Namespace) -> RunConfig:
    raw: dict[str, Any] = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                raw = yaml.safe_load(fh) or {}
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from None
        if not isinstance(raw, dict):
            raise UsageError("config file must hold a mapping")
    for key in _FLAG_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            raw[key] = v
    dist = getattr(args, "dist", None) or raw.get("distribution")
    if dist is None:
        raise UsageError("a distribution is required (--dist or 'distribution' in --config)")
    cfg = RunConfig(load_distribution(dist))
    if raw.get("grid") is not None:
        cfg.grid = parse_grid(raw["grid"])
    for key in ("a", "b", "strike", "T", "delta"):
        if raw.get(key) is not None:
            setattr(cfg, key, parse_real(raw[key]))
    for key in ("x", "alpha", "beta", "gamma"):
        if raw.get(key) is not None:
            setattr(cfg, key, parse_real(raw[key]))
    for key in ("s", "t"):
        if raw.get(key) is not None:
            setattr(cfg, key, parse_list(raw[key]))
    if raw.get("z_re") is not None or raw.get("z_im") is not None:
        zr = parse_list(raw.get("z_re", 0.0))
        zi = parse_list(raw.get("z_im", 0.0))
        if len(zr) == 1 and len(zi) > 1:
            zr = zr * len(zi)
        if len(zi) == 1 and len(zr) > 1:
            zi = zi * len(zr)
        if len(zr) != len(zi):
            raise UsageError("--z-re and --z-im lists must have equal length")
        cfg.z = [complex(r, i) for r, i in zip(zr, zi)]
    for key in ("n", "N", "seed", "workers", "paths"):
        if raw.get(key) is not None:
            try:
                setattr(cfg, key, int(raw[key]))
            except (TypeError, ValueError):
                raise UsageError(f"{key} must be an integer") from None
    if raw.get("interpolation") is not None:
        cfg.interpolation = str(raw["interpolation"])
    cfg.fmt = str(raw.get("format", "csv"))
    if cfg.fmt not in ("csv", "json"):
        raise UsageError("format must be csv or json")
    cfg.out = raw.get("out")
    q = dict(raw.get("quadrature") or {})
    if raw.get("cutoff_A") is not None:
        q["outer_cutoff"] = parse_real(raw["cutoff_A"])
    if raw.get("tol") is not None:
        q["panel_tol"] = parse_real(raw["tol"])
    known = {f.name for f in fields(QuadratureConfig)}
    if set(q) - known:
        raise UsageError(f"unknown quadrature keys: {sorted(set(q) - known)}")
    try:
        cfg.quadrature = QuadratureConfig(**q)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad quadrature settings: {exc}") from None
    if cfg.n < 0 or cfg.N < 1 or cfg.workers < 1 or cfg.paths < 1:
        raise UsageError("n must be >= 0; N, workers and paths must be >= 1")
    return cfg


# --------------------------------------------------------------------------- #
# Output
# --------------------------------------------------------------------------- #

def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def to_csv(columns: tuple[str, ...], rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in columns])
    return buf.getvalue()


def to_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _row(t: float, r: JResult) -> dict:
    return {"t": float(t), "re": r.value.real, "im": r.value.imag,
            "err": r.err_estimate, "converged": r.converged}


def _pmap(fn: Callable, items, workers: int) -> list:
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


# --------------------------------------------------------------------------- #
# transform
# --------------------------------------------------------------------------- #

def _transform_fn(kind: str, cfg: RunConfig) -> Callable[[float], JResult]:
    f = AnalyticCf(cfg.distribution)
    q = cfg.quadrature

    def need(*names):
        missing = [n for n in names if getattr(cfg, n) is None]
        if missing:
            raise UsageError(f"transform {kind} needs {', '.join('--' + m for m in missing)}")

    if kind == "positive-part":
        return lambda t: cf_positive_part(f, t, q)
    if kind == "abs":
        return lambda t: cf_abs(f, t, q)
    if kind == "clamp":
        need("a", "b")
        if cfg.a > cfg.b:
            raise UsageError("clamp needs a <= b")
        return lambda t: cf_clamped(f, cfg.a, cfg.b, t, q)
    if kind == "joint":
        return lambda t: cf_joint(f, t * cfg.alpha, t * cfg.beta, t * cfg.gamma, q)
    if kind == "option":
        need("strike")
        return lambda t: option_joint_cf(f, cfg.strike, t * cfg.alpha, t * cfg.beta, t * cfg.gamma, q)
    if kind == "signed-tail":
        return lambda a: j_linear(f, [(1.0, a, 0.0)], q)
    if kind == "j":
        a = 0.0 if cfg.a is None else cfg.a
        return lambda t: j_linear(f, [(1.0, a, t)], q)
    raise UsageError(f"unknown transform {kind!r}")


def cmd_transform(kind: str, cfg: RunConfig) -> tuple[str, int]:
    """One row per grid frequency.

    ``joint`` and ``option`` scale ``(alpha, beta, gamma)`` by the grid
    variable; ``signed-tail`` uses the grid variable as the threshold ``a``
    (default grid: the single point ``--a``).
    """
    grid = cfg.grid
    if grid is None:
        if kind == "signed-tail":
            grid = np.array([0.0 if cfg.a is None else cfg.a])
        elif kind in ("joint", "option", "j"):
            grid = np.array([1.0 if kind != "j" else 0.0])
        else:
            raise UsageError("--grid is required")
    fn = _transform_fn(kind, cfg)
    results = _pmap(fn, [float(t) for t in grid], cfg.workers)
    rows = [_row(t, r) for t, r in zip(grid, results)]
    if cfg.fmt == "json":
        text = to_json({"command": "transform", "kind": kind,
                        "distribution": spec_to_dict(cfg.distribution),
                        "columns": list(CSV_COLUMNS), "rows": rows})
    else:
        text = to_csv(CSV_COLUMNS, rows)
    ok = all(r.converged for r in results)
    return text, EXIT_OK if ok else EXIT_NONCONVERGED


# --------------------------------------------------------------------------- #
# walk
# --------------------------------------------------------------------------- #

def _walk_grid(cfg: RunConfig) -> tuple[float, float]:
    lat = AnalyticCf(cfg.distribution).lattice
    if cfg.T is not None:
        T = cfg.T
    elif lat is not None and (lat.step > 0 or lat.offset != 0):
        T = math.pi / real_gcd(lat.step, abs(lat.offset))
    elif lat is not None:
        T = math.pi
    else:
        T = 8.0
    delta = cfg.delta if cfg.delta is not None else T / 64
    return T, delta


def cmd_walk(kind: str, cfg: RunConfig) -> tuple[str, int]:
    f = AnalyticCf(cfg.distribution)
    T, delta = _walk_grid(cfg)
    try:
        wcfg = WalkRecurrenceConfig(T, delta, cfg.n, cfg.quadrature, cfg.interpolation)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    law = None
    if cfg.distribution.atoms() is not None:
        try:
            law = lattice_law_from_spec(cfg.distribution)
        except ValueError:
            law = None
    if kind == "lindley":
        grids = lindley_cf_recurrence(f, wcfg)
        exact = None if law is None else [h.max_law for h in dp_lattice_max(law, cfg.n, history=True)]
    elif kind == "barrier":
        if cfg.a is None or cfg.b is None:
            raise UsageError("barrier walk needs --a and --b")
        grids = barrier_cf_recurrence(f, cfg.a, cfg.b, cfg.x, wcfg)
        exact = None
        if law is not None:
            try:
                exact = dp_clamped_walk(law, cfg.a, cfg.b, cfg.x, cfg.n, history=True)
            except ValueError:
                exact = None
    else:
        raise UsageError(f"unknown walk {kind!r}")
    blocks, rows, ok, worst = [], [], True, 0.0
    for n, g in enumerate(grids):
        nodes = g.nodes
        dp = None if exact is None else law_to_cf(exact[n], nodes)
        errs = np.zeros(nodes.size) if g.node_err is None else g.node_err
        conv = np.ones(nodes.size, bool) if g.node_converged is None else g.node_converged
        ok = ok and bool(np.all(conv))
        block_rows = []
        for k, t in enumerate(nodes):
            r = {"n": n, "t": float(t), "re": float(g.samples[k].real), "im": float(g.samples[k].imag),
                 "err": float(errs[k]), "converged": bool(conv[k])}
            if dp is not None:
                r["dp_re"], r["dp_im"] = float(dp[k].real), float(dp[k].imag)
            block_rows.append(r)
        diff = None if dp is None else float(np.max(np.abs(g.samples - dp)))
        if diff is not None:
            worst = max(worst, diff)
        blocks.append({"n": n, "tolerance": g.tolerance, "max_abs_diff_dp": diff, "rows": block_rows})
        rows.extend(block_rows)
    if cfg.fmt == "json":
        text = to_json({"command": "walk", "kind": kind, "distribution": spec_to_dict(cfg.distribution),
                        "T": T, "delta": delta, "blocks": blocks,
                        "max_abs_diff_dp": None if exact is None else worst})
    else:
        cols = ("n",) + CSV_COLUMNS + (("dp_re", "dp_im") if exact is not None else ())
        text = to_csv(cols, rows)
    return text, EXIT_OK if ok else EXIT_NONCONVERGED


# --------------------------------------------------------------------------- #
# spitzer
# --------------------------------------------------------------------------- #

def spitzer_verdict(entry: dict, tol: float = SPITZER_TOL) -> bool:
    """Pass iff both gaps fit under their error budgets plus ``tol``.

    Uses only fields stored in the report, so a re-parsed JSON report gives
    the same verdict.
    """
    c = complex
    rhs = c(entry["rhs"]["re"], entry["rhs"]["im"])
    lhs = c(entry["lhs"]["re"], entry["lhs"]["im"])
    cls = c(entry["classic"]["re"], entry["classic"]["im"])
    budget_l = entry["lhs"]["truncation_bound"] + entry["lhs"]["err"] + entry["rhs"]["err"] + tol
    budget_c = entry["classic"]["truncation_bound"] + entry["classic"]["err"] + entry["rhs"]["err"] + tol
    return abs(lhs - rhs) <= budget_l and abs(cls - rhs) <= budget_c


def _spitzer_entry(f, law, cfg: RunConfig, s: float, t: float, z: complex) -> dict:
    p = SpitzerParams(z, s, t, cfg.N)
    if law is not None:
        prov = dp_phi_provider(law, s, t, cfg.N)
        source = "dp"
    else:
        prov = mc_phi_provider(cfg.distribution, s, t, cfg.N, cfg.paths, cfg.seed)
        source = "monte_carlo"
    lhs = spitzer_lhs(f, p, prov)
    rhs = spitzer_rhs(f, p, cfg.quadrature)
    cls = spitzer_classic(f, p, cfg.quadrature)
    entry = {
        "s": s, "t": t, "z_re": z.real, "z_im": z.imag, "N": cfg.N, "lhs_source": source,
        "lhs": {"re": lhs.value.real, "im": lhs.value.imag, "truncation_bound": lhs.truncation_bound,
                "err": lhs.err_estimate},
        "rhs": {"re": rhs.value.real, "im": rhs.value.imag, "err": rhs.err_estimate,
                "converged": rhs.converged},
        "classic": {"re": cls.value.real, "im": cls.value.imag, "truncation_bound": cls.truncation_bound,
                    "err": cls.err_estimate, "converged": cls.converged},
    }
    entry["gap_lhs"] = abs(lhs.value - rhs.value)
    entry["gap_classic"] = abs(cls.value - rhs.value)
    entry["pass"] = spitzer_verdict(entry)
    return entry


SPITZER_COLUMNS = ("s", "t", "z_re", "z_im", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "classic_re",
                   "classic_im", "lhs_bound", "rhs_err", "classic_bound", "gap_lhs", "gap_classic",
                   "converged", "pass")


def cmd_spitzer(cfg: RunConfig) -> tuple[str, int]:
    f = AnalyticCf(cfg.distribution)
    law = None
    if cfg.distribution.atoms() is not None:
        try:
            law = lattice_law_from_spec(cfg.distribution)
        except ValueError:
            law = None
    for z in cfg.z:
        if abs(z) > 1 - 1e-6:
            raise UsageError(f"|z| = {abs(z)} must be below 1")
    tuples = list(itertools.product(cfg.s, cfg.t, cfg.z))
    entries = _pmap(lambda stz: _spitzer_entry(f, law, cfg, *stz), tuples, cfg.workers)
    if cfg.fmt == "json":
        text = to_json({"command": "spitzer", "distribution": spec_to_dict(cfg.distribution),
                        "tolerance": SPITZER_TOL, "entries": entries})
    else:
        rows = []
        for e in entries:
            rows.append({
                "s": e["s"], "t": e["t"], "z_re": e["z_re"], "z_im": e["z_im"],
                "lhs_re": e["lhs"]["re"], "lhs_im": e["lhs"]["im"],
                "rhs_re": e["rhs"]["re"], "rhs_im": e["rhs"]["im"],
                "classic_re": e["classic"]["re"], "classic_im": e["classic"]["im"],
                "lhs_bound": e["lhs"]["truncation_bound"] + e["lhs"]["err"],
                "rhs_err": e["rhs"]["err"],
                "classic_bound": e["classic"]["truncation_bound"] + e["classic"]["err"],
                "gap_lhs": e["gap_lhs"], "gap_classic": e["gap_classic"],
                "converged": e["rhs"]["converged"] and e["classic"]["converged"], "pass": e["pass"]})
        text = to_csv(SPITZER_COLUMNS, rows)
    if not all(e["rhs"]["converged"] and e["classic"]["converged"] for e in entries):
        return text, EXIT_NONCONVERGED
    return text, EXIT_OK if all(e["pass"] for e in entries) else EXIT_FAILED


# --------------------------------------------------------------------------- #
# validate
# --------------------------------------------------------------------------- #

def run_validation(seed: int = 12345, mc_samples: int = 200_000) -> list[dict]:
    """Small oracle cross-check suite; one record per check."""
    from .cf_core import Exponential, Normal, PointMass, TwoPoint
    from .oracles import mc_functional_cf, positive_part, absolute, clamp
    from .pv_engine import j_transform
    from .transforms import cf_abs_forms

    out = []

    def record(name, value, tol):
        out.append({"check": name, "value": float(value), "tol": float(tol), "pass": bool(value <= tol)})

    worst = 0.0
    for x, a, t in itertools.product((-2.0, 0.5, 3.0), (-1.0, 0.0, 2.0), (-1.0, 0.0, 1.0)):
        r = j_transform(AnalyticCf(PointMass(x)), a, t)
        exact = 0.5 * complex(math.cos(t * x), math.sin(t * x)) * math.copysign(1.0, x - a)
        worst = max(worst, abs(r.value - exact) - max(r.err_estimate, 1e-6))
    record("point_mass_exactness", max(worst, 0.0), 0.0)

    f = AnalyticCf(Exponential(1.0))
    worst = max(abs(cf_positive_part(f, t).value - 1 / (1 - 1j * t)) for t in np.linspace(-10, 10, 21))
    record("exponential_fixed_point", worst, 1e-6)

    spec = Normal(0.3, 1.2)
    f = AnalyticCf(spec)
    worst = 0.0
    for func, calc in ((positive_part, lambda t: cf_positive_part(f, t)),
                       (absolute, lambda t: cf_abs(f, t)),
                       (clamp(-1.0, 1.0), lambda t: cf_clamped(f, -1.0, 1.0, t))):
        ests = mc_functional_cf(spec, func, [0.5, 1.5], mc_samples, seed)
        for t, est in zip((0.5, 1.5), ests):
            r = calc(t)
            worst = max(worst, abs(r.value - est.value) / (4 * est.stderr + r.err_estimate))
    record("monte_carlo_concordance_ratio", worst, 1.0)

    first, second = cf_abs_forms(AnalyticCf(TwoPoint(-1.0, 0.3, 2.0)), 0.8)
    record("abs_dual_forms", abs(first.value - second.value),
           first.err_estimate + second.err_estimate + 1e-9)

    tp = TwoPoint(-1.0, 0.5, 1.0)
    law = lattice_law_from_spec(tp)
    grids = lindley_cf_recurrence(AnalyticCf(tp), WalkRecurrenceConfig(math.pi, math.pi / 32, 5))
    hist = dp_lattice_max(law, 5, history=True)
    worst = max(float(np.max(np.abs(g.samples - law_to_cf(h.max_law, g.nodes)))) for g, h in zip(grids, hist))
    record("lindley_vs_dp", worst, 1e-4)

    p = SpitzerParams(0.5, 0.7, 0.4, 40)
    rhs = spitzer_rhs(AnalyticCf(tp), p)
    lhs = spitzer_lhs(None, p, dp_phi_provider(law, 0.7, 0.4, 40))
    record("spitzer_round_trip", abs(lhs.value - rhs.value),
           lhs.truncation_bound + rhs.err_estimate + SPITZER_TOL)
    return out


def cmd_validate(fmt: str, seed: int) -> tuple[str, int]:
    checks = run_validation(seed)
    if fmt == "json":
        text = to_json({"command": "validate", "seed": seed, "checks": checks})
    else:
        text = to_csv(("check", "value", "tol", "pass"), checks)
    return text, EXIT_OK if all(c["pass"] for c in checks) else EXIT_FAILED


# --------------------------------------------------------------------------- #
# Entry point
# --------------------------------------------------------------------------- #

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dist", help="distribution: YAML/JSON file or inline YAML mapping")
    p.add_argument("--config", help="YAML config file (keys mirror flag names)")
    p.add_argument("--grid", help="frequency grid MIN:MAX:COUNT; 'pi' multiples allowed")
    for name in ("a", "b", "x", "strike", "alpha", "beta", "gamma", "T", "delta"):
        p.add_argument(f"--{name}")
    p.add_argument("--z-re", dest="z_re", help="real part(s) of z, comma separated")
    p.add_argument("--z-im", dest="z_im", help="imaginary part(s) of z, comma separated")
    p.add_argument("--s", help="s value(s), comma separated")
    p.add_argument("--t", help="t value(s), comma separated")
    p.add_argument("--n", type=int, help="walk steps n_max")
    p.add_argument("--N", type=int, help="Spitzer series truncation order")
    p.add_argument("--interpolation", choices=("auto", "cubic", "quintic", "trig"))
    p.add_argument("--cutoff-A", dest="cutoff_A", help="first smooth cutoff of the tail quadrature")
    p.add_argument("--tol", help="per-panel absolute quadrature tolerance")
    p.add_argument("--seed", type=int)
    p.add_argument("--paths", type=int, help="Monte Carlo paths when no exact DP is available")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--workers", type=int, help="threads for independent evaluations")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cfpart", description="Characteristic functions of transformed "
                     "random variables, walk recurrences and Spitzer's identity.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("transform", help="evaluate a transform over a frequency grid")
    p.add_argument("kind", choices=TRANSFORM_KINDS)
    _add_common(p)
    p = sub.add_parser("walk", help="run the Lindley or barrier recurrence")
    p.add_argument("kind", choices=("lindley", "barrier"))
    _add_common(p)
    p = sub.add_parser("spitzer", help="compare the sides of Spitzer's identity")
    _add_common(p)
    p = sub.add_parser("validate", help="run the oracle cross-check suite")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--seed", type=int, default=12345)
    p.add_argument("--out")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        if args.command == "validate":
            text, code = cmd_validate(args.format, args.seed)
            if args.out:
                with open(args.out, "w") as fh:
                    fh.write(text)
            else:
                sys.stdout.write(text)
            return code
        cfg = build_config(args)
        if args.command == "transform":
            text, code = cmd_transform(args.kind, cfg)
        elif args.command == "walk":
            text, code = cmd_walk(args.kind, cfg)
        else:
            text, code = cmd_spitzer(cfg)
    except UsageError as exc:
        print(f"cfpart: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, GridDomainError, ArithmeticError) as exc:
        print(f"cfpart: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(text, cfg)
    if code == EXIT_NONCONVERGED:
        print("cfpart: warning: some quadratures did not converge (see 'converged' column)",
              file=sys.stderr)
    elif code == EXIT_FAILED:
        print("cfpart: comparison failed for at least one entry", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
