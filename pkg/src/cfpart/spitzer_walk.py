"""
Random walks: Lindley/maximum c.f. recurrence, barrier walk recurrence and
both sides of Spitzer's identity.

Notation: ``S_n`` partial sums of iid steps with c.f. ``f``, ``M_n`` their
running maximum (same law as the Lindley waiting time ``T_n``), ``U_n`` the
walk clamped to ``[a, b]`` at every step, and

    phi_n(s, t) = E exp{i [s M_n + t (M_n - S_n)]}.

The recurrences store ``f_n`` / ``g_n`` on a :class:`GridCf`.  Products
``f_{n-1} f`` must be known on the whole line inside ``J``; two regimes are
supported:

* lattice steps: the grid spans exactly one period ``2T = 2 pi / step`` and
  the product is extended periodically (no truncation error);
* steps with a decaying c.f.: the product is set to zero outside ``[-T, T]``
  and ``J`` is charged ``int_{|v|>T} |f(v)| dv / (2 pi (T - |t|))``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad

from .cf_core import (
    GridCf,
    LineFunction,
    SampledCf,
    eval_cf,
    log_resolvent,
    power_cf,
    product,
    real_gcd,
    reflect_cf,
    sample_to_grid,
)
from .pv_engine import JResult, QuadratureConfig, j_linear, j_transform, pv_half_line
from .transforms import cf_positive_part

__all__ = [
    "SpitzerParams",
    "WalkRecurrenceConfig",
    "SeriesResult",
    "lindley_cf_recurrence",
    "barrier_cf_recurrence",
    "psi_k",
    "theta_k",
    "log_series_j",
    "spitzer_lhs",
    "spitzer_rhs",
    "spitzer_rhs_max",
    "spitzer_classic",
    "series_coefficients",
    "geometric_tail",
]

Z_MARGIN = 1e-6


@dataclass(frozen=True)
class SpitzerParams:
    z: complex
    s: float
    t: float
    N: int = 40

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        if abs(self.z) > 1.0 - Z_MARGIN:
            raise ValueError(f"|z| = {abs(self.z)} must be at most 1 - {Z_MARGIN}")
        if self.N < 1:
            raise ValueError("N must be a positive integer")


@dataclass(frozen=True)
class WalkRecurrenceConfig:
    T: float
    delta: float
    n_max: int
    cfg: QuadratureConfig = field(default_factory=QuadratureConfig)
    interpolation: str = "auto"

    def __post_init__(self):
        if self.n_max < 0:
            raise ValueError("n_max must be nonnegative")
        if self.interpolation not in ("auto", "cubic", "quintic", "trig"):
            raise ValueError(f"unknown interpolation rule {self.interpolation!r}")

    def rule(self, periodic: bool) -> str:
        """Resolve ``auto``: trigonometric on periodic grids, cubic spline otherwise."""
        if self.interpolation == "auto":
            return "trig" if periodic else "cubic"
        return self.interpolation


@dataclass(frozen=True)
class SeriesResult:
    """Truncated power-series value with its truncation and numerical error budgets."""

    value: complex
    truncation_bound: float
    err_estimate: float = 0.0
    converged: bool = True


def geometric_tail(z: complex, N: int) -> float:
    """``sum_{n > N} |z|^n = |z|^{N+1} / (1 - |z|)``."""
    r = abs(z)
    return r ** (N + 1) / (1.0 - r)


# --------------------------------------------------------------------------- #
# Grid recurrences
# --------------------------------------------------------------------------- #

class _TruncatedProduct(LineFunction):
    """``grid(u) * f(u)`` on ``[-T, T]``, zero outside, with the truncation charge."""

    def __init__(self, grid: GridCf, f: LineFunction, tail_mass: float):
        self.grid, self.f, self.tail_mass = grid, f, tail_mass
        T = grid.half_width
        self.breakpoints = (-T, T)

    def _eval(self, t):
        T = self.grid.half_width
        inside = np.abs(t) <= T
        out = np.zeros(t.shape, dtype=complex)
        out[inside] = self.grid(t[inside]) * self.f(t[inside])
        return out

    def extra_error(self, t):
        gap = max(self.grid.half_width - abs(t), self.grid.delta)
        return self.tail_mass / (2 * math.pi * gap)


def _tail_mass(f: LineFunction, T: float) -> float:
    g = lambda v: abs(complex(eval_cf(f, v)))
    right = quad(g, T, np.inf, limit=200)[0]
    left = quad(lambda v: g(-v), T, np.inf, limit=200)[0]
    return right + left


def _grid_mode(f: LineFunction, wcfg: WalkRecurrenceConfig, anchors: Sequence[float]) -> str:
    omega = math.pi / wcfg.T
    lat = f.lattice
    if lat is not None:
        if lat.divides_into(omega) and all(abs(x / omega - round(x / omega)) < 1e-9 for x in anchors):
            return "periodic"
        raise ValueError(
            "lattice step law needs a grid spanning one period: 2T must equal 2*pi/step "
            "and barriers/start must lie on the lattice")
    if wcfg.T < 1.0:
        raise ValueError("grid too narrow for a decaying step c.f.")
    return "truncated"


def _product_fn(prev: GridCf, f: LineFunction, mode: str, tail_mass: float) -> LineFunction:
    if mode == "periodic":
        return product(SampledCf(prev), f)
    return _TruncatedProduct(prev, f, tail_mass)


def _finish(samples, errs, flags, prev: GridCf, wcfg, periodic) -> GridCf:
    # error carried from the previous step: its node error passes through the
    # (1 + f)/2 term at most once and through J with a logarithmic factor;
    # interpolation between nodes enters only through J
    log_factor = 1.0 + math.log(2 * wcfg.T / wcfg.delta) / math.pi
    tol = prev.tolerance * log_factor + prev.interpolation_error() * log_factor / 2 \
        + float(np.max(errs)) + 1e-12
    return GridCf(wcfg.T, wcfg.delta, samples, interpolation=wcfg.rule(periodic), tolerance=tol,
                  periodic=periodic, node_err=np.asarray(errs), node_converged=np.asarray(flags))


def lindley_cf_recurrence(f: LineFunction, wcfg: WalkRecurrenceConfig) -> list[GridCf]:
    """Grid c.f.s of ``M_0, ..., M_{n_max}``.

    ``f_n = (1 + f_{n-1} f)/2 + J(f_{n-1} f) - J(f_{n-1} f)(0)``, each node
    computed as one principal-value integral.
    """
    mode = _grid_mode(f, wcfg, ())
    periodic = mode == "periodic"
    tail = 0.0 if periodic else _tail_mass(f, wcfg.T)
    one = sample_to_grid(_Unit(), wcfg.T, wcfg.delta, wcfg.rule(periodic), periodic=periodic)
    grids = [one]
    nodes = one.nodes
    f_nodes = np.asarray(f(nodes))
    for _ in range(wcfg.n_max):
        prev = grids[-1]
        P = _product_fn(prev, f, mode, tail)
        p_nodes = prev.samples * f_nodes
        out = np.empty(nodes.size, dtype=complex)
        errs = np.empty(nodes.size)
        flags = np.empty(nodes.size, dtype=bool)
        for i, t in enumerate(nodes):
            r = j_linear(P, [(1.0, 0.0, t), (-1.0, 0.0, 0.0)], wcfg.cfg)
            out[i] = 0.5 * (1.0 + p_nodes[i]) + r.value
            errs[i], flags[i] = r.err_estimate, r.converged
        grids.append(_finish(out, errs, flags, prev, wcfg, periodic))
    return grids


def barrier_cf_recurrence(f: LineFunction, a: float, b: float, x: float,
                          wcfg: WalkRecurrenceConfig) -> list[GridCf]:
    """Grid c.f.s of the clamped walk ``U_0 = x, U_n = a v (b ^ (U_{n-1} + X_n))``."""
    if not a <= x <= b:
        raise ValueError(f"need a <= x <= b, got a={a}, x={x}, b={b}")
    mode = _grid_mode(f, wcfg, (a, b, x))
    periodic = mode == "periodic"
    tail = 0.0 if periodic else _tail_mass(f, wcfg.T)
    nodes = -wcfg.T + wcfg.delta * np.arange(2 * int(round(wcfg.T / wcfg.delta)) + 1)
    nodes[nodes.size // 2] = 0.0
    g0 = GridCf(wcfg.T, wcfg.delta, np.exp(1j * x * nodes), interpolation=wcfg.rule(periodic),
                periodic=periodic)
    grids = [g0]
    ea_n, eb_n = np.exp(1j * a * nodes), np.exp(1j * b * nodes)
    for _ in range(wcfg.n_max):
        prev = grids[-1]
        if a == b:
            grids.append(GridCf(wcfg.T, wcfg.delta, ea_n, interpolation=wcfg.rule(periodic),
                                tolerance=prev.tolerance, periodic=periodic))
            continue
        P = _product_fn(prev, f, mode, tail)
        out = np.empty(nodes.size, dtype=complex)
        errs = np.empty(nodes.size)
        flags = np.empty(nodes.size, dtype=bool)
        for i, t in enumerate(nodes):
            terms = [(1.0, a, t), (-ea_n[i], a, 0.0), (eb_n[i], b, 0.0), (-1.0, b, t)]
            r = j_linear(P, terms, wcfg.cfg)
            out[i] = 0.5 * (ea_n[i] + eb_n[i]) + r.value
            errs[i], flags[i] = r.err_estimate, r.converged
        grids.append(_finish(out, errs, flags, prev, wcfg, periodic))
    return grids


class _Unit(LineFunction):
    """The constant c.f. 1 (law of the point mass at 0)."""

    def _eval(self, t):
        return np.ones(np.shape(t), dtype=complex)


# --------------------------------------------------------------------------- #
# Spitzer's identity
# --------------------------------------------------------------------------- #

def psi_k(f: LineFunction, k: int, s: float, cfg: QuadratureConfig | None = None) -> JResult:
    """``E exp{is (S_k)+}`` from the c.f. ``f^k`` of ``S_k``."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    return cf_positive_part(power_cf(f, k), s, cfg)


def theta_k(f: LineFunction, k: int, t: float, cfg: QuadratureConfig | None = None) -> JResult:
    """``E exp{it (S_k)-}``: ``psi_k`` of the reflected walk."""
    return psi_k(reflect_cf(f), k, t, cfg)


def log_series_j(f: LineFunction, z: complex, s: float, cfg: QuadratureConfig | None = None) -> JResult:
    """``(J ln 1/(1 - z f))(s)``, i.e. ``sum_k z^k/k (J f^k)(s)`` in closed form."""
    z = complex(z)
    if abs(z) >= 1:
        raise ValueError("log_series_j requires |z| < 1")
    if z == 0:
        return JResult(0j)
    return j_transform(log_resolvent(f, z), 0.0, s, cfg)


def _resolvent_frequency(f: LineFunction) -> float | None:
    lat = f.lattice
    if lat is None:
        return None
    return real_gcd(lat.step, lat.offset)


def _check_branch(w: np.ndarray) -> None:
    if np.any(w.real <= 0):
        raise ArithmeticError("1 - z f left the right half-plane; principal branch invalid")


def spitzer_rhs(f: LineFunction, p: SpitzerParams, cfg: QuadratureConfig | None = None) -> JResult:
    """Right-hand side of the rewritten Spitzer identity.

    ``[(1 - z f(s))(1 - z f(-t))]^{-1/2} exp{1/(4 pi i) int du/u (ln R_s(u) + ln R_t(u))}``
    with ``R_s(u) = (1 - z f(s-u))/(1 - z f(s+u))`` and
    ``R_t(u) = (1 - z f(-t+u))/(1 - z f(-t-u))``; the two logarithms are
    never merged.
    """
    z, s, t = p.z, p.s, p.t
    if z == 0:
        return JResult(1.0 + 0j)
    w_s, w_t = 1.0 - z * eval_cf(f, s), 1.0 - z * eval_cf(f, -t)
    _check_branch(np.array([w_s, w_t]))
    pref = 1.0 / cmath.sqrt(w_s * w_t)
    if s == 0 and t == 0:
        return JResult(pref)

    def numer(u):
        pts = np.concatenate([s - u, s + u, -t + u, -t - u])
        w = 1.0 - z * f(pts)
        _check_branch(w)
        a, b, c, d = np.split(w, 4)
        return np.log(a / b) + np.log(c / d)

    kinks = [abs(bp - x) for bp in f.breakpoints for x in (s, -t)]
    integral = pv_half_line(numer, _resolvent_frequency(f), cfg, [k for k in kinks if k > 0])
    value = pref * cmath.exp(integral.value)
    err = abs(value) * math.expm1(integral.err_estimate)
    return JResult(value, err, integral.converged)


def spitzer_rhs_max(f: LineFunction, s: float, z: complex, cfg: QuadratureConfig | None = None) -> JResult:
    """``sum_n E e^{is M_n} z^n`` (the ``t = 0`` case)."""
    return spitzer_rhs(f, SpitzerParams(z, s, 0.0, 1), cfg)


def spitzer_lhs(f: LineFunction | None, p: SpitzerParams,
                phi_oracle: Callable[[int], complex] | Sequence[complex]) -> SeriesResult:
    """``sum_{n <= N} phi_n(s, t) z^n`` from an oracle for ``phi_n``.

    The oracle may be a callable or a sequence; a ``stderr`` attribute, if
    present, is propagated into ``err_estimate``.
    """
    get = phi_oracle if callable(phi_oracle) else phi_oracle.__getitem__
    z = p.z
    total, zn = 0j, 1.0 + 0j
    for n in range(p.N + 1):
        total += get(n) * zn
        zn *= z
    r = abs(z)
    stderr = float(getattr(phi_oracle, "stderr", 0.0))
    spread = (1 - r ** (p.N + 1)) / (1 - r)
    return SeriesResult(total, geometric_tail(z, p.N), stderr * spread)


def spitzer_classic(f: LineFunction, p: SpitzerParams, cfg: QuadratureConfig | None = None) -> SeriesResult:
    """``exp sum_{k <= N} z^k/k [psi_k(s) + theta_k(t) - 1]`` (original Spitzer form)."""
    z = p.z
    expo, q_err, ok = 0j, 0.0, True
    for k in range(1, p.N + 1):
        ps = psi_k(f, k, p.s, cfg) if p.s != 0 else JResult(1.0)
        th = theta_k(f, k, p.t, cfg) if p.t != 0 else JResult(1.0)
        c = z ** k / k
        expo += c * (ps.value + th.value - 1.0)
        q_err += abs(c) * (ps.err_estimate + th.err_estimate)
        ok = ok and ps.converged and th.converged
    value = cmath.exp(expo)
    r = abs(z)
    tail_exp = 3.0 * r ** (p.N + 1) / ((p.N + 1) * (1.0 - r))
    return SeriesResult(value, abs(value) * math.expm1(tail_exp), abs(value) * math.expm1(q_err), ok)


def series_coefficients(F: Callable[[complex], complex], radius: float, n_points: int,
                        n_max: int) -> np.ndarray:
    """Taylor coefficients ``c_0..c_{n_max}`` of ``F`` from a DFT on ``|z| = radius``."""
    if n_points <= n_max:
        raise ValueError("need more sample points than coefficients")
    zs = radius * np.exp(2j * np.pi * np.arange(n_points) / n_points)
    vals = np.array([F(z) for z in zs])
    c = np.fft.fft(vals) / n_points
    return c[: n_max + 1] / radius ** np.arange(n_max + 1)
