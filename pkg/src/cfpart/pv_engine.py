"""
Principal-value operator ``J_a`` and its truncated form.

For a function ``F`` on the line,

    (J_a F)(t) = 1/(2 pi i) * PV int e^{-iua} F(t+u) du/u
               = 1/(2 pi i) * int_0^inf [e^{-iua} F(t+u) - e^{iua} F(t-u)] du/u,

and for a c.f. ``F = f`` this equals ``E e^{itX} sign(X-a) / 2``.  The second
(symmetric) form has a bounded integrand, so the principal value at ``u=0``
is handled exactly.  The remaining difficulty is the tail ``u -> inf``,
treated in one of two ways:

``fold``
    When every frequency of the numerator is a multiple of some ``w0`` the
    numerator is periodic with period ``P = 2 pi / w0`` and has zero mean, and

        int_0^inf h(u)/u du = -(1/P) int_0^P h(u) digamma(u/P) du

    exactly (sum the tail period by period).  Lattice laws, their powers and
    logarithms, and periodic grids all land here.

``window``
    Otherwise the integral is cut off smoothly at ``X`` (an ``erfc`` taper of
    width proportional to ``X``), which suppresses oscillatory tail terms
    like ``exp(-(w X)^2 / 16)``, for ``X = A, 2A, ..., 2^K A``; the remaining
    non-oscillatory algebraic tail ``c_1/X + c_2/X^2 + ...`` is removed by
    Richardson extrapolation.

Mixture-like inputs are split with :meth:`LineFunction.parts` and atomic
inputs whose atoms are incommensurate with ``a`` are split atom by atom, so
the ``window`` branch only ever sees decaying integrands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.special import digamma, erfc

from .cf_core import AnalyticCf, LineFunction, PointMass, real_gcd

__all__ = [
    "QuadratureConfig",
    "JResult",
    "adaptive_gk",
    "j_transform",
    "j_truncated",
    "j_diff",
    "j_linear",
    "hilbert",
    "pv_half_line",
]

# Gauss-Kronrod 7/15 nodes on [-1, 1] and weights
_XK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
])
_WK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG = np.array([0.0, 0.129484966168869693270611432679082, 0.0, 0.279705391489276667901467771423780,
                0.0, 0.381830050505118944950369775488975, 0.0, 0.417959183673469387755102040816327])

NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
W_KRONROD = np.concatenate([_WK[:-1], _WK[::-1]])
W_GAUSS = np.concatenate([_WG[:-1], _WG[::-1]])

# taper W(v) = erfc(k (v - v0)) / erfc(-k v0); negligible (< 1e-17) beyond v = V_END
_TAPER_K = 2.0
_TAPER_V0 = 2.0
_V_END = _TAPER_V0 + 3.0 / _TAPER_K * 2.0


@dataclass(frozen=True)
class QuadratureConfig:
    """Cutoffs and tolerances for principal-value integrals.

    ``outer_cutoff`` is the first smooth cutoff ``A``; ``tail_periods`` is
    the number of cutoff doublings ``A, 2A, ..., 2^K A`` and ``accel_terms``
    the Richardson order applied across them.  Periodic integrands need
    neither.
    """

    outer_cutoff: float = 32.0
    panel_tol: float = 1e-10
    max_depth: int = 30
    tail_periods: int = 4
    accel_terms: int = 3
    tail_tol: float = 1e-6
    max_panels: int = 400_000

    def __post_init__(self):
        if not self.outer_cutoff >= 1:
            raise ValueError("outer_cutoff must be >= 1")
        if not 0 < self.panel_tol < 1:
            raise ValueError("panel_tol must lie in (0, 1)")
        if self.max_depth < 1 or self.tail_periods < 1 or self.accel_terms < 1:
            raise ValueError("max_depth, tail_periods and accel_terms must be >= 1")


@dataclass(frozen=True)
class JResult:
    """A computed value with an absolute error estimate."""

    value: complex
    err_estimate: float = 0.0
    converged: bool = True

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))
        object.__setattr__(self, "err_estimate", float(self.err_estimate))
        object.__setattr__(self, "converged", bool(self.converged))

    def __add__(self, other):
        if isinstance(other, JResult):
            return JResult(self.value + other.value, self.err_estimate + other.err_estimate,
                           self.converged and other.converged)
        return JResult(self.value + complex(other), self.err_estimate, self.converged)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-1.0) * other if isinstance(other, JResult) else self + (-complex(other))

    def __rsub__(self, other):
        return (-1.0) * self + other

    def __mul__(self, c):
        c = complex(c)
        return JResult(self.value * c, self.err_estimate * abs(c), self.converged)

    __rmul__ = __mul__

    def __neg__(self):
        return (-1.0) * self


ZERO = JResult(0j, 0.0, True)


# --------------------------------------------------------------------------- #
# Adaptive Gauss-Kronrod
# --------------------------------------------------------------------------- #

@dataclass
class _Quad:
    value: complex
    err: float
    converged: bool
    x: np.ndarray | None = None      # accepted nodes, shape (panels, 15)
    wy: np.ndarray | None = None     # half-width * Kronrod weight * integrand


def adaptive_gk(func: Callable[[np.ndarray], np.ndarray], breaks: Sequence[float], tol: float,
                max_depth: int = 30, max_panels: int = 400_000, keep: bool = False) -> _Quad:
    """Integrate ``func`` over ``[breaks[0], breaks[-1]]`` by panel bisection.

    All active panels are evaluated in one vectorised call per level.  A panel
    is accepted once its Kronrod-Gauss difference is at most ``tol``
    (absolute).  Panels still failing at ``max_depth`` are accepted but mark
    the result as not converged.
    """
    b = np.unique(np.asarray(breaks, dtype=float))
    lo, hi = b[:-1], b[1:]
    total, err, ok = 0j, 0.0, True
    kept_x, kept_wy = [], []
    n_done = 0
    for depth in range(max_depth + 1):
        if lo.size == 0:
            break
        c, h = 0.5 * (lo + hi), 0.5 * (hi - lo)
        x = c[:, None] + h[:, None] * NODES[None, :]
        y = np.asarray(func(x.ravel()), dtype=complex).reshape(x.shape)
        if not np.all(np.isfinite(y)):
            raise FloatingPointError("non-finite integrand value")
        K = h * (y @ W_KRONROD)
        E = np.abs(K - h * (y @ W_GAUSS))
        last = depth == max_depth or n_done + 2 * lo.size > max_panels
        acc = E <= tol
        if last:
            if not np.all(acc):
                ok = False
            acc[:] = True
        total += K[acc].sum()
        err += float(E[acc].sum())
        if keep:
            kept_x.append(x[acc])
            kept_wy.append(h[acc, None] * W_KRONROD[None, :] * y[acc])
        n_done += int(acc.sum())
        rej = ~acc
        lo, hi, mid = lo[rej], hi[rej], c[rej]
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])
    q = _Quad(total, err, ok)
    if keep:
        q.x = np.concatenate(kept_x) if kept_x else np.zeros((0, 15))
        q.wy = np.concatenate(kept_wy) if kept_wy else np.zeros((0, 15), dtype=complex)
    return q


# --------------------------------------------------------------------------- #
# Tail strategies for int_0^inf h(u)/u du, h odd-symmetric numerator, h(0) = 0
# --------------------------------------------------------------------------- #

def _fold(numer, omega0: float, kinks: Sequence[float], cfg: QuadratureConfig) -> _Quad:
    P = 2.0 * math.pi / omega0
    breaks = [P * k / 16.0 for k in range(17)]
    breaks += [k % P for k in kinks]

    def integrand(u):
        return numer(u) * (-digamma(u / P) / P)

    return adaptive_gk(integrand, breaks, cfg.panel_tol, cfg.max_depth, cfg.max_panels)


def _taper(v):
    return erfc(_TAPER_K * (v - _TAPER_V0)) / erfc(-_TAPER_K * _TAPER_V0)


def _richardson(values: np.ndarray, order: int) -> tuple[complex, float]:
    """Extrapolate ``I(2^m A)`` to ``m -> inf`` assuming an expansion in powers of ``2^-m``."""
    n = len(values)
    table = [list(values)]
    for j in range(1, min(order, n - 1) + 1):
        prev = table[-1]
        f = 2.0 ** j
        table.append([(f * prev[i + 1] - prev[i]) / (f - 1.0) for i in range(len(prev) - 1)])
    best = table[-1][-1]
    cands = [table[-2][-1]] if len(table) > 1 else []
    if len(table[-1]) > 1:
        cands.append(table[-1][-2])
    err = max((abs(best - c) for c in cands), default=abs(values[-1] - values[-2]) if n > 1 else 0.0)
    return complex(best), float(err)


def _window(numer, kinks: Sequence[float], cfg: QuadratureConfig) -> _Quad:
    A, K = cfg.outer_cutoff, cfg.tail_periods
    X = A * 2.0 ** np.arange(K + 1)
    U = X[-1] * _V_END
    breaks = list(np.arange(0.0, A, 1.0))
    edge = A
    while edge < U:
        nxt = min(2 * edge, U)
        breaks += list(np.linspace(edge, nxt, 33)[:-1])
        edge = nxt
    breaks.append(U)
    breaks += [k for k in kinks if 0 < k < U]

    def integrand(u):
        return numer(u) / u

    q = adaptive_gk(integrand, breaks, cfg.panel_tol, cfg.max_depth, cfg.max_panels, keep=True)
    vals = np.array([np.sum(q.wy * _taper(q.x / x)) for x in X])
    best, tail_err = _richardson(vals, cfg.accel_terms)
    return _Quad(best, q.err + tail_err, q.converged and tail_err <= cfg.tail_tol)


# --------------------------------------------------------------------------- #
# Linear combinations of J_a F(t)
# --------------------------------------------------------------------------- #

Term = tuple[complex, float, float]  # (coefficient, a, t)


def _numerator(F: LineFunction, terms: Sequence[Term]):
    coef = np.array([c for c, _, _ in terms], dtype=complex)
    avals = np.array([a for _, a, _ in terms], dtype=float)
    tvals = np.array([t for _, _, t in terms], dtype=float)

    def numer(u):
        u = np.asarray(u, dtype=float)
        pts = np.concatenate([(tvals[:, None] + u[None, :]).ravel(), (tvals[:, None] - u[None, :]).ravel()])
        vals = F(pts).reshape(2, len(terms), u.size)
        ph = np.exp(-1j * avals[:, None] * u[None, :])
        return coef @ (ph * vals[0] - np.conj(ph) * vals[1])

    return numer


def _base_frequency(F: LineFunction, terms: Sequence[Term]) -> float | None:
    lat = F.lattice
    if lat is None:
        return None
    g = lat.step
    for _, a, _ in terms:
        g = real_gcd(g, lat.offset - a)
        if g is None:
            return None
    return g


def _kinks(F: LineFunction, terms: Sequence[Term]) -> list[float]:
    out = []
    for b in F.breakpoints:
        for _, _, t in terms:
            out += [abs(b - t)]
    return [k for k in out if k > 0]


def _single(F: LineFunction, terms: Sequence[Term], cfg: QuadratureConfig) -> JResult:
    omega0 = _base_frequency(F, terms)
    if omega0 is not None:
        if omega0 == 0.0:
            return ZERO
        q = _fold(_numerator(F, terms), omega0, _kinks(F, terms), cfg)
    else:
        atoms = F.atoms()
        if atoms is not None and len(atoms) > 1:
            return sum((p * _single(AnalyticCf(PointMass(x)), terms, cfg) for x, p in atoms), ZERO)
        if len(terms) > 1 and F.lattice is not None:
            return sum((c * _single(F, [(1.0, a, t)], cfg) for c, a, t in terms), ZERO)
        q = _window(_numerator(F, terms), _kinks(F, terms), cfg)
    extra = sum(abs(c) * F.extra_error(t) for c, _, t in terms)
    return JResult(q.value / (2j * math.pi), q.err / (2 * math.pi) + extra, q.converged)


def j_linear(F: LineFunction, terms: Sequence[Term], cfg: QuadratureConfig | None = None) -> JResult:
    """``sum_j c_j (J_{a_j} F)(t_j)`` evaluated as a single principal-value integral.

    ``terms`` holds ``(c_j, a_j, t_j)`` triples.  Combining terms shares one
    tail treatment and cancels correlated errors (for example
    ``J F(t) - J F(0)`` as one integral).
    """
    cfg = cfg or QuadratureConfig()
    terms = [(complex(c), float(a), float(t)) for c, a, t in terms]
    return sum((w * _single(p, terms, cfg) for w, p in F.parts()), ZERO)


def pv_half_line(numer: Callable[[np.ndarray], np.ndarray], base_frequency: float | None,
                 cfg: QuadratureConfig | None = None, kinks: Sequence[float] = ()) -> JResult:
    """``1/(2 pi i) * int_0^inf numer(u) du/u`` for an odd-symmetric numerator.

    ``base_frequency`` ``w0`` declares every frequency of ``numer`` a multiple
    of ``w0`` (periodic tail, folded exactly); ``None`` selects the tapered
    cutoff with Richardson extrapolation, which requires a decaying numerator.
    """
    cfg = cfg or QuadratureConfig()
    if base_frequency is not None and base_frequency > 0:
        q = _fold(numer, base_frequency, kinks, cfg)
    else:
        q = _window(numer, kinks, cfg)
    return JResult(q.value / (2j * math.pi), q.err / (2 * math.pi), q.converged)


def j_transform(f: LineFunction, a: float, t: float, cfg: QuadratureConfig | None = None) -> JResult:
    """``(J_a f)(t)``; for a c.f. this is ``E e^{itX} sign(X - a) / 2``."""
    return j_linear(f, [(1.0, a, t)], cfg)


def j_diff(f: LineFunction, t: float, cfg: QuadratureConfig | None = None) -> JResult:
    """``(J f)(t) - (J f)(0)`` as one integral of ``[f(t+u) - f(u)]/u``."""
    return j_linear(f, [(1.0, 0.0, t), (-1.0, 0.0, 0.0)], cfg)


def hilbert(f: LineFunction, t: float, cfg: QuadratureConfig | None = None) -> JResult:
    """Hilbert transform ``(H f)(t) = (2/i) (J f)(t)``."""
    return (2.0 / 1j) * j_transform(f, 0.0, t, cfg)


def j_truncated(f: LineFunction, a: float, t: float, eps: float, A: float,
                tol: float = 1e-12) -> complex:
    """``1/(2 pi i) * (int_eps^A + int_{-A}^{-eps}) e^{-iua} f(t+u) du/u`` with sharp cutoffs."""
    if not 0 < eps < A:
        raise ValueError("j_truncated requires 0 < eps < A")
    numer = _numerator(f, [(1.0, a, t)])
    n = max(16, int(math.ceil((A - eps) / 0.5)))
    breaks = np.linspace(eps, A, n + 1)
    q = adaptive_gk(lambda u: numer(u) / u, breaks, tol)
    return q.value / (2j * math.pi)
