"""
Characteristic functions of transformed variables from the c.f. of ``X``.

All identities come from ``2 J_a f(t) = E e^{itX} sign(X - a)`` applied to
pointwise identities such as

    2 e^{itX+} = 1 + e^{itX} + e^{itX} sign X - sign X.

Each transform is assembled as one :func:`~cfpart.pv_engine.j_linear` call
so the principal-value integrals share a single tail treatment.
"""

from __future__ import annotations

import cmath

from .cf_core import LineFunction, eval_cf, linear_combination, modulate, reflect_cf
from .pv_engine import JResult, QuadratureConfig, j_linear

__all__ = [
    "cf_positive_part",
    "cf_positive_part_two_pass",
    "cf_joint",
    "cf_abs",
    "cf_abs_forms",
    "cf_clamped",
    "option_joint_cf",
    "signed_tail",
]


def cf_positive_part(f: LineFunction, t: float, cfg: QuadratureConfig | None = None) -> JResult:
    """``E e^{itX+} = (1 + f(t))/2 + (Jf)(t) - (Jf)(0)``."""
    jd = j_linear(f, [(1.0, 0.0, t), (-1.0, 0.0, 0.0)], cfg)
    return jd + 0.5 * (1.0 + eval_cf(f, t))


def cf_positive_part_two_pass(f: LineFunction, t: float, cfg: QuadratureConfig | None = None) -> JResult:
    """Same quantity from two separate J evaluations (cross-check path)."""
    j_t = j_linear(f, [(1.0, 0.0, t)], cfg)
    j_0 = j_linear(f, [(1.0, 0.0, 0.0)], cfg)
    return j_t - j_0 + 0.5 * (1.0 + eval_cf(f, t))


def cf_joint(f: LineFunction, alpha: float, beta: float, gamma: float,
             cfg: QuadratureConfig | None = None) -> JResult:
    """Joint c.f. ``E exp{i(alpha X + beta X+ + gamma X-)}``."""
    s, r = alpha + beta, alpha - gamma
    base = 0.5 * (eval_cf(f, s) + eval_cf(f, r))
    if s == r:
        return JResult(base)
    return j_linear(f, [(1.0, 0.0, s), (-1.0, 0.0, r)], cfg) + base


def cf_abs_forms(f: LineFunction, t: float, cfg: QuadratureConfig | None = None) -> tuple[JResult, JResult]:
    """The two expressions of ``E e^{it|X|}``.

    ``Re f(t) + 2 (J Re f)(t)`` with ``Re f`` the even part
    ``(f + f^-)/2`` as a function, and ``Re f(t) + 2i Im (Jf)(t)``.
    """
    ft = eval_cf(f, t)
    re_f = 0.5 * (ft + eval_cf(f, -t))
    even = linear_combination([(0.5, f), (0.5, reflect_cf(f))])
    first = 2.0 * j_linear(even, [(1.0, 0.0, t)], cfg) + re_f
    jf = j_linear(f, [(1.0, 0.0, t)], cfg)
    second = JResult(re_f + 2j * jf.value.imag, 2.0 * jf.err_estimate, jf.converged)
    return first, second


def cf_abs(f: LineFunction, t: float, cfg: QuadratureConfig | None = None) -> JResult:
    """``E e^{it|X|}``; the disagreement of the two forms is added to the error."""
    first, second = cf_abs_forms(f, t, cfg)
    gap = abs(first.value - second.value)
    return JResult(second.value, max(first.err_estimate, second.err_estimate) + gap,
                   first.converged and second.converged)


def cf_clamped(f: LineFunction, a: float, b: float, t: float,
               cfg: QuadratureConfig | None = None) -> JResult:
    """``E e^{it X_{a,b}}`` for ``X_{a,b} = max(a, min(b, X))``."""
    if a > b:
        raise ValueError(f"clamp requires a <= b, got a={a}, b={b}")
    ea, eb = cmath.exp(1j * t * a), cmath.exp(1j * t * b)
    if a == b:
        return JResult(ea)
    terms = [(1.0, a, t), (-ea, a, 0.0), (eb, b, 0.0), (-1.0, b, t)]
    return j_linear(f, terms, cfg) + 0.5 * (ea + eb)


def option_joint_cf(f_S: LineFunction, K: float, alpha: float, beta: float, gamma: float,
                    cfg: QuadratureConfig | None = None) -> JResult:
    """``E exp{i(alpha S + beta C + gamma P)}`` with ``C = (S-K)+``, ``P = (K-S)+``.

    ``f_S`` is the c.f. of the stock price.  Uses the joint c.f. of
    ``S - K`` with its positive and negative parts, scaled by ``e^{i alpha K}``.
    """
    f_K = modulate(f_S, -K)
    return cmath.exp(1j * alpha * K) * cf_joint(f_K, alpha, beta, gamma, cfg)


def signed_tail(f: LineFunction, a: float, cfg: QuadratureConfig | None = None) -> JResult:
    """``(P(X > a) - P(X < a)) / 2``."""
    return j_linear(f, [(1.0, a, 0.0)], cfg)
