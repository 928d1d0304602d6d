"""
Independent ground truth: Monte Carlo c.f. estimators and exact lattice DPs.

Nothing here touches the principal-value engine.

Random numbers come from numpy's PCG64.  A run of ``n`` samples is cut into
fixed-size chunks; chunk ``j`` draws from child ``j`` of
``SeedSequence(seed)``, so the result depends only on ``(seed, n)``, not on
how many worker threads process the chunks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .cf_core import DistributionSpec, real_gcd

__all__ = [
    "McEstimate",
    "LatticeLaw",
    "MaxLaw",
    "Functional",
    "identity",
    "positive_part",
    "negative_part",
    "absolute",
    "clamp",
    "signed",
    "option",
    "mc_functional_cf",
    "lattice_law_from_spec",
    "dp_lattice_max",
    "dp_clamped_walk",
    "law_to_cf",
    "convolve_power",
    "dp_phi_provider",
    "mc_phi_provider",
    "StateCapExceeded",
]

CHUNK = 1 << 20


class StateCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class McEstimate:
    value: complex
    stderr: float
    n_samples: int
    seed: int


@dataclass(frozen=True)
class Functional:
    """``X -> (phase(X), weight(X))``; the estimand is ``E weight(X) e^{it phase(X)}``."""

    name: str
    phase: Callable[[np.ndarray], np.ndarray]
    weight: Callable[[np.ndarray], np.ndarray] | None = None


identity = Functional("identity", lambda x: x)
positive_part = Functional("positive_part", lambda x: np.maximum(x, 0.0))
negative_part = Functional("negative_part", lambda x: np.maximum(-x, 0.0))
absolute = Functional("abs", np.abs)


def clamp(a: float, b: float) -> Functional:
    if a > b:
        raise ValueError("clamp requires a <= b")
    return Functional(f"clamp({a},{b})", lambda x: np.clip(x, a, b))


def signed(a: float) -> Functional:
    """Estimand ``E e^{itX} sign(X - a)``."""
    return Functional(f"signed({a})", lambda x: x, lambda x: np.sign(x - a))


def option(K: float, alpha: float, beta: float, gamma: float) -> Functional:
    """Phase ``alpha S + beta (S-K)+ + gamma (K-S)+``; use ``t = 1`` for the joint c.f."""
    return Functional(
        f"option({K},{alpha},{beta},{gamma})",
        lambda s: alpha * s + beta * np.maximum(s - K, 0.0) + gamma * np.maximum(K - s, 0.0))


def _chunk_moments(spec, functional, ts, seed_seq, size):
    """Per-frequency sum and centred sum of squares of the summand over one chunk."""
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    x = spec.sample(rng, size)
    ph = functional.phase(x)
    w = None if functional.weight is None else functional.weight(x)
    s1 = np.empty(ts.size, dtype=complex)
    m2 = np.empty(ts.size)
    for i, t in enumerate(ts):
        v = np.exp(1j * t * ph)
        if w is not None:
            v = v * w
        s1[i] = v.sum()
        dv = v - s1[i] / size
        m2[i] = np.sum(dv.real ** 2 + dv.imag ** 2)
    return size, s1, m2


def _combine(parts):
    # pairwise update of counts, sums and centred sums of squares
    n, s1, m2 = parts[0]
    for nb, sb, mb in parts[1:]:
        delta = sb / nb - s1 / n
        m2 = m2 + mb + np.abs(delta) ** 2 * n * nb / (n + nb)
        n, s1 = n + nb, s1 + sb
    return n, s1, m2


def mc_functional_cf(spec: DistributionSpec, functional: Functional, t, n: int, seed: int,
                     workers: int = 1):
    """Monte Carlo estimate of ``E weight(X) e^{it phase(X)}``.

    ``t`` may be a scalar (returns one :class:`McEstimate`) or a sequence
    (returns a list; all frequencies share the same samples).  The reported
    standard error is ``sd / sqrt(n)`` of the complex summand, which bounds
    the standard error of both components.
    """
    if n < 1:
        raise ValueError("n must be positive")
    scalar = np.ndim(t) == 0
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    n_chunks = -(-n // CHUNK)
    sizes = [CHUNK] * (n_chunks - 1) + [n - CHUNK * (n_chunks - 1)]
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    args = list(zip(children, sizes))
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(lambda a: _chunk_moments(spec, functional, ts, *a), args))
    else:
        parts = [_chunk_moments(spec, functional, ts, *a) for a in args]
    _, s1, m2 = _combine(parts)
    mean = s1 / n
    se = np.sqrt(m2 / max(n - 1, 1) / n)
    out = [McEstimate(complex(m), float(s), n, seed) for m, s in zip(mean, se)]
    return out[0] if scalar else out


# --------------------------------------------------------------------------- #
# Lattice laws and dynamic programming
# --------------------------------------------------------------------------- #

@dataclass(frozen=True)
class LatticeLaw:
    """Masses ``probs[j]`` at ``step * (offset_min + j)``."""

    step: float
    offset_min: int
    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if not self.step > 0:
            raise ValueError("step must be positive")
        if p.ndim != 1 or p.size == 0 or np.any(p < 0):
            raise ValueError("probs must be a non-empty nonnegative vector")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ValueError(f"probs sum to {p.sum()!r}, not 1")
        object.__setattr__(self, "probs", p)

    @property
    def support(self) -> np.ndarray:
        return self.step * (self.offset_min + np.arange(self.probs.size))

    def mass_at(self, x: float) -> float:
        j = round(x / self.step) - self.offset_min
        return float(self.probs[j]) if 0 <= j < self.probs.size else 0.0


def lattice_law_from_spec(spec: DistributionSpec, step: float | None = None) -> LatticeLaw:
    """Lattice form of an atomic spec (PointMass, TwoPoint, Lattice, ...)."""
    atoms = spec.atoms()
    if atoms is None:
        raise ValueError(f"{spec!r} is not a finite atomic law")
    if step is None:
        lat = spec.lattice()
        g = None if lat is None else real_gcd(lat.step, lat.offset)
        if g is None:
            raise ValueError("atoms are not on a common lattice through 0")
        step = g if g > 0 else 1.0
    idx = [round(x / step) for x, _ in atoms]
    for (x, _), k in zip(atoms, idx):
        if abs(x - k * step) > 1e-9 * max(1.0, abs(x)):
            raise ValueError(f"atom {x} is not on the lattice of step {step}")
    lo, hi = min(idx), max(idx)
    probs = np.zeros(hi - lo + 1)
    for (_, p), k in zip(atoms, idx):
        probs[k - lo] += p
    return LatticeLaw(step, lo, probs)


def law_to_cf(law: LatticeLaw, t):
    """Exact c.f. ``sum_j p_j e^{i t x_j}`` of a lattice law."""
    t = np.asarray(t, dtype=float)
    out = np.exp(1j * t[..., None] * law.support) @ law.probs
    return complex(out) if out.ndim == 0 else out


def convolve_power(law: LatticeLaw, n: int) -> LatticeLaw:
    """Law of ``S_n`` by repeated convolution."""
    probs = np.array([1.0])
    for _ in range(n):
        probs = np.convolve(probs, law.probs)
    return LatticeLaw(law.step, n * law.offset_min, probs / probs.sum())


@dataclass(frozen=True)
class MaxLaw:
    """Joint masses of ``(M_n, M_n - S_n)`` on the lattice: ``joint[m, d]``."""

    step: float
    n: int
    joint: np.ndarray

    @property
    def max_law(self) -> LatticeLaw:
        return LatticeLaw(self.step, 0, self.joint.sum(axis=1))

    @property
    def sum_law(self) -> LatticeLaw:
        nm, nd = self.joint.shape
        probs = np.zeros(nm + nd - 1)
        for d in range(nd):
            # S = M - d
            probs[nd - 1 - d: nd - 1 - d + nm] += self.joint[:, d]
        lo = -(nd - 1)
        nz = np.nonzero(probs)[0]
        return LatticeLaw(self.step, int(lo + nz[0]), probs[nz[0]: nz[-1] + 1])

    def phi(self, s: float, t: float) -> complex:
        """``E exp{i[s M_n + t (M_n - S_n)]}``."""
        nm, nd = self.joint.shape
        em = np.exp(1j * s * self.step * np.arange(nm))
        ed = np.exp(1j * t * self.step * np.arange(nd))
        return complex(em @ self.joint @ ed)


def _max_step(joint: np.ndarray, law: LatticeLaw) -> np.ndarray:
    nm, nd = joint.shape
    ks = law.offset_min + np.arange(law.probs.size)
    new_nm = nm + max(0, ks.max())
    new_nd = nd + max(0, -ks.min())
    out = np.zeros((new_nm, new_nd))
    for k, p in zip(ks, law.probs):
        if p == 0:
            continue
        for d in range(nd):
            col = joint[:, d]
            if k > d:
                # new maximum: M' = M + k - d, d' = 0
                out[k - d: k - d + nm, 0] += p * col
            else:
                out[:nm, d - k] += p * col
    return out


def dp_lattice_max(law: LatticeLaw, n: int, state_cap: int = 10_000_000, history: bool = False):
    """Exact joint law of ``(M_n, M_n - S_n)`` by tracking the Lindley recursion.

    State is ``(m, d)``: running maximum and its distance to the current
    position, both in lattice units.  With ``history=True`` returns the list
    for ``0..n``.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    joint = np.ones((1, 1))
    out = [MaxLaw(law.step, 0, joint)]
    for k in range(1, n + 1):
        joint = _max_step(joint, law)
        if joint.size > state_cap:
            raise StateCapExceeded(f"{joint.size} states at step {k} exceed cap {state_cap}")
        if history:
            out.append(MaxLaw(law.step, k, joint))
    return out if history else MaxLaw(law.step, n, joint)


def _on_lattice(x: float, step: float) -> int:
    k = round(x / step)
    if abs(x - k * step) > 1e-9 * max(1.0, abs(x)):
        raise ValueError(f"{x} is not on the lattice of step {step}")
    return k


def dp_clamped_walk(law: LatticeLaw, a: float, b: float, x: float, n: int,
                    history: bool = False):
    """Exact law of ``U_n``: ``U_0 = x``, ``U_k = max(a, min(b, U_{k-1} + X_k))``."""
    ia, ib, ix = (_on_lattice(v, law.step) for v in (a, b, x))
    if not ia <= ix <= ib:
        raise ValueError("need a <= x <= b")
    width = ib - ia + 1
    p = np.zeros(width)
    p[ix - ia] = 1.0
    laws = [LatticeLaw(law.step, ia, p.copy())]
    ks = law.offset_min + np.arange(law.probs.size)
    for _ in range(n):
        q = np.zeros(width)
        for k, pk in zip(ks, law.probs):
            if pk == 0:
                continue
            dest = np.clip(np.arange(width) + k, 0, width - 1)
            np.add.at(q, dest, pk * p)
        p = q / q.sum() if abs(q.sum() - 1.0) < 1e-12 else q
        laws.append(LatticeLaw(law.step, ia, p.copy()))
    return laws if history else laws[-1]


def dp_phi_provider(law: LatticeLaw, s: float, t: float, N: int) -> Callable[[int], complex]:
    """``n -> phi_n(s, t)`` for ``n <= N`` from the exact joint DP."""
    hist = dp_lattice_max(law, N, history=True)
    vals = [h.phi(s, t) for h in hist]
    return _PhiTable(vals, np.zeros(len(vals)))


class _PhiTable:
    def __init__(self, vals, errs):
        self.vals, self.errs = vals, errs
        self.stderr = float(np.max(errs))

    def __call__(self, n):
        return self.vals[n]


def mc_phi_provider(spec: DistributionSpec, s: float, t: float, N: int, n_paths: int,
                    seed: int) -> Callable[[int], complex]:
    """Monte Carlo ``phi_n(s, t)``; ``.stderr`` is the largest per-``n`` standard error."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    S = np.zeros(n_paths)
    M = np.zeros(n_paths)
    vals, errs = [1.0 + 0j], [0.0]
    for _ in range(N):
        S = S + spec.sample(rng, n_paths)
        M = np.maximum(M, S)
        v = np.exp(1j * (s * M + t * (M - S)))
        vals.append(complex(v.mean()))
        errs.append(float(np.std(v) / math.sqrt(n_paths)))
    return _PhiTable(vals, np.asarray(errs))
