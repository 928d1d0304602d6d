"""
Distributions, closed-form characteristic functions and grid-sampled c.f.s.

Everything the principal-value engine integrates is a :class:`LineFunction`:
a vectorised complex function on the real line that also carries the
structural hints the engine uses to pick a quadrature strategy

* ``lattice`` -- a :class:`FreqLattice` ``(offset, step)`` such that every
  frequency of the function lies in ``offset + step * Z`` (for a c.f. these
  are the atoms of the law).  Known lattices make integrands periodic.
* ``half_width`` -- evaluation domain ``[-half_width, half_width]`` for
  sampled functions that may not be extrapolated.
* ``breakpoints`` -- points where the function is not smooth (kinks, jumps).
* ``parts()`` -- a decomposition into a weighted sum of simpler functions;
  the engine is linear, so mixtures are integrated component by component.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Any, Iterable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline, make_interp_spline

__all__ = [
    "DistributionSpec",
    "PointMass",
    "Normal",
    "Exponential",
    "Uniform",
    "Cauchy",
    "TwoPoint",
    "Lattice",
    "Mixture",
    "ShiftScale",
    "spec_from_dict",
    "spec_to_dict",
    "FreqLattice",
    "LineFunction",
    "CfFunction",
    "AnalyticCf",
    "SampledCf",
    "GridCf",
    "GridDomainError",
    "eval_cf",
    "reflect_cf",
    "sample_to_grid",
    "power_cf",
    "product",
    "modulate",
    "linear_combination",
    "log_resolvent",
    "real_gcd",
]

TWO_PI = 2.0 * math.pi


class GridDomainError(ValueError):
    """Raised when a sampled function is evaluated outside its grid."""


# --------------------------------------------------------------------------- #
# Frequency lattices
# --------------------------------------------------------------------------- #

def real_gcd(x: float, y: float, max_den: int = 256, rtol: float = 1e-11) -> float | None:
    """Largest ``g`` with ``x, y`` both integer multiples of ``g``.

    Returns ``None`` when ``x/y`` is not (numerically) a rational with
    denominator at most ``max_den``.  ``real_gcd(0, y) == |y|``.
    """
    x, y = abs(float(x)), abs(float(y))
    if x == 0.0:
        return y
    if y == 0.0:
        return x
    if x < y:
        x, y = y, x
    ratio = x / y
    frac = Fraction(ratio).limit_denominator(max_den)
    if abs(float(frac) - ratio) > rtol * max(1.0, ratio):
        return None
    return y / frac.denominator


@dataclass(frozen=True)
class FreqLattice:
    """All frequencies lie in ``offset + step * Z``; ``step == 0`` means a single point."""

    offset: float
    step: float

    def __post_init__(self):
        if self.step < 0:
            object.__setattr__(self, "step", -self.step)

    def shift(self, c: float) -> "FreqLattice":
        return FreqLattice(self.offset + c, self.step)

    def scale(self, k: float) -> "FreqLattice":
        return FreqLattice(self.offset * k, self.step * abs(k))

    def join(self, other: "FreqLattice | None") -> "FreqLattice | None":
        """Smallest lattice containing both, or ``None`` if incommensurate."""
        if other is None:
            return None
        g = real_gcd(self.step, other.step)
        if g is None:
            return None
        g = real_gcd(g, other.offset - self.offset)
        if g is None:
            return None
        return FreqLattice(self.offset, g)

    def divides_into(self, omega: float) -> bool:
        """True if every frequency of the lattice is an integer multiple of ``omega``."""
        return _is_multiple(self.offset, omega) and _is_multiple(self.step, omega)


def _is_multiple(x: float, omega: float, tol: float = 1e-9) -> bool:
    if x == 0.0:
        return True
    r = x / omega
    return abs(r - round(r)) <= tol * max(1.0, abs(r))


# --------------------------------------------------------------------------- #
# Distribution specs
# --------------------------------------------------------------------------- #

class DistributionSpec:
    """Base class of the declarative distribution variants."""

    kind: str = ""

    def cf(self, t):
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        raise NotImplementedError

    def atoms(self) -> list[tuple[float, float]] | None:
        """``[(x, p), ...]`` for purely atomic laws with finitely many atoms."""
        return None

    def lattice(self) -> FreqLattice | None:
        atoms = self.atoms()
        if atoms is None:
            return None
        lat = FreqLattice(atoms[0][0], 0.0)
        for x, _ in atoms[1:]:
            lat = lat.join(FreqLattice(x, 0.0))
            if lat is None:
                return None
        return lat

    def breakpoints(self) -> tuple[float, ...]:
        return ()

    def flat_components(self) -> list[tuple[float, "DistributionSpec"]]:
        """Weighted non-mixture pieces whose weighted sum is this law."""
        return [(1.0, self)]


def _check_prob(p: float, name: str = "probability") -> None:
    if not (0.0 <= p <= 1.0) or math.isnan(p):
        raise ValueError(f"{name} must lie in [0, 1], got {p}")


@dataclass(frozen=True)
class PointMass(DistributionSpec):
    x: float
    kind = "point_mass"

    def cf(self, t):
        return np.exp(1j * np.asarray(t, dtype=float) * self.x)

    def sample(self, rng, n):
        return np.full(n, float(self.x))

    def atoms(self):
        return [(float(self.x), 1.0)]


@dataclass(frozen=True)
class Normal(DistributionSpec):
    mu: float = 0.0
    sigma: float = 1.0
    kind = "normal"

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("Normal requires sigma > 0")

    def cf(self, t):
        t = np.asarray(t, dtype=float)
        return np.exp(1j * self.mu * t - 0.5 * (self.sigma * t) ** 2)

    def sample(self, rng, n):
        return rng.normal(self.mu, self.sigma, size=n)


@dataclass(frozen=True)
class Exponential(DistributionSpec):
    rate: float = 1.0
    kind = "exponential"

    def __post_init__(self):
        if not self.rate > 0:
            raise ValueError("Exponential requires rate > 0")

    def cf(self, t):
        t = np.asarray(t, dtype=float)
        return self.rate / (self.rate - 1j * t)

    def sample(self, rng, n):
        return rng.exponential(1.0 / self.rate, size=n)


@dataclass(frozen=True)
class Uniform(DistributionSpec):
    lo: float = 0.0
    hi: float = 1.0
    kind = "uniform"

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("Uniform requires lo < hi")

    def cf(self, t):
        t = np.asarray(t, dtype=float)
        w = self.hi - self.lo
        x = t * w
        small = np.abs(x) < 1e-4
        half = np.where(small, 1.0, 0.5 * x)
        # e^{it mid} sin(tw/2)/(tw/2): no cancellation between the endpoint terms
        direct = np.sin(half) / half
        # removable singularity at t = 0
        x2 = x * x
        series = 1.0 - x2 / 24.0 + x2 * x2 / 1920.0
        return np.exp(0.5j * t * (self.hi + self.lo)) * np.where(small, series, direct)

    def sample(self, rng, n):
        return rng.uniform(self.lo, self.hi, size=n)

    def breakpoints(self):
        return ()


@dataclass(frozen=True)
class Cauchy(DistributionSpec):
    location: float = 0.0
    scale: float = 1.0
    kind = "cauchy"

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError("Cauchy requires scale > 0")

    def cf(self, t):
        t = np.asarray(t, dtype=float)
        return np.exp(1j * self.location * t - self.scale * np.abs(t))

    def sample(self, rng, n):
        return self.location + self.scale * rng.standard_cauchy(size=n)

    def breakpoints(self):
        return (0.0,)


@dataclass(frozen=True)
class TwoPoint(DistributionSpec):
    x1: float
    p: float
    x2: float
    kind = "two_point"

    def __post_init__(self):
        _check_prob(self.p, "TwoPoint p")

    def cf(self, t):
        t = np.asarray(t, dtype=float)
        return self.p * np.exp(1j * t * self.x1) + (1.0 - self.p) * np.exp(1j * t * self.x2)

    def sample(self, rng, n):
        return np.where(rng.random(n) < self.p, float(self.x1), float(self.x2))

    def atoms(self):
        return [(float(self.x1), float(self.p)), (float(self.x2), 1.0 - float(self.p))]

    def lattice(self):
        return FreqLattice(float(self.x1), abs(float(self.x2) - float(self.x1)))


@dataclass(frozen=True)
class Lattice(DistributionSpec):
    """Law with masses ``probs[j]`` at ``step * offsets[j]``."""

    step: float
    offsets: tuple[int, ...]
    probs: tuple[float, ...]
    kind = "lattice"

    def __post_init__(self):
        object.__setattr__(self, "offsets", tuple(int(o) for o in self.offsets))
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
        if not self.step > 0:
            raise ValueError("Lattice requires step > 0")
        if len(self.offsets) != len(self.probs) or not self.offsets:
            raise ValueError("Lattice offsets and probs must be non-empty and of equal length")
        for p in self.probs:
            _check_prob(p, "Lattice prob")
        if abs(sum(self.probs) - 1.0) > 1e-12:
            raise ValueError("Lattice probs must sum to 1")

    def cf(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        for o, p in zip(self.offsets, self.probs):
            out = out + p * np.exp(1j * t * (self.step * o))
        return out

    def sample(self, rng, n):
        idx = rng.choice(len(self.probs), size=n, p=np.asarray(self.probs))
        return self.step * np.asarray(self.offsets, dtype=float)[idx]

    def atoms(self):
        return [(self.step * o, p) for o, p in zip(self.offsets, self.probs)]

    def lattice(self):
        o0 = min(self.offsets)
        g = reduce(math.gcd, (o - o0 for o in self.offsets), 0)
        return FreqLattice(self.step * o0, self.step * g)


@dataclass(frozen=True)
class Mixture(DistributionSpec):
    weights: tuple[float, ...]
    components: tuple[DistributionSpec, ...]
    kind = "mixture"

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        object.__setattr__(self, "components", tuple(self.components))
        if len(self.weights) != len(self.components) or not self.weights:
            raise ValueError("Mixture weights and components must be non-empty and of equal length")
        for w in self.weights:
            _check_prob(w, "Mixture weight")
        if abs(sum(self.weights) - 1.0) > 1e-12:
            raise ValueError("Mixture weights must sum to 1 (within 1e-12)")

    def cf(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        for w, c in zip(self.weights, self.components):
            out = out + w * c.cf(t)
        return out

    def sample(self, rng, n):
        which = rng.choice(len(self.weights), size=n, p=np.asarray(self.weights))
        out = np.empty(n)
        for j, comp in enumerate(self.components):
            mask = which == j
            k = int(mask.sum())
            if k:
                out[mask] = comp.sample(rng, k)
        return out

    def atoms(self):
        acc: dict[float, float] = {}
        for w, c in zip(self.weights, self.components):
            a = c.atoms()
            if a is None:
                return None
            for x, p in a:
                acc[x] = acc.get(x, 0.0) + w * p
        return sorted(acc.items())

    def lattice(self):
        lat = None
        for c in self.components:
            cl = c.lattice()
            if cl is None:
                return None
            lat = cl if lat is None else lat.join(cl)
            if lat is None:
                return None
        return lat

    def breakpoints(self):
        return tuple(sorted({b for c in self.components for b in c.breakpoints()}))

    def flat_components(self):
        out = []
        for w, c in zip(self.weights, self.components):
            out.extend((w * v, s) for v, s in c.flat_components())
        return out


@dataclass(frozen=True)
class ShiftScale(DistributionSpec):
    """Law of ``shift + scale * Y`` with ``Y ~ base``."""

    base: DistributionSpec
    shift: float = 0.0
    scale: float = 1.0
    kind = "shift_scale"

    def __post_init__(self):
        if self.scale == 0:
            raise ValueError("ShiftScale requires scale != 0")

    def cf(self, t):
        t = np.asarray(t, dtype=float)
        return np.exp(1j * t * self.shift) * self.base.cf(self.scale * t)

    def sample(self, rng, n):
        return self.shift + self.scale * self.base.sample(rng, n)

    def atoms(self):
        a = self.base.atoms()
        if a is None:
            return None
        return [(self.shift + self.scale * x, p) for x, p in a]

    def lattice(self):
        lat = self.base.lattice()
        return None if lat is None else lat.scale(self.scale).shift(self.shift)

    def breakpoints(self):
        return tuple(b / self.scale for b in self.base.breakpoints())

    def flat_components(self):
        return [(w, ShiftScale(c, self.shift, self.scale)) for w, c in self.base.flat_components()]




# --------------------------------------------------------------------------- #
# Structured (dict / YAML / JSON) representation
# --------------------------------------------------------------------------- #

_SCALAR_FIELDS = {
    "point_mass": (PointMass, ("x",)),
    "normal": (Normal, ("mu", "sigma")),
    "exponential": (Exponential, ("rate",)),
    "uniform": (Uniform, ("lo", "hi")),
    "cauchy": (Cauchy, ("location", "scale")),
    "two_point": (TwoPoint, ("x1", "p", "x2")),
}


def spec_to_dict(spec: DistributionSpec) -> dict[str, Any]:
    """Plain-data form of a spec; inverse of :func:`spec_from_dict`."""
    if spec.kind in _SCALAR_FIELDS:
        _, names = _SCALAR_FIELDS[spec.kind]
        return {"type": spec.kind, **{n: float(getattr(spec, n)) for n in names}}
    if isinstance(spec, Lattice):
        return {"type": "lattice", "step": float(spec.step),
                "offsets": list(spec.offsets), "probs": list(spec.probs)}
    if isinstance(spec, Mixture):
        return {"type": "mixture", "weights": list(spec.weights),
                "components": [spec_to_dict(c) for c in spec.components]}
    if isinstance(spec, ShiftScale):
        return {"type": "shift_scale", "base": spec_to_dict(spec.base),
                "shift": float(spec.shift), "scale": float(spec.scale)}
    raise TypeError(f"unknown distribution spec {spec!r}")


def spec_from_dict(d: dict[str, Any]) -> DistributionSpec:
    """Build a spec from its plain-data form (see README for the schema)."""
    if not isinstance(d, dict) or "type" not in d:
        raise ValueError("distribution must be a mapping with a 'type' key")
    kind = str(d["type"]).replace("-", "_").lower()
    extra = set(d) - {"type"}
    if kind in _SCALAR_FIELDS:
        cls, names = _SCALAR_FIELDS[kind]
        unknown = extra - set(names)
        if unknown:
            raise ValueError(f"unknown keys for {kind}: {sorted(unknown)}")
        return cls(**{n: float(d[n]) for n in names if n in d})
    if kind == "lattice":
        return Lattice(float(d["step"]), tuple(d["offsets"]), tuple(d["probs"]))
    if kind == "mixture":
        comps = tuple(spec_from_dict(c) for c in d["components"])
        return Mixture(tuple(d["weights"]), comps)
    if kind == "shift_scale":
        return ShiftScale(spec_from_dict(d["base"]), float(d.get("shift", 0.0)),
                          float(d.get("scale", 1.0)))
    raise ValueError(f"unknown distribution type {d['type']!r}")


# --------------------------------------------------------------------------- #
# Functions on the line
# --------------------------------------------------------------------------- #

class LineFunction:
    """Vectorised complex function of a real variable plus quadrature hints."""

    lattice: FreqLattice | None = None
    half_width: float | None = None
    breakpoints: tuple[float, ...] = ()

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.half_width is not None and t.size and np.max(np.abs(t)) > self.half_width * (1 + 1e-12):
            raise GridDomainError(
                f"evaluation at |t|={np.max(np.abs(t)):.6g} outside grid half-width {self.half_width:.6g}")
        return self._eval(t)

    def _eval(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def parts(self) -> list[tuple[complex, "LineFunction"]]:
        """Weighted pieces summing to this function (default: itself)."""
        return [(1.0, self)]

    def atoms(self) -> list[tuple[float, complex]] | None:
        """Finite frequency/amplitude list when the function is a trigonometric sum."""
        return None

    def extra_error(self, t: float) -> float:
        """Known bound on truncation error a J-transform at ``t`` inherits."""
        return 0.0


class CfFunction(LineFunction):
    """A characteristic function: analytic (from a spec) or sampled on a grid."""


class AnalyticCf(CfFunction):
    """Closed-form c.f. of a :class:`DistributionSpec`."""

    def __init__(self, spec: DistributionSpec):
        self.spec = spec
        self.lattice = spec.lattice()
        self.breakpoints = spec.breakpoints()

    def _eval(self, t):
        return self.spec.cf(t)

    def parts(self):
        comps = self.spec.flat_components()
        if len(comps) == 1:
            return [(1.0, self)]
        return [(w, AnalyticCf(c)) for w, c in comps]

    def atoms(self):
        return self.spec.atoms()

    def __repr__(self):
        return f"AnalyticCf({self.spec!r})"


@dataclass(frozen=True)
class GridCf:
    """Complex samples on ``t_k = -T + k * delta`` with an interpolation rule.

    Rules: ``cubic`` (default; spline applied to the complex samples, i.e.
    to real and imaginary parts separately), ``quintic`` (degree-5 spline,
    sixth order, for smooth data that needs more accuracy per node) and
    ``trig`` (periodic grids only; exact for trigonometric polynomials of
    the grid's band).  When ``periodic`` is set the grid spans exactly one
    period ``2T`` of the function and evaluation wraps around instead of
    failing.
    """

    half_width: float
    delta: float
    samples: np.ndarray
    interpolation: str = "cubic"
    tolerance: float = 1e-12
    periodic: bool = False
    node_err: np.ndarray | None = None
    node_converged: np.ndarray | None = None
    _interp: Any = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        n = 2 * int(round(self.half_width / self.delta)) + 1
        if s.ndim != 1 or s.size != n:
            raise ValueError(f"expected {n} samples for T={self.half_width}, delta={self.delta}")
        if self.interpolation not in ("cubic", "quintic", "trig"):
            raise ValueError(f"unknown interpolation rule {self.interpolation!r}")
        if self.interpolation == "trig" and not self.periodic:
            raise ValueError("trigonometric interpolation needs a periodic grid")
        s = s.copy()
        if self.periodic:
            s[0] = s[-1] = 0.5 * (s[0] + s[-1])
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)
        object.__setattr__(self, "_interp", self._build())

    @property
    def nodes(self) -> np.ndarray:
        n = self.samples.size
        return -self.half_width + self.delta * np.arange(n)

    @property
    def size(self) -> int:
        return self.samples.size

    def _build(self):
        if self.interpolation == "trig":
            m = self.samples.size - 1
            coef = np.fft.fft(self.samples[:-1]) / m
            h = (m - 1) // 2
            # frequencies -h..h in increasing order; an even m also has a
            # Nyquist term, split symmetrically so real data stay real
            nyq = coef[m // 2] if m % 2 == 0 else 0.0
            return np.concatenate([coef[m - h:], coef[:h + 1]]), h, nyq
        bc = "periodic" if self.periodic else "not-a-knot"
        if self.interpolation == "quintic":
            return make_interp_spline(self.nodes, self.samples, k=5, bc_type="periodic" if self.periodic else None)
        return CubicSpline(self.nodes, self.samples, bc_type=bc)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        T = self.half_width
        if self.periodic:
            t = np.mod(t + T, 2 * T) - T
        elif t.size and np.max(np.abs(t)) > T * (1 + 1e-12):
            raise GridDomainError(
                f"evaluation at |t|={np.max(np.abs(t)):.6g} outside grid half-width {T:.6g}")
        if self.interpolation == "trig":
            coefs, h, nyq = self._interp
            x = (t + T) * (np.pi / T)
            w = np.exp(1j * x)
            acc = np.zeros(np.shape(x), dtype=complex)
            for c in coefs[::-1]:
                acc = acc * w + c
            out = acc * np.exp(-1j * h * x)
            if nyq:
                out = out + nyq * np.cos((h + 1) * x)
            return out
        return self._interp(t)

    def interpolation_error(self) -> float:
        """Rough bound on the interpolation error between nodes.

        A cubic spline through every other node is compared with the skipped
        nodes; the spline error is fourth order, so the full grid is charged
        one fifteenth of that gap.  The quintic and trigonometric rules are at
        least as accurate on smooth data, so the same figure is used.
        """
        if self.samples.size < 9:
            return float("inf")
        bc = "periodic" if self.periodic else "not-a-knot"
        coarse = CubicSpline(self.nodes[::2], self.samples[::2], bc_type=bc)
        gap = np.max(np.abs(coarse(self.nodes[1::2]) - self.samples[1::2]))
        return float(gap) / 15.0

    def check_invariants(self, tol: float | None = None) -> None:
        """Raise unless the grid is a plausible c.f. sample: 1 at 0, modulus <= 1, Hermitian."""
        tol = self.tolerance if tol is None else tol
        mid = self.samples.size // 2
        if abs(self.samples[mid] - 1.0) > tol:
            raise ValueError(f"grid value at 0 is {self.samples[mid]}, not 1")
        over = np.max(np.abs(self.samples)) - 1.0
        if over > tol:
            raise ValueError(f"grid modulus exceeds 1 by {over:.3g}")
        herm = np.max(np.abs(self.samples - np.conj(self.samples[::-1])))
        if herm > tol:
            raise ValueError(f"grid violates Hermitian symmetry by {herm:.3g}")


class SampledCf(CfFunction):
    """Grid-backed c.f.; extrapolation is an error unless the grid is periodic."""

    def __init__(self, grid: GridCf):
        self.grid = grid
        if grid.periodic:
            self.lattice = FreqLattice(0.0, math.pi / grid.half_width)
            self.half_width = None
        else:
            self.half_width = grid.half_width

    def _eval(self, t):
        return self.grid(t)

    def __repr__(self):
        return f"SampledCf(T={self.grid.half_width}, n={self.grid.size}, periodic={self.grid.periodic})"


# --------------------------------------------------------------------------- #
# Derived functions
# --------------------------------------------------------------------------- #

def _reflect_atoms(atoms):
    return None if atoms is None else [(-x, p) for x, p in atoms]


class _Reflected(CfFunction):
    def __init__(self, base: LineFunction):
        self.base = base
        lat = base.lattice
        self.lattice = None if lat is None else FreqLattice(-lat.offset, lat.step)
        self.half_width = None  # the base enforces its own domain
        self.breakpoints = tuple(-b for b in base.breakpoints)

    def _eval(self, t):
        return self.base(-t)

    def parts(self):
        ps = self.base.parts()
        if len(ps) == 1:
            return [(1.0, self)]
        return [(w, reflect_cf(p)) for w, p in ps]

    def atoms(self):
        return _reflect_atoms(self.base.atoms())

    def extra_error(self, t):
        return self.base.extra_error(-t)


class _Power(CfFunction):
    def __init__(self, base: LineFunction, k: int):
        self.base, self.k = base, int(k)
        lat = base.lattice
        self.lattice = None if lat is None else FreqLattice(self.k * lat.offset, lat.step)
        self.breakpoints = base.breakpoints

    def _eval(self, t):
        return self.base(t) ** self.k


class _Product(LineFunction):
    def __init__(self, f: LineFunction, g: LineFunction):
        self.f, self.g = f, g
        lf, lg = f.lattice, g.lattice
        self.lattice = None
        if lf is not None and lg is not None:
            step = real_gcd(lf.step, lg.step)
            if step is not None:
                self.lattice = FreqLattice(lf.offset + lg.offset, step)
        self.breakpoints = tuple(sorted(set(f.breakpoints) | set(g.breakpoints)))

    def _eval(self, t):
        return self.f(t) * self.g(t)

    def extra_error(self, t):
        return self.f.extra_error(t) + self.g.extra_error(t)


class _Modulated(LineFunction):
    """``t -> exp(i t c) * base(t)``."""

    def __init__(self, base: LineFunction, c: float):
        self.base, self.c = base, float(c)
        self.lattice = None if base.lattice is None else base.lattice.shift(self.c)
        self.breakpoints = base.breakpoints

    def _eval(self, t):
        return np.exp(1j * t * self.c) * self.base(t)

    def parts(self):
        ps = self.base.parts()
        if len(ps) == 1:
            return [(1.0, self)]
        return [(w, modulate(p, self.c)) for w, p in ps]

    def atoms(self):
        a = self.base.atoms()
        return None if a is None else [(x + self.c, p) for x, p in a]


class _Combination(LineFunction):
    def __init__(self, terms: Sequence[tuple[complex, LineFunction]]):
        self.terms = list(terms)
        lat = None
        for i, (_, f) in enumerate(self.terms):
            if f.lattice is None:
                lat = None
                break
            lat = f.lattice if i == 0 else lat.join(f.lattice)
            if lat is None:
                break
        self.lattice = lat
        self.breakpoints = tuple(sorted({b for _, f in self.terms for b in f.breakpoints}))

    def _eval(self, t):
        out = np.zeros(np.shape(t), dtype=complex)
        for w, f in self.terms:
            out = out + w * f(t)
        return out

    def parts(self):
        out = []
        for w, f in self.terms:
            out.extend((w * v, p) for v, p in f.parts())
        return out


class _LogResolvent(LineFunction):
    """``u -> ln 1/(1 - z f(u))`` on the principal branch (|z| < 1)."""

    def __init__(self, base: LineFunction, z: complex):
        self.base, self.z = base, complex(z)
        lat = base.lattice
        # frequencies of sum_k z^k f^k / k lie in k*offset + step*Z, k >= 0
        if lat is None:
            self.lattice = None
        else:
            g = real_gcd(lat.step, lat.offset)
            self.lattice = None if g is None else FreqLattice(0.0, g)
        self.breakpoints = base.breakpoints

    def _eval(self, t):
        return -np.log(1.0 - self.z * self.base(t))


def eval_cf(f: LineFunction, t):
    """Evaluate ``f`` at ``t`` (scalar in, complex scalar out; arrays broadcast)."""
    out = f(np.asarray(t, dtype=float))
    return complex(out) if np.ndim(out) == 0 else out


def reflect_cf(f: LineFunction) -> LineFunction:
    """``u -> f(-u)``; for a c.f. this is the conjugate c.f. (law of ``-X``)."""
    if isinstance(f, _Reflected):
        return f.base
    if isinstance(f, AnalyticCf):
        return AnalyticCf(ShiftScale(f.spec, 0.0, -1.0)) if not isinstance(f.spec, ShiftScale) \
            else AnalyticCf(ShiftScale(f.spec.base, -f.spec.shift, -f.spec.scale))
    return _Reflected(f)


def power_cf(f: LineFunction, k: int) -> LineFunction:
    """Pointwise power ``f(t)**k`` (the c.f. of a k-step sum when ``f`` is a c.f.)."""
    if k < 0:
        raise ValueError("power must be nonnegative")
    return _Power(f, k)


def product(f: LineFunction, g: LineFunction) -> LineFunction:
    return _Product(f, g)


def modulate(f: LineFunction, c: float) -> LineFunction:
    """``t -> exp(i c t) f(t)``: the c.f. of ``X + c``."""
    return _Modulated(f, c)


def linear_combination(terms: Iterable[tuple[complex, LineFunction]]) -> LineFunction:
    return _Combination(list(terms))


def log_resolvent(f: LineFunction, z: complex) -> LineFunction:
    """``u -> ln 1/(1 - z f(u))`` (principal branch)."""
    if abs(z) >= 1:
        raise ValueError("log_resolvent requires |z| < 1")
    return _LogResolvent(f, z)


def sample_to_grid(f: LineFunction, T: float, delta: float, interpolation: str = "cubic",
                   periodic: bool | None = None, tolerance: float = 1e-12) -> GridCf:
    """Sample ``f`` on ``-T, -T + delta, ..., T``.

    ``periodic=None`` detects whether ``f`` is ``2T``-periodic from its
    frequency lattice.
    """
    if not (T > 0 and delta > 0):
        raise ValueError("T and delta must be positive")
    m = T / delta
    if abs(m - round(m)) > 1e-9 * max(1.0, m):
        raise ValueError(f"T/delta = {m} is not an integer")
    m = int(round(m))
    if periodic is None:
        periodic = f.lattice is not None and f.lattice.divides_into(math.pi / T)
    nodes = -T + delta * np.arange(2 * m + 1)
    nodes[m] = 0.0
    return GridCf(T, delta, np.asarray(f(nodes), dtype=complex), interpolation=interpolation,
                  tolerance=tolerance, periodic=bool(periodic))
