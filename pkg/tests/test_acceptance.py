"""
Acceptance suite: ten criteria at their stated tolerances.

Run under pytest (one PASS/FAIL line per criterion appears in the terminal
summary) or directly with ``python tests/test_acceptance.py``.
"""

import cmath
import itertools
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from cfpart import (
    AnalyticCf,
    Cauchy,
    Exponential,
    Lattice,
    Mixture,
    Normal,
    PointMass,
    ShiftScale,
    SpitzerParams,
    TwoPoint,
    Uniform,
    WalkRecurrenceConfig,
    cf_abs,
    cf_abs_forms,
    cf_clamped,
    cf_positive_part,
    j_transform,
    j_truncated,
    lindley_cf_recurrence,
    option_joint_cf,
    reflect_cf,
    series_coefficients,
    spitzer_classic,
    spitzer_lhs,
    spitzer_rhs,
    spitzer_rhs_max,
)
from cfpart.oracles import (
    absolute,
    clamp,
    dp_lattice_max,
    dp_phi_provider,
    lattice_law_from_spec,
    law_to_cf,
    mc_functional_cf,
    option,
    positive_part,
)

CATALOG = [
    PointMass(1.5),
    Normal(0.0, 1.0),
    Normal(0.5, 2.0),
    Exponential(1.0),
    Uniform(-1.0, 2.0),
    Cauchy(0.3, 1.0),
    TwoPoint(-1.0, 0.5, 1.0),
    TwoPoint(0.3, 0.4, 2.1),
    Lattice(1.0, (-1, 0, 2), (0.3, 0.3, 0.4)),
    Mixture((0.3, 0.3, 0.4), (Normal(-1.0, 0.5), Exponential(2.0), TwoPoint(0.0, 0.5, 1.0))),
    ShiftScale(Uniform(0.0, 1.0), 1.0, -2.0),
]

# rounding floor for identities whose two sides are computed independently
ROUNDOFF = 1e-14


def criterion_1():
    worst = -np.inf
    for x, a, t in itertools.product((-2.0, 0.5, 3.0), (-1.0, 0.0, 2.0), (-3.0, -1.0, 0.0, 1.0, 3.0)):
        r = j_transform(AnalyticCf(PointMass(x)), a, t)
        exact = 0.5 * cmath.exp(1j * t * x) * math.copysign(1.0, x - a)
        worst = max(worst, abs(r.value - exact) - max(1e-6, r.err_estimate))
    at_atom = -np.inf
    for x, t in itertools.product((-1.0, 0.0, 2.0), (-3.0, 0.0, 3.0)):
        r = j_transform(AnalyticCf(PointMass(x)), x, t)
        at_atom = max(at_atom, abs(r.value) - r.err_estimate)
    ok = worst <= 0 and at_atom <= ROUNDOFF
    return ok, f"45 off-atom cases, worst excess over max(1e-6, err) {worst:.2e}; on-atom excess {at_atom:.2e}"


def criterion_2():
    worst, n = -np.inf, 0
    for spec in CATALOG:
        f = AnalyticCf(spec)
        for a in (-2.0, 0.0, 1.5):
            for t in range(-5, 6):
                r = j_transform(f, a, float(t))
                worst = max(worst, abs(r.value) - 0.5 - r.err_estimate)
                n += 1
    rng = np.random.Generator(np.random.PCG64(20240601))
    biggest = 0.0
    for _ in range(50):
        spec = CATALOG[rng.integers(len(CATALOG))]
        eps = 10 ** rng.uniform(-3, 0)
        A = eps + 10 ** rng.uniform(0, 2)
        v = j_truncated(AnalyticCf(spec), rng.uniform(-3, 3), rng.uniform(-5, 5), eps, A)
        biggest = max(biggest, abs(v))
    ok = worst <= 1e-9 and biggest < 1
    return ok, f"{n} J values, max |J| - 1/2 - err = {worst:.2e}; max |truncated J| over 50 tuples = {biggest:.4f}"


def criterion_3():
    worst, n = -np.inf, 0
    for spec in CATALOG:
        f = AnalyticCf(spec)
        g = reflect_cf(f)
        for a in (-2.0, 0.0, 1.5):
            for t in (-4.0, -1.0, 0.5, 3.0):
                r1, r2 = j_transform(f, a, -t), j_transform(g, -a, t)
                worst = max(worst, abs(r1.value + r2.value) - r1.err_estimate - r2.err_estimate)
                n += 1
    return worst <= ROUNDOFF, f"{n} pairs, worst |J(f,a,-t) + J(f^-,-a,t)| - errs = {worst:.2e}"


def criterion_4():
    f = AnalyticCf(Exponential(1.0))
    worst, worst_raw = -np.inf, 0.0
    for t in np.linspace(-10.0, 10.0, 101):
        r = cf_positive_part(f, t)
        d = abs(r.value - 1 / (1 - 1j * t))
        worst = max(worst, d - 1e-6 - r.err_estimate)
        worst_raw = max(worst_raw, d)
    return worst <= 0, f"101 frequencies, max |error| {worst_raw:.2e}"


MC_SPECS = {
    "normal": Normal(0.0, 1.0),
    "shift_scale_normal": ShiftScale(Normal(0.0, 1.0), 1.0, 2.0),
    "uniform": Uniform(-1.0, 2.0),
    "two_point": TwoPoint(-1.0, 0.3, 2.0),
    "mixture": Mixture((0.3, 0.3, 0.4), (Normal(-1.0, 0.5), Exponential(2.0), TwoPoint(0.0, 0.5, 1.0))),
}
MC_T = (-3.0, -1.5, -0.5, 0.5, 1.0, 2.0, 4.0)
STRIKE, OPT = 0.5, (0.5, 1.0, -0.7)


def criterion_5(n_samples=10_000_000, seed=424242):
    worst, count = 0.0, 0
    for k, (name, spec) in enumerate(MC_SPECS.items()):
        f = AnalyticCf(spec)
        cases = [
            (positive_part, lambda t: cf_positive_part(f, t)),
            (absolute, lambda t: cf_abs(f, t)),
            (clamp(-1.0, 1.0), lambda t: cf_clamped(f, -1.0, 1.0, t)),
            (option(STRIKE, *OPT), lambda t: option_joint_cf(f, STRIKE, *(t * c for c in OPT))),
        ]
        for j, (functional, calc) in enumerate(cases):
            ests = mc_functional_cf(spec, functional, list(MC_T), n_samples, seed + 10 * k + j)
            for t, est in zip(MC_T, ests):
                r = calc(t)
                ratio = abs(r.value - est.value) / (4 * est.stderr + r.err_estimate + 1e-300)
                worst = max(worst, ratio)
                count += 1
    return worst <= 1, f"{count} comparisons at {n_samples:.0e} samples, worst |gap| / (4 stderr + err) = {worst:.3f}"


def criterion_6():
    spec = TwoPoint(-1.0, 0.5, 1.0)
    law = lattice_law_from_spec(spec)
    hist = dp_lattice_max(law, 8, history=True)
    lines, ok = [], True
    for rule in ("auto", "cubic"):
        grids = lindley_cf_recurrence(AnalyticCf(spec), WalkRecurrenceConfig(math.pi, math.pi / 64, 8,
                                                                             interpolation=rule))
        diffs = [float(np.max(np.abs(g.samples - law_to_cf(h.max_law, g.nodes)))) for g, h in zip(grids, hist)]
        ok = ok and max(diffs) <= 1e-4
        lines.append(f"{rule}: " + " ".join(f"{d:.1e}" for d in diffs[1:]))
    return ok, "max node error for n=1..8, " + "; ".join(lines)


def criterion_7():
    zs = (0.2, 0.5, 0.8, 0.5j, 0.4 + 0.4j)
    grid = (0.0, 0.3, 0.7, 1.5)
    worst, n = -np.inf, 0
    for spec in (TwoPoint(-1.0, 0.5, 1.0), Lattice(1.0, (-1, 0, 2), (0.3, 0.3, 0.4))):
        f, law = AnalyticCf(spec), lattice_law_from_spec(spec)
        for s, t in itertools.product(grid, grid):
            prov = dp_phi_provider(law, s, t, 40)
            for z in zs:
                p = SpitzerParams(z, s, t, 40)
                rhs = spitzer_rhs(f, p)
                lhs = spitzer_lhs(f, p, prov)
                cls = spitzer_classic(f, p)
                g1 = abs(lhs.value - rhs.value) - (lhs.truncation_bound + lhs.err_estimate + rhs.err_estimate + 1e-4)
                g2 = abs(cls.value - rhs.value) - (cls.truncation_bound + cls.err_estimate + rhs.err_estimate + 1e-4)
                worst = max(worst, g1, g2)
                n += 1
    return worst <= 0, f"{n} (walk, s, t, z) tuples, worst gap minus budget {worst:.2e}"


def criterion_8():
    spec = TwoPoint(-1.0, 0.5, 1.0)
    f = AnalyticCf(spec)
    hist = dp_lattice_max(lattice_law_from_spec(spec), 5, history=True)
    worst = 0.0
    for s in (0.3, 0.7):
        c = series_coefficients(lambda z: spitzer_rhs_max(f, s, z).value, 0.3, 64, 5)
        exact = np.array([law_to_cf(h.max_law, s) for h in hist])
        worst = max(worst, float(np.max(np.abs(c - exact))))
    return worst <= 1e-3, f"n <= 5, s in {{0.3, 0.7}}, max coefficient error {worst:.2e}"


def criterion_9():
    worst, n = -np.inf, 0
    for spec in CATALOG:
        f = AnalyticCf(spec)
        for t in (-4.0, -1.0, 0.0, 0.5, 2.0, 5.0):
            first, second = cf_abs_forms(f, t)
            worst = max(worst, abs(first.value - second.value) - first.err_estimate - second.err_estimate)
            n += 1
    return worst <= ROUNDOFF, f"{n} (law, t) pairs, worst disagreement minus errs {worst:.2e}"


def criterion_10():
    coin = "{type: two_point, x1: -1, p: 0.5, x2: 1}"
    runs = {
        "spitzer": ["spitzer", "--dist", coin, "--s", "0,0.7", "--t", "0.4", "--z-re", "0.5,0.4",
                    "--z-im", "0,0.4", "--seed", "17", "--format", "json"],
        "spitzer-mc": ["spitzer", "--dist", "{type: normal, mu: -0.2}", "--s", "0.5", "--t", "0.3",
                       "--z-re", "0.3", "--N", "10", "--paths", "20000", "--seed", "17"],
        "transform": ["transform", "option", "--dist", "{type: normal, mu: 0.3}", "--grid=-2:2:9",
                      "--strike", "0.5", "--alpha", "0.5", "--beta", "1", "--gamma", "-0.7",
                      "--seed", "17", "--workers", "2"],
    }
    same = []
    for name, argv in runs.items():
        outs = [subprocess.run([sys.executable, "-m", "cfpart", *argv], capture_output=True) for _ in range(2)]
        same.append(outs[0].stdout == outs[1].stdout and len(outs[0].stdout) > 0
                    and outs[0].returncode == outs[1].returncode)
    return all(same), ", ".join(f"{n}: {'identical' if s else 'DIFFERENT'}" for n, s in zip(runs, same))


CRITERIA = {
    1: ("point-mass exactness", criterion_1),
    2: ("bound suites", criterion_2),
    3: ("parity", criterion_3),
    4: ("nonnegative fixed point", criterion_4),
    5: ("Monte Carlo concordance", criterion_5),
    6: ("Lindley recurrence vs DP", criterion_6),
    7: ("Spitzer round trip", criterion_7),
    8: ("coefficient extraction", criterion_8),
    9: ("dual-form |X| self-test", criterion_9),
    10: ("CLI determinism", criterion_10),
}


def _line(k, ok, detail, seconds):
    name = CRITERIA[k][0]
    return f"[{'PASS' if ok else 'FAIL'}] criterion {k:2d} {name} ({seconds:.1f}s): {detail}"


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_acceptance(k, acceptance_report):
    t0 = time.time()
    ok, detail = CRITERIA[k][1]()
    line = _line(k, ok, detail, time.time() - t0)
    print(line)
    acceptance_report(line)
    assert ok, line


if __name__ == "__main__":
    failed = 0
    for k in sorted(CRITERIA):
        t0 = time.time()
        ok, detail = CRITERIA[k][1]()
        failed += not ok
        print(_line(k, ok, detail, time.time() - t0), flush=True)
    sys.exit(1 if failed else 0)
