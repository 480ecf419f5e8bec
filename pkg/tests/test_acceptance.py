"""Acceptance suite: one PASS/FAIL line per criterion.

Run directly (``python3 tests/test_acceptance.py``) or under pytest; the
lines are also printed in pytest's terminal summary.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction as F

import pytest

from shiftlab import families as fa
from shiftlab import instances
from shiftlab import measures as ms
from shiftlab import scalars as sc
from shiftlab.shifts1d import MeasureTail, WeightSeq1D, backward_extend_1d, eta_ext_of_restriction, verify_moments
from shiftlab.shifts2d import backward_extend_2d, gamma2, gamma2_path, lattice, six_point_matrix

RESULTS: dict[int, tuple[str, bool, str]] = {}


def _rat(rng, lo=F(1, 20), hi=F(19, 20), den=40):
    return lo + (hi - lo) * F(rng.randint(1, den - 1), den)


def _atomic(rng, with_one=False, lo=F(1, 20)):
    ts = sorted({_rat(rng, lo) for _ in range(rng.randint(1, 4))})
    if with_one:
        ts.append(F(1))
    ws = [rng.randint(1, 9) for _ in ts]
    return ms.atomic([(t, F(w, sum(ws))) for t, w in zip(ts, ws)])


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------

def criterion_log_instance():
    start = time.perf_counter()
    report = instances.example13()
    elapsed = time.perf_counter() - start
    problems = [f"mismatch: {n}" for n in report.failed]
    if elapsed >= 5:
        problems.append(f"runtime {elapsed:.1f}s >= 5s")
    return not problems, "; ".join(problems) or f"{len(report.checks)} quantities match in {elapsed:.2f}s"


def criterion_symmetric_instance():
    start = time.perf_counter()
    report = instances.corollary20()
    elapsed = time.perf_counter() - start
    problems = [f"mismatch: {n}" for n in report.failed]
    if elapsed >= 5:
        problems.append(f"runtime {elapsed:.1f}s >= 5s")
    return not problems, "; ".join(problems) or f"{len(report.checks)} quantities match in {elapsed:.2f}s"


def criterion_band():
    start = time.perf_counter()
    problems = []
    b = fa.family2_thresholds(F(1, 2), F(4, 5))
    if b.sub != sc.sqrt(F(48, 100)):
        problems.append("subnormal bound is not sqrt(0.48)")
    if abs(sc.to_mpf(b.hyp) - sc.MP.mpf("0.77611")) > sc.MP.mpf("5e-6"):
        problems.append("hyponormal bound differs from 0.77611")
    scan = fa.family2_region_scan(F(1, 2), 100, seed=0)
    if len(scan.checked) != 100:
        problems.append(f"subsample has {len(scan.checked)} points")
    if scan.disagreements:
        problems.append(f"{len(scan.disagreements)} label disagreements")
    if scan.ordering_failures:
        problems.append(f"ordering fails at {len(scan.ordering_failures)} x values")
    elapsed = time.perf_counter() - start
    if elapsed >= 30:
        problems.append(f"runtime {elapsed:.1f}s >= 30s")
    detail = f"band fraction {fa.fixed(scan.band_fraction(), 4)}, {len(scan.checked)} points re-checked in {elapsed:.2f}s"
    return not problems, "; ".join(problems) or detail


def _prop_stampfli(rng):
    for _ in range(100):
        a0 = _rat(rng, F(1, 10), F(3))
        a1 = a0 + _rat(rng, F(1, 10), F(3))
        a2 = a1 + _rat(rng, F(1, 10), F(3))
        c = ms.stampfli_completion(a0, a1, a2)
        g = [ms.moment(c.measure, n) for n in range(52)]
        if not all(sc.is_exact(x) for x in g):
            return "inexact moment"
        if any(g[n + 2] != c.phi0 * g[n] + c.phi1 * g[n + 1] for n in range(50)):
            return f"recursion fails for {(a0, a1, a2)}"
        if eta_ext_of_restriction(a0, a1, a2) != sc.sqrt(a0):
            return f"restricted extremal weight differs for {(a0, a1, a2)}"
    return None


def _prop_paths(rng):
    shifts = [
        fa.family2_build(F(1, 2), F(4, 5), F(73, 100)),
        fa.family3_build(ms.density(0, 1, [0, 0, 3]), F(1, 2)),
        fa.family4_build(ms.atomic([(F(1, 4), F(1, 2)), (1, F(1, 2))]), F(1, 2)),
    ]
    for s in shifts:
        for k1, k2 in lattice(8):
            target = gamma2(s, (k1, k2))
            steps = ["x"] * k1 + ["y"] * k2
            for _ in range(10):
                rng.shuffle(steps)
                if sc.compare(gamma2_path(s, steps), target) != 0:
                    return f"{s.name}: path {''.join(steps)} disagrees"
    return None


def _prop_backward(rng):
    for _ in range(30):
        mu = _atomic(rng)
        a0sq = _rat(rng) * ms.ext_value_sq(mu)
        w = WeightSeq1D((a0sq,), MeasureTail(mu, 0))
        if not verify_moments(w, backward_extend_1d(mu, a0sq), 10).holds:
            return "1d exact moments differ"
    log = ms.density(F(1, 2), 1, [2])
    a0sq = F(1, 2) * ms.ext_value_sq(log)
    w = WeightSeq1D((a0sq,), MeasureTail(log, 0))
    if not verify_moments(w, backward_extend_1d(log, a0sq), 10, rel_tol="1e-10").holds:
        return "1d numeric moments differ"
    for _ in range(30):
        mu_m = ms.Measure2D.product(_atomic(rng), _atomic(rng))
        norm = mu_m.neg_moment_y(1).value
        b00sq = _rat(rng) / norm
        c = b00sq * norm
        nu = ms.marginal_x(ms.extremal_measure(mu_m)).scaled(c) + _atomic(rng, lo=F(0)).scaled(1 - c)
        mu = backward_extend_2d(mu_m, b00sq, nu)
        for i, j in lattice(10):
            want = ms.moment(nu, i) if j == 0 else b00sq * mu_m.moment(i, j - 1)
            if mu.moment(i, j) != want:
                return f"2d moment ({i}, {j}) differs"
    return None


def _prop_factored(rng):
    for _ in range(100):
        e, x, a = _rat(rng), _rat(rng), _rat(rng)
        if fa.family3_p(e, x, a, 2 * a - e) != fa.family3_p_factored(e, x, a):
            return f"identity fails at {(e, x, a)}"
    return None


def _prop_sign_flips(rng):
    delta = F(1, 10**6)
    done = 0
    while done < 25:
        omega = _atomic(rng, lo=F(1, 10))
        if len(omega.atoms) < 2:
            continue
        x0 = _rat(rng, F(1, 10), F(1))
        x1 = x0 + _rat(rng, F(1, 20), F(1))
        x2 = x1 + _rat(rng, F(1, 20), F(1))
        e1, ee = ms.moment(omega, 1), ms.ext_value_sq(omega)
        lo = x0 * ee / x1
        e0 = (lo + _rat(rng) * (e1 - lo)).limit_denominator(2000)
        if not lo < e0 < e1:
            continue
        p = fa.Family1Params(x0, x1, x2, e0, omega)
        th = fa.family1_thresholds(p)
        signs = [sc.sign(fa.family1_moment_det(p, th.s_sq + d)) for d in (-delta, 0, delta)]
        if signs != [1, 0, -1]:
            return f"moment determinant signs {signs} around s"
        psd = [six_point_matrix(fa.family1_build(p, th.h_sq + d, strict=False), (0, 0)).is_psd()
               for d in (-delta, 0, delta)]
        if psd != [True, True, False]:
            return f"six-point verdicts {psd} around h"
        done += 1
    return None


def criterion_properties():
    rng = random.Random(20261016)
    parts = {
        "a+b stampfli": _prop_stampfli,
        "c paths": _prop_paths,
        "d backward extension": _prop_backward,
        "e factored p": _prop_factored,
        "f sign flips": _prop_sign_flips,
    }
    problems = []
    for name, fn in parts.items():
        err = fn(rng)
        if err:
            problems.append(f"{name}: {err}")
    return not problems, "; ".join(problems) or "all sub-suites hold"


def criterion_equivalence():
    rng = random.Random(22)
    horizon = 50
    decided = 0
    problems = []
    for i in range(20):
        with_one = i % 2 == 0
        nu = _atomic(rng, with_one=with_one)
        w = WeightSeq1D((), MeasureTail(nu, 0), validate=False)
        low = min(w.gamma(n) for n in range(horizon + 1))
        rho = ms.atom_at(nu, 1)
        if with_one:
            y_sq = [rho, rho / 2, (rho + low) / 2 if low > rho else rho * F(11, 10)][i // 2 % 3]
        else:
            y_sq = low * F(11, 10)
        chk = fa.family4_equivalence_check(nu, y_sq, horizon)
        if not with_one and y_sq > low and chk.hyponormal.holds is not False:
            problems.append(f"sample {i}: no failure within the horizon")
        if chk.horizon_decides:
            decided += 1
            if not chk.agrees:
                problems.append(f"sample {i}: six-point verdict and atom criterion disagree")
    return not problems, "; ".join(problems) or f"{decided}/20 samples decided, all agree"


CRITERIA = [
    (1, "log-density instance (thresholds, completion, classification)", criterion_log_instance),
    (2, "symmetric instance, exact", criterion_symmetric_instance),
    (3, "second-family band and scan cross-check", criterion_band),
    (4, "property suites (a)-(f)", criterion_properties),
    (5, "hyponormal iff subnormal for the fourth family", criterion_equivalence),
]


def line(num, title, ok, detail) -> str:
    return f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {title} -- {detail}"


@pytest.mark.parametrize("num, title, fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(num, title, fn):
    ok, detail = fn()
    RESULTS[num] = (title, ok, detail)
    print(line(num, title, ok, detail))
    assert ok, detail


def main() -> int:
    failures = 0
    for num, title, fn in CRITERIA:
        ok, detail = fn()
        failures += not ok
        print(line(num, title, ok, detail), flush=True)
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
