"""Acceptance criteria, one test each.

Every test prints a single ``[PASS]``/``[FAIL]`` line; the lines are
repeated in the pytest terminal summary (see conftest.py).  Run the file
directly with ``python tests/test_acceptance.py`` to get only the lines.

Set ``TAYLORGUARD_SLOW=1`` to include the optional eta = 1000 row.
"""

from __future__ import annotations

import functools
import os
import time
from fractions import Fraction
from random import Random

import pytest

from taylorguard.cli import run as cli_run
from taylorguard.flow import PolyFlow, State
from taylorguard.guard import HalfSpace
from taylorguard.problem import parse_problem
from taylorguard.scalar import GUARD_BITS, enclose, working_precision
from taylorguard.series import derive_bounds, eval_series, truncation_bound
from taylorguard.stepper import Budget, Status, solve
from taylorguard.taylor import series_general, series_linear

from oracles import (affine_coefficients, affine_components, composed_coefficient,
                     damped_crossing, mpf_fraction, picard_coefficients, sin_cos, to_fraction)

REPORT: list[str] = []

DAMPED = PolyFlow([{(0, 0, 1): 1}, {(0, 1, 0): -1, (0, 0, 1): "0.02"}])
SINE = PolyFlow([{(0, 0, 1): 1}, {(0, 1, 0): -1}])
X1_LE_MINUS_2 = HalfSpace((0, -1, 0), 2)
REFERENCE_T_G = Fraction("73.5422061995")
SLOW = os.environ.get("TAYLORGUARD_SLOW") == "1"


def report(num, title: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {title}"
    if detail:
        line += f" ({detail})"
    REPORT.append(line)
    print(line)
    assert ok, line


@functools.lru_cache(maxsize=None)
def damped(n: int):
    started = time.perf_counter()
    hit = solve(DAMPED, State(0, (0, 1)), X1_LE_MINUS_2, n)
    return hit, time.perf_counter() - started


def _bracket(hit):
    return hit.t_lo.bounds()[0], hit.t_hi.bounds()[1]


def _round10(q: Fraction) -> Fraction:
    return Fraction(round(q * 10 ** 10), 10 ** 10)


def test_1_guard_hit_benchmark():
    truth = mpf_fraction(damped_crossing(40))
    lines, ok, prev = [], True, None
    for n in (20, 50, 100):
        hit, secs = damped(n)
        good = hit.status is Status.BRACKETED
        if good:
            lo, hi = _bracket(hit)
            good = 0 < hi - lo <= Fraction(1, 2 ** n) and lo < truth < hi and secs <= 60
            if n == 20:
                # the 10-decimal reference lies in the coarse bracket
                good = good and lo < REFERENCE_T_G < hi
            else:
                # finer brackets are narrower than that rounding; they must round to it
                good = good and _round10(lo) == REFERENCE_T_G == _round10(hi)
            if prev is not None:
                good = good and prev[0] <= lo and hi <= prev[1]
            prev = (lo, hi)
            lines.append(f"n={n}: [{float(lo):.13f}, {float(hi):.13f}] {secs:.1f}s")
        else:
            lines.append(f"n={n}: {hit.status.value}")
        ok = ok and good
    report(1, "damped benchmark brackets t_G at n=20/50/100, nested, <=60s", ok, "; ".join(lines))


SINE_ROWS = {10: "-0.544021110", 100: "-0.506365641", 1000: "0.826879540"}


@functools.lru_cache(maxsize=None)
def sine_row(eta: int):
    text = f"""{{"dimension": 2,
        "flow": [[{{"c": "1", "k": 0, "i": [0, 1]}}], [{{"c": "-1", "k": 0, "i": [1, 0]}}]],
        "initial": {{"t0": "0", "w0": ["0", "1"]}},
        "guard": {{"type": "time", "eta": "{eta}"}}}}"""
    return cli_run(parse_problem(text), 40, digits=9, trajectory=True)


def test_2_sine_table_rows():
    got = {}
    ok = True
    for eta in (10, 100):
        hit, rec = sine_row(eta)
        got[eta] = rec["state_lo"][0]
        ok = ok and hit.status is Status.BRACKETED and got[eta] == SINE_ROWS[eta]
    detail = ", ".join(f"eta={k}: {v}" for k, v in got.items())
    report(2, "sin(eta) rows print the reference 9 decimals", ok, detail)


@pytest.mark.skipif(not SLOW, reason="optional slow row; set TAYLORGUARD_SLOW=1")
def test_2b_sine_eta_1000():
    hit, rec = sine_row(1000)
    ok = hit.status is Status.BRACKETED and rec["state_lo"][0] == SINE_ROWS[1000]
    report("2 (optional)", "sin(1000) row", ok,
           f"{rec['state_lo'][0]}, {hit.stats.wall_time:.0f}s")


def _rational(rng: Random) -> Fraction:
    q = rng.choice([1, 2, 3, 4, 5, 7, 8])
    return Fraction(rng.randint(-2 * q, 2 * q), q)


def test_3_coefficient_oracle():
    rng = Random(2011)
    failures = 0
    for _ in range(50):
        d = rng.randint(1, 3)
        A = [[_rational(rng) for _ in range(d)] for _ in range(d)]
        b = [_rational(rng) if rng.random() < 0.5 else Fraction(0) for _ in range(d)]
        w0 = [_rational(rng) for _ in range(d)]
        order = rng.randint(1, 12)
        exact = affine_coefficients(A, b, w0, order)
        sys = series_linear(PolyFlow(affine_components(A, b), d=d), w0, order)
        for v in range(d):
            for a, q in zip(sys.a[v], exact[v]):
                lo, hi = a.bounds()
                failures += not (lo <= q <= hi)
    report(3, "series_linear encloses exact affine-map coefficients, 50 systems",
           failures == 0, f"{failures} failures")


def test_4_ode_consistency():
    rng = Random(1979)
    failures = 0
    for _ in range(25):
        d = rng.randint(1, 2)
        mu = rng.randint(1, 3)
        comps = []
        for _ in range(d):
            comp = {}
            for _ in range(rng.randint(1, 4)):
                e = (rng.randint(0, mu),) + tuple(rng.randint(0, mu) for _ in range(d))
                comp[e] = _rational(rng)
            comps.append(comp)
        order = rng.randint(2, 8)
        with working_precision(128):
            sys = series_general(PolyFlow(comps, d=d, mu=mu), order)
        exact = picard_coefficients(comps, order)
        z = [[to_fraction(c) for c in row] for row in exact]
        for v in range(d):
            for ell in range(order):
                lhs = (sys.a[v][ell + 1] * (ell + 1)).bounds()
                rhs = composed_coefficient(comps, z, v, ell)
                failures += not (lhs[0] <= rhs <= lhs[1])
    report(4, "(l+1) a_(l+1) matches E(t, z) coefficients symbolically, 25 flows",
           failures == 0, f"{failures} failures")


def test_5_enclosure_soundness():
    rng = Random(5)
    misses = 0
    bits = 128
    with working_precision(bits):
        s = State(0, (0, 1))
        sys = series_linear(SINE, s.w)
        bounds = derive_bounds(SINE, s, 1, 1)
        half = bounds.R.bounds()[0] / 2
        for k in range(100):
            z = half * (Fraction(k) if k < 2 else Fraction(rng.randint(0, 10 ** 9), 10 ** 9))
            ref = [mpf_fraction(x) for x in sin_cos(z, 3 * bits)]
            ulp = Fraction(1, 2 ** (3 * bits - 2))
            for got, r in zip(eval_series(sys, bounds, enclose(z)), ref):
                lo, hi = got.bounds()
                misses += not (lo - ulp <= r <= hi + ulp)
    energy_bad = 0
    steps = 0
    for eta in (10, 100):
        hit, _ = sine_row(eta)
        for st in hit.trajectory:
            e = (st.w[0] ** 2 + st.w[1] ** 2).bounds()
            energy_bad += not (e[0] <= 1 <= e[1])
            steps += 1
    report(5, "sin/cos enclosures at 100 points and y1^2+y2^2 ~ 1 on every step",
           misses == 0 and energy_bad == 0 and steps > 0,
           f"{misses} misses, {energy_bad}/{steps} energy violations")


def test_6_truncation_bound_validity():
    rng = Random(6)
    bad = 0
    with working_precision(160):
        s = State(0, (0, 1))
        sys = series_linear(DAMPED, s.w, 80)
        bounds = derive_bounds(DAMPED, s, 1, 1)
        half = bounds.R.bounds()[0] / 2
        for _ in range(20):
            z = enclose(half * Fraction(rng.randint(1, 10 ** 6), 10 ** 6))
            n = rng.randint(0, 50)
            for v in range(2):
                def partial(order):
                    acc = sys.a[v][order]
                    for k in range(order - 1, -1, -1):
                        acc = acc * z + sys.a[v][k]
                    return acc
                diff = abs(partial(n) - partial(n + 20))
                bad += diff.lo > truncation_bound(bounds.M[v], bounds.R, abs(z), n).hi
    report(6, "|partial_n - partial_(n+20)| <= truncation bound at 20 (z, n)", bad == 0,
           f"{bad} violations")


def test_7_precision_scaling():
    lo_hit, _ = damped(20)
    hi_hit, secs = damped(1000)
    p20, p1000 = lo_hit.stats.working_bits, hi_hit.stats.working_bits
    s20, s1000 = lo_hit.stats.small_steps, hi_hit.stats.small_steps
    ok = (lo_hit.status is Status.BRACKETED and hi_hit.status is Status.BRACKETED
          and p20 >= 20 + GUARD_BITS and p1000 >= 1000 + GUARD_BITS and s1000 > s20)
    if ok:
        lo, hi = _bracket(hi_hit)
        ok = 0 < hi - lo <= Fraction(1, 2 ** 1000)
    report(7, "p >= n + guard bits and small steps grow from n=20 to n=1000", ok,
           f"n=20: p={p20} s={s20}; n=1000: p={p1000} s={s1000} {secs:.0f}s")


def test_8_degenerate_handling():
    zero = solve(PolyFlow([{}, {}]), State(0, (0, 0)), X1_LE_MINUS_2, 20,
                 Budget(max_big_steps=200, max_seconds=30))
    inside = solve(DAMPED, State("0.5", (-3, 1)), X1_LE_MINUS_2, 20)
    ok = (zero.status is Status.LEFT_ONLY and zero.t_hi is None
          and inside.status is Status.BRACKETED
          and inside.t_lo.bounds() == inside.t_hi.bounds() == (Fraction(1, 2),) * 2)
    report(8, "zero flow ends LEFT_ONLY; start inside guard gives t_lo = t_hi = t0", ok,
           f"zero flow: {zero.status.value} after {zero.stats.big_steps} big steps")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-s", "-p", "no:cacheprovider"]))
