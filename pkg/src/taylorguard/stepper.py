"""Locate the first time a trajectory enters a guard set.

The search walks along the trajectory with *small steps* that re-use one
Taylor expansion, and *big steps* that re-centre the expansion at the
latest accepted point.  Every accepted time ``t_i`` has a certified
positive guard distance, and the step sizes are small enough that the
trajectory cannot touch the guard in between, so the ``t_i`` approximate
the crossing time from the left.  Near the guard a secant estimate
proposes candidate right end points; a candidate whose signed distance is
certified negative closes the bracket.

Whenever a decision needed by this procedure is undecidable at the current
working precision the attempt is abandoned and the whole solve restarts
with more bits.
"""

from __future__ import annotations

import enum
import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .flow import PolyFlow, State, is_autonomous_linear, recenter
from .guard import GuardSpec
from .scalar import (NO, YES, PrecisionExhausted, Scalar, compare_lt, enclose,
                     multivalued_negative, next_precision, power_of_two, smax, smin,
                     working_precision, zero)
from .series import BoundTriple, derive_bounds, eval_series
from .taylor import SeriesSystem, series_general, series_linear

log = logging.getLogger(__name__)

DEFAULT_DELTA = 1
DEFAULT_EPS = 1
INITIAL_BITS = 64
# the trajectory may move toward the guard at exactly the rate bound (time
# guards, constant flows); shrinking the step keeps the next point strictly outside
STEP_SAFETY = Fraction(17, 16)


class Status(enum.Enum):
    BRACKETED = "BRACKETED"
    LEFT_ONLY = "LEFT_ONLY"


class CandidateStatus(enum.Enum):
    OPEN = "OPEN"
    REJECTED = "REJECTED"


@dataclass
class Candidate:
    j: int
    t_hat: Scalar
    t_left: Scalar
    status: CandidateStatus = CandidateStatus.OPEN
    gamma: Optional[Scalar] = None


@dataclass
class SolverStats:
    bits: int = 0
    working_bits: int = 0
    big_steps: int = 0
    small_steps: int = 0
    max_order: int = 0
    wall_time: float = 0.0
    restarts: int = 0

    def table_row(self) -> dict:
        """Columns ``n, p, b, s, l_max, time``."""
        return {"n": self.bits, "p": self.working_bits, "b": self.big_steps,
                "s": self.small_steps, "l_max": self.max_order,
                "time": round(self.wall_time, 4)}


@dataclass
class GuardHit:
    status: Status
    t_lo: Scalar
    t_hi: Optional[Scalar]
    state_lo: State
    stats: SolverStats
    trajectory: list = field(default_factory=list, repr=False)

    @property
    def bracketed(self) -> bool:
        return self.status is Status.BRACKETED


@dataclass
class Budget:
    max_big_steps: int = 10_000
    max_small_steps: int = 1_000_000
    max_seconds: float = 600.0
    max_bits: int = 1 << 20


# -- step control ------------------------------------------------------


def small_step_size(dist: Scalar, U: Scalar, R_prime: Scalar, consumed: Scalar) -> Scalar:
    """``min(dist / U, R' - consumed)``, or the remaining room if ``U`` may be 0."""
    room = R_prime - consumed
    if U.contains_zero():
        return room
    return smin(dist / U, room)


def big_step_due(s1: Scalar, R: Scalar, consumed: Scalar) -> bool:
    """Re-centre once the small steps add up to ``min(s1**(1/4) R**(1/2), R/2)``.

    An undecided comparison keeps small-stepping, unless ``consumed`` may
    already have reached ``R/2``.
    """
    half = R.scale2(-1)
    threshold = smin(s1.sqrt().sqrt() * R.sqrt(), half)
    if compare_lt(threshold, consumed) is YES:
        return True
    return compare_lt(consumed, half) is not YES


def secant_slope(t_prev: Scalar, t_cur: Scalar, delta_prev: Scalar, delta_cur: Scalar) -> Scalar:
    return (delta_cur - delta_prev) / (t_cur - t_prev)


def propose_candidate(t_prev: Scalar, t_cur: Scalar, delta_prev: Scalar, delta_cur: Scalar,
                      n: int, j: int = 0) -> Optional[Candidate]:
    """Secant extrapolation ``t_cur + 2 rho`` past the predicted crossing.

    Only proposed when the distance is certainly decreasing and the
    predicted remaining time ``rho`` is certainly below ``2**-(n+1)``.
    """
    slope = secant_slope(t_prev, t_cur, delta_prev, delta_cur)
    if not slope.is_negative():
        return None
    rho = delta_cur / -slope
    if compare_lt(rho, power_of_two(-n - 1)) is not YES:
        return None
    return Candidate(j, (t_cur + rho.scale2(1)).upper(), t_cur)


def retest_candidates(candidates: list, j: int,
                      gamma_at: Callable[[Scalar], Optional[Scalar]],
                      clear: bool = False) -> Optional[Scalar]:
    """Re-check open candidates with the multivalued test at precision ``k = j``.

    Returns the smallest candidate time whose signed distance is certainly
    below ``-2**-j``.  Candidates with certainly positive signed distance
    are dropped; ``clear`` drops all of them.
    """
    if clear:
        for c in candidates:
            c.status = CandidateStatus.REJECTED
        candidates.clear()
        return None
    found = None
    for c in list(candidates):
        if c.status is not CandidateStatus.OPEN:
            candidates.remove(c)
            continue
        if c.gamma is None:
            c.gamma = gamma_at(c.t_hat)
            if c.gamma is None:
                continue
        answer = multivalued_negative(c.gamma, max(j, 1))
        if answer is YES:
            if found is None or c.t_hat.hi < found.hi:
                found = c.t_hat
        elif answer is NO and c.gamma.is_positive():
            c.status = CandidateStatus.REJECTED
            candidates.remove(c)
    return found


# -- the solver --------------------------------------------------------


class _BudgetSpent(Exception):
    pass


class _Attempt:
    """One pass at a fixed working precision."""

    def __init__(self, flow: PolyFlow, start: State, guard: GuardSpec, n: int, budget: Budget,
                 delta, eps, deadline: float, keep_trajectory: bool) -> None:
        self.flow = flow.enclose()
        self.guard = guard.enclose()
        self.start = start.enclose()
        self.n = n
        self.budget = budget
        self.delta = enclose(delta)
        self.eps = enclose(eps)
        self.deadline = deadline
        self.keep_trajectory = keep_trajectory
        self.stats = SolverStats(bits=n)
        self.trajectory: list[State] = []
        self.t = self.start.t
        self.w = self.start.w

    def _accept(self, t: Scalar, w: tuple) -> None:
        self.t, self.w = t, w
        if self.keep_trajectory:
            self.trajectory.append(State(t, w))

    def _hit(self, status: Status, t_hi: Optional[Scalar] = None) -> GuardHit:
        return GuardHit(status, self.t, t_hi, State(self.t, self.w), self.stats, self.trajectory)

    def left_only(self) -> GuardHit:
        return self._hit(Status.LEFT_ONLY)

    def _eval(self, series: SeriesSystem, bounds: BoundTriple, z: Scalar) -> tuple:
        if self.stats.small_steps >= self.budget.max_small_steps:
            raise _BudgetSpent
        if time.perf_counter() > self.deadline:
            raise _BudgetSpent
        y = eval_series(series, bounds, z)
        self.stats.small_steps += 1
        self.stats.max_order = max(self.stats.max_order, series.max_used_order)
        return y

    def run(self) -> GuardHit:
        try:
            return self._run()
        except _BudgetSpent:
            return self.left_only()

    def _run(self) -> GuardHit:
        F, g, n = self.flow, self.guard, self.n
        self._accept(self.t, self.w)
        gamma = g.signed_distance(self.start.point())
        if not gamma.is_positive():
            if gamma.is_negative():
                return self._hit(Status.BRACKETED, self.t)
            raise PrecisionExhausted("initial state is too close to the guard border")
        linear = is_autonomous_linear(F)
        max_gap = power_of_two(-n)
        threshold = power_of_two(-n - 1)
        candidates: list[Candidate] = []
        step = 0
        while True:
            if self.stats.big_steps >= self.budget.max_big_steps:
                return self.left_only()
            center = State(self.t, self.w)
            if linear:
                series = series_linear(F, self.w)
            else:
                series = series_general(recenter(F, center), base=self.w)
            bounds = derive_bounds(F, center, self.delta, self.eps)
            self.stats.big_steps += 1
            R_half = bounds.R.scale2(-1)
            rate = (smax(bounds.U, g.rate_bound(bounds.U)) * STEP_SAFETY).upper()

            def gamma_at(t_hat: Scalar) -> Optional[Scalar]:
                z = t_hat - center.t
                if compare_lt(abs(z), bounds.R) is not YES:
                    return None
                return g.signed_distance((t_hat, *self._eval(series, bounds, z)))

            consumed = zero()
            s1 = None
            dist = gamma
            fresh = bool(candidates)
            while True:
                s = small_step_size(dist, rate, R_half, consumed).lower()
                if not s.is_positive():
                    raise PrecisionExhausted("no certified positive step size")
                ahead = consumed + s
                y = self._eval(series, bounds, ahead)
                t_new = center.t + ahead
                if any(x.width > max_gap.lo for x in y):
                    # wrapping has eaten the bits an n-bit answer needs
                    raise PrecisionExhausted("state enclosure is wider than 2**-n")
                gamma_new = g.signed_distance((t_new, *y))
                if not gamma_new.is_positive():
                    raise PrecisionExhausted("cannot certify the trajectory is outside the guard")
                t_prev, dist_prev = self.t, dist
                self._accept(t_new, y)
                consumed, dist = ahead, gamma_new
                step += 1
                if s1 is None:
                    s1 = s

                # secant in time measured from t_prev, where the step is exact
                slope = secant_slope(zero(), s, dist_prev, dist)
                receding = slope.lo >= 0
                far = (not receding and slope.is_negative()
                       and compare_lt(dist / -slope, threshold) is NO)
                if receding or far:
                    retest_candidates(candidates, step, gamma_at, clear=True)
                    cand = None
                else:
                    cand = propose_candidate(zero(), s, dist_prev, dist, n, step)
                    if cand is not None:
                        cand.t_hat = (t_prev + cand.t_hat).upper()
                        cand.t_left = t_new
                        candidates.append(cand)
                deferred = False
                if candidates and (cand is not None or fresh):
                    t_hi = retest_candidates(candidates, step, gamma_at)
                    if t_hi is not None:
                        gap = t_hi - self.t
                        if gap.is_positive() and gap.hi <= max_gap.lo:
                            return self._hit(Status.BRACKETED, t_hi)
                    deferred = any(c.gamma is None for c in candidates)
                fresh = False
                if deferred or big_step_due(s1, bounds.R, consumed):
                    break
            gamma = dist


def solve(F: PolyFlow, s0: State, g: GuardSpec, n: int, budget: Optional[Budget] = None, *,
          delta=DEFAULT_DELTA, eps=DEFAULT_EPS, initial_bits: int = INITIAL_BITS,
          keep_trajectory: bool = False) -> GuardHit:
    """Bracket the first time the trajectory through ``s0`` enters ``g``.

    ``n`` is the number of bits wanted for the crossing time: a
    ``BRACKETED`` result satisfies ``t_hi - t_lo <= 2**-n``.  When the
    budget runs out first, the result is ``LEFT_ONLY`` and ``t_lo`` is
    still a certified lower bound.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if s0.d != F.d:
        raise ValueError(f"initial state has dimension {s0.d}, flow has {F.d}")
    if g.dim != F.d + 1:
        raise ValueError(f"guard lives in dimension {g.dim}, expected {F.d + 1}")
    budget = budget or Budget()
    started = time.perf_counter()
    deadline = started + budget.max_seconds
    bits = initial_bits
    restarts = 0
    while True:
        with working_precision(bits):
            attempt = _Attempt(F, s0, g, n, budget, delta, eps, deadline, keep_trajectory)
            try:
                hit = attempt.run()
            except PrecisionExhausted as exc:
                log.debug("restart after %d bits: %s", bits, exc)
                hit = None
                bits_next = next_precision(bits)
                if bits_next > budget.max_bits or time.perf_counter() > deadline:
                    hit = attempt.left_only()
        if hit is not None:
            hit.stats.working_bits = bits
            hit.stats.restarts = restarts
            hit.stats.wall_time = time.perf_counter() - started
            return hit
        bits = bits_next
        restarts += 1
